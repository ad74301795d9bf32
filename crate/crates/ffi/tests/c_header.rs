//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include "lqg.h"
#include <stdio.h>

int main(void) {
    LqgField *f = NULL;
    LqgMetric *m = NULL;
    LqgDistanceMap *d = NULL;
    double cross = 0.0;
    if (lqg_field_sample_gff(33, 1.0 / 32.0, 7, true, &f) != LQG_STATUS_OK) return 1;
    if (lqg_metric_build(f, 0.0625, 0.4, 8, &m) != LQG_STATUS_OK) return 2;
    if (lqg_metric_crossing_distance(m, &cross) != LQG_STATUS_OK || !(cross > 0.0)) return 3;
    size_t src = 16 * 33 + 16;
    if (lqg_distance_map(m, &src, 1, &d) != LQG_STATUS_OK) return 4;
    size_t len = 0;
    if (lqg_distance_map_geodesic(d, 0, NULL, 0, &len) != LQG_STATUS_BUFFER_TOO_SMALL || len < 2) return 5;
    if (lqg_metric_build(f, 0.0625, 0.4, 5, &m) != LQG_STATUS_INVALID_ARGUMENT) return 6;
    printf("%s|%.6f\n", lqg_last_error(), cross);
    lqg_distance_map_free(d);
    lqg_metric_free(m);
    lqg_field_free(f);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().expect("test binary path");
    exe.parent().and_then(|p| p.parent()).expect("profile directory").to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("liblqg_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke program exited with {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("connectivity must be 4 or 8"), "{text}");
}
