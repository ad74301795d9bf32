use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

/// Small but complete argument lists for every command.
pub const COMMANDS: &[&[&str]] = &[
    &["sample", "--n", "33", "--seed", "4"],
    &["sample", "--n", "17", "--format", "csv", "--epsilons", "0.125", "--field", "dgff"],
    &["metric", "--n", "33", "--xi", "0.4", "--epsilons", "0.0625", "--seed", "2"],
    &["ball", "--n", "33", "--xi", "0.4", "--epsilons", "0.0625", "--seed", "2"],
    &["exponent", "--n", "33", "--xi", "0.4", "--epsilons", "0.25,0.125,0.0625", "--replicates", "3"],
    &["kpz", "--delta0", "2", "--gamma", "1.632993"],
    &["gmc", "--n", "32", "--gamma", "1", "--epsilons", "0.0625", "--replicates", "4"],
    &["confluence", "--n", "33", "--xi", "0.4", "--epsilons", "0.0625", "--targets", "5", "--format", "csv"],
    &["thickpoints", "--n", "65", "--gamma", "1"],
    &["annulus-event", "--n", "65", "--xi", "0.4", "--epsilons", "0.03125", "--replicates", "4", "--radius", "0.1"],
];

pub fn lqg(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lqg"));
    cmd.args(args).env_remove("LQG_THREADS").env_remove("LQG_MEMORY_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

/// Runs `args` writing into `dir` and returns every file's bytes by name.
pub fn run_into(args: &[&str], dir: &Path) -> (Output, BTreeMap<String, Vec<u8>>) {
    let mut full: Vec<&str> = args.to_vec();
    let d = dir.to_str().unwrap();
    full.extend(["--out", d]);
    let out = lqg(&full, &[]);
    let mut files = BTreeMap::new();
    if dir.exists() {
        for e in std::fs::read_dir(dir).unwrap() {
            let e = e.unwrap();
            if e.path().is_dir() {
                continue;
            }
            files.insert(e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap());
        }
    }
    (out, files)
}

/// Runs `args` twice into fresh directories; true when both succeed and every
/// output other than the manifest matches byte for byte, and the manifests
/// list the same hashes.
pub fn reproducible(args: &[&str]) -> bool {
    let tmp = tempfile::tempdir().unwrap();
    let (o1, f1) = run_into(args, &tmp.path().join("a"));
    let (o2, f2) = run_into(args, &tmp.path().join("b"));
    if !o1.status.success() || !o2.status.success() || o1.stdout != o2.stdout {
        return false;
    }
    let strip = |f: &BTreeMap<String, Vec<u8>>| {
        let mut f = f.clone();
        let m: serde_json::Value = serde_json::from_slice(&f.remove("manifest.json").unwrap()).unwrap();
        (f, m["outputs"].clone())
    };
    let ((a, ma), (b, mb)) = (strip(&f1), strip(&f2));
    !a.is_empty() && a == b && ma == mb
}
