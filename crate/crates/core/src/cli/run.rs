use super::output::Emitter;
use super::{CliError, Command, FieldChoice, Format, OutputRecord, Params, RunConfig};
use crate::experiments::{annulus_event, ball_raster, confluence_stat, thick_point_map, AnnulusEventReport, Raster};
use crate::exponents::{kpz, parameter_triple, q_subcritical, xi_to_gamma, CrossingEstimator, QuantumDimension};
use crate::field::{io as field_io, mollify, DgffSource, FieldGrid, FieldSource, MollifiedField};
use crate::gmc::{measure, moment_estimate};
use crate::lfpp::{build_metric, crossing_distance, distance_map, io as lfpp_io, LfppMetric};
use crate::seed::{mix64, rng_from_seed};
use crate::stats::mean_var;
use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

const DEFAULT_OUT: &str = "lqg-out";
const BYTES_PER_VERTEX: u64 = 160;
const DEFAULT_MEMORY_LIMIT: u64 = 8 << 30;

/// Result of a successful run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Text for stdout.
    pub stdout: String,
    /// Files written, without the manifest; empty when nothing was written.
    pub outputs: Vec<OutputRecord>,
    pub out_dir: Option<PathBuf>,
}

type CliResult<T> = std::result::Result<T, CliError>;

fn require<T: Clone>(v: &Option<T>, flag: &str, cmd: Command) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::usage(Some(flag), format!("required by '{}'", cmd.name())))
}

fn reject<T>(v: &Option<T>, flag: &str, cmd: Command) -> CliResult<()> {
    match v {
        Some(_) => Err(CliError::usage(Some(flag), format!("not used by '{}'", cmd.name()))),
        None => Ok(()),
    }
}

fn check(ok: bool, flag: &str, msg: impl Into<String>) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::usage(Some(flag), msg))
    }
}

/// Grid parameters shared by the field-based commands.
struct Grid {
    n: usize,
    spacing: f64,
}

fn grid(p: &Params, cmd: Command, default_spacing: fn(usize) -> f64) -> CliResult<Grid> {
    let n = require(&p.n, "--n", cmd)?;
    check(n >= 3, "--n", format!("grid needs at least 3 vertices per side, got {n}"))?;
    let spacing = p.spacing.unwrap_or_else(|| default_spacing(n));
    check(spacing > 0.0 && spacing.is_finite(), "--spacing", format!("must be positive, got {spacing}"))?;
    Ok(Grid { n, spacing })
}

fn unit_square(n: usize) -> f64 {
    1.0 / (n - 1) as f64
}

fn unit_cells(n: usize) -> f64 {
    1.0 / n as f64
}

fn xi_of(p: &Params, cmd: Command) -> CliResult<f64> {
    let xi = require(&p.xi, "--xi", cmd)?;
    check(xi > 0.0 && xi.is_finite(), "--xi", format!("must be positive, got {xi}"))?;
    Ok(xi)
}

fn epsilons(p: &Params, cmd: Command) -> CliResult<Vec<f64>> {
    let eps = require(&p.epsilons, "--epsilons", cmd)?;
    check(!eps.is_empty(), "--epsilons", "empty list")?;
    check(eps.iter().all(|e| *e > 0.0 && e.is_finite()), "--epsilons", "all scales must be positive")?;
    Ok(eps)
}

/// The single mollification scale of a metric command.
fn epsilon(p: &Params, cmd: Command) -> CliResult<f64> {
    let eps = epsilons(p, cmd)?;
    check(eps.len() == 1, "--epsilons", format!("'{}' takes exactly one scale", cmd.name()))?;
    Ok(eps[0])
}

fn format(p: &Params, allowed: &[Format]) -> CliResult<Format> {
    let f = p.format.unwrap_or(allowed[0]);
    check(allowed.contains(&f), "--format", format!("must be one of {allowed:?}"))?;
    Ok(f)
}

fn center(p: &Params, n: usize) -> CliResult<(usize, usize)> {
    match &p.center {
        None => Ok((n / 2, n / 2)),
        Some(c) => {
            check(c.len() == 2, "--center", "expected row,col")?;
            check(c[0] < n && c[1] < n, "--center", format!("outside the {n}x{n} grid"))?;
            Ok((c[0], c[1]))
        }
    }
}

fn source(p: &Params) -> DgffSource {
    match p.field.unwrap_or(FieldChoice::Gff) {
        FieldChoice::Gff => DgffSource::continuum(),
        FieldChoice::Dgff => DgffSource::lattice(),
    }
}

fn memory_limit() -> u64 {
    std::env::var("LQG_MEMORY_LIMIT").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MEMORY_LIMIT)
}

fn check_memory(n: usize, concurrent: usize) -> CliResult<()> {
    let need = (n as u64).saturating_mul(n as u64).saturating_mul(BYTES_PER_VERTEX).saturating_mul(concurrent as u64);
    let limit = memory_limit();
    if need > limit {
        return Err(CliError::resource(format!(
            "a {n}x{n} run needs about {need} bytes, above the limit of {limit} (LQG_MEMORY_LIMIT)"
        )));
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("report serializes");
    out.push(b'\n');
    out
}

fn metric_for(p: &Params, cmd: Command, g: &Grid, seed: u64) -> CliResult<LfppMetric> {
    let xi = xi_of(p, cmd)?;
    let eps = epsilon(p, cmd)?;
    let field = source(p).sample(g.n, g.spacing, seed)?;
    let m = mollify(&field, eps)?;
    Ok(build_metric(&m, xi, p.connectivity.unwrap_or_default())?)
}

/// Work to do once validation has passed.
type Job = Box<dyn FnOnce(&mut Emitter) -> CliResult<String> + Send>;

/// A validated command: whether it writes files, how much memory it needs,
/// and the work itself.
struct Plan {
    writes: bool,
    footprint: Option<(usize, usize)>,
    job: Job,
}

/// Executes a configuration: validates everything, then computes and writes
/// the outputs and `manifest.json`. Previously written files of this run are
/// removed on failure.
pub fn run(config: &RunConfig) -> CliResult<RunOutput> {
    let start = Instant::now();
    let p = &config.params;
    if let Some(t) = p.threads {
        check(t >= 1, "--threads", "must be at least 1")?;
    }
    let plan = plan(config.command, p)?;
    if let Some((n, k)) = plan.footprint {
        check_memory(n, k.min(p.threads.unwrap_or_else(rayon::current_num_threads)).max(1))?;
    }
    let out_dir = if plan.writes || p.out.is_some() {
        Some(p.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)))
    } else {
        None
    };
    let mut emitter = match &out_dir {
        Some(dir) => Emitter::new(dir)?,
        None => Emitter::discard(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(p.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::resource(e.to_string()))?;
    match pool.install(|| (plan.job)(&mut emitter)) {
        Ok(stdout) => {
            let outputs = emitter.finish(config, start.elapsed().as_secs_f64())?;
            Ok(RunOutput { stdout, outputs, out_dir })
        }
        Err(e) => {
            emitter.abort();
            Err(e)
        }
    }
}

fn plan(cmd: Command, p: &Params) -> CliResult<Plan> {
    let p = p.clone();
    let seed = p.seed.unwrap_or(0);
    match cmd {
        Command::Kpz => {
            let delta0 = require(&p.delta0, "--delta0", cmd)?;
            check((0.0..=2.0).contains(&delta0), "--delta0", format!("must lie in [0, 2], got {delta0}"))?;
            let triple = match (p.gamma, p.xi) {
                (Some(g), None) => {
                    check(g > 0.0 && g <= 2.0, "--gamma", format!("must lie in (0, 2], got {g}"))?;
                    parameter_triple(g)?
                }
                (None, Some(x)) => {
                    check(x > 0.0, "--xi", format!("must be positive, got {x}"))?;
                    xi_to_gamma(x)?
                }
                (Some(_), Some(_)) => return Err(CliError::usage(Some("--xi"), "give either --gamma or --xi, not both")),
                (None, None) => return Err(CliError::usage(Some("--gamma"), "required by 'kpz' (or --xi)")),
            };
            format(&p, &[Format::Json])?;
            let q = q_subcritical(triple.gamma);
            let value = kpz(delta0, triple.xi, q)?;
            Ok(Plan {
                writes: false,
                footprint: None,
                job: Box::new(move |em| {
                    #[derive(Serialize)]
                    struct Report {
                        delta0: f64,
                        gamma: f64,
                        xi: f64,
                        q: f64,
                        quantum_dimension: QuantumDimension,
                    }
                    if p.out.is_some() {
                        let r = Report { delta0, gamma: triple.gamma, xi: triple.xi, q, quantum_dimension: value };
                        em.write("kpz.json", &json(&r))?;
                    }
                    Ok(match value.value() {
                        Some(v) => format!("{v:.6}\n"),
                        None => "inf\n".to_owned(),
                    })
                }),
            })
        }
        Command::Sample => {
            let g = grid(&p, cmd, unit_square)?;
            let fmt = format(&p, &[Format::Bin, Format::Csv, Format::Json])?;
            let eps = match &p.epsilons {
                Some(_) => Some(epsilon(&p, cmd)?),
                None => None,
            };
            reject(&p.xi, "--xi", cmd)?;
            Ok(Plan {
                writes: true,
                footprint: Some((g.n, 1)),
                job: Box::new(move |em| {
                    let mut field = source(&p).sample(g.n, g.spacing, seed)?;
                    if let Some(e) = eps {
                        field = mollify(&field, e)?.to_field();
                    }
                    let (mean, var) = mean_var(field.values());
                    let min = field.values().iter().copied().fold(f64::INFINITY, f64::min);
                    let max = field.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let summary = serde_json::json!({
                        "n": g.n, "spacing": g.spacing, "seed": seed, "epsilon": eps,
                        "mean": mean, "variance": var, "min": min, "max": max,
                    });
                    em.write("sample.json", &json(&summary))?;
                    match fmt {
                        Format::Bin => em.write("field.bin", &field_io::field_to_bytes(&field))?,
                        Format::Csv => em.write("field.csv", field_io::field_to_csv(&field).as_bytes())?,
                        _ => {}
                    }
                    Ok(String::new())
                }),
            })
        }
        Command::Metric => {
            let g = grid(&p, cmd, unit_square)?;
            xi_of(&p, cmd)?;
            epsilon(&p, cmd)?;
            let fmt = format(&p, &[Format::Bin, Format::Csv, Format::Json])?;
            let (r, c) = center(&p, g.n)?;
            Ok(Plan {
                writes: true,
                footprint: Some((g.n, 1)),
                job: Box::new(move |em| {
                    let metric = metric_for(&p, cmd, &g, seed)?;
                    let dmap = distance_map(&metric, &[r * g.n + c])?;
                    let summary = serde_json::json!({
                        "n": g.n, "spacing": g.spacing, "seed": seed, "center": [r, c],
                        "crossing_distance": crossing_distance(&metric),
                        "max_distance": dmap.max_dist(),
                    });
                    em.write("metric.json", &json(&summary))?;
                    match fmt {
                        Format::Bin => em.write("distances.bin", &lfpp_io::distance_map_to_bytes(&dmap))?,
                        Format::Csv => em.write("distances.csv", lfpp_io::distance_map_to_csv(&dmap).as_bytes())?,
                        _ => {}
                    }
                    Ok(String::new())
                }),
            })
        }
        Command::Ball => {
            let g = grid(&p, cmd, unit_square)?;
            xi_of(&p, cmd)?;
            epsilon(&p, cmd)?;
            format(&p, &[Format::Pgm])?;
            let (r, c) = center(&p, g.n)?;
            if let Some(rad) = p.radius {
                check(rad > 0.0 && rad.is_finite(), "--radius", format!("must be positive, got {rad}"))?;
            }
            let k = p.targets.unwrap_or(8);
            Ok(Plan {
                writes: true,
                footprint: Some((g.n, 1)),
                job: Box::new(move |em| {
                    let metric = metric_for(&p, cmd, &g, seed)?;
                    let dmap = distance_map(&metric, &[r * g.n + c])?;
                    let radius = p.radius.unwrap_or(0.5 * dmap.max_dist());
                    let inside: Vec<usize> = dmap.metric_ball(radius);
                    let mut rng = rng_from_seed(mix64(seed, 1));
                    let mut picks = sample(&mut rng, inside.len(), k.min(inside.len())).into_vec();
                    picks.sort_unstable();
                    let targets: Vec<usize> = picks.into_iter().map(|i| inside[i]).collect();
                    let img: Raster = ball_raster(&dmap, radius, &targets)?;
                    let summary = serde_json::json!({
                        "n": g.n, "spacing": g.spacing, "seed": seed, "center": [r, c],
                        "radius": radius, "ball_vertices": inside.len(), "geodesic_targets": targets,
                        "gray_scale": "floor(254*d/radius) inside the ball, 255 outside, 0 on geodesics",
                    });
                    em.write("ball.json", &json(&summary))?;
                    em.write("ball.pgm", &img.to_pgm())?;
                    Ok(String::new())
                }),
            })
        }
        Command::Exponent => {
            let n = require(&p.n, "--n", cmd)?;
            check(n >= 3, "--n", format!("grid needs at least 3 vertices per side, got {n}"))?;
            reject(&p.spacing, "--spacing", cmd)?;
            let xi = xi_of(&p, cmd)?;
            let eps = epsilons(&p, cmd)?;
            check(eps.len() >= 2, "--epsilons", "need at least two scales for a fit")?;
            let h = unit_square(n);
            for &e in &eps {
                check(
                    e >= 2.0 * h * (1.0 - 1e-12) && e <= 0.25,
                    "--epsilons",
                    format!("scale {e} outside [2/(n-1), 0.25]"),
                )?;
            }
            let reps = p.replicates.unwrap_or(31);
            check(reps % 2 == 1, "--replicates", format!("must be odd, got {reps}"))?;
            let fmt = format(&p, &[Format::Json, Format::Csv])?;
            Ok(Plan {
                writes: true,
                footprint: Some((n, reps)),
                job: Box::new(move |em| {
                    let src = source(&p);
                    let est = CrossingEstimator {
                        source: &src,
                        connectivity: p.connectivity.unwrap_or_default(),
                        padding: 0,
                    };
                    let fit = est.estimate(xi, &eps, n, reps, seed)?;
                    em.write("exponent.json", &json(&fit))?;
                    if fmt == Format::Csv {
                        em.write("exponent.csv", fit.to_csv().as_bytes())?;
                    }
                    Ok(format!("q_hat {:.6} stderr {:.6}\n", fit.q_hat, fit.stderr))
                }),
            })
        }
        Command::Gmc => {
            let g = grid(&p, cmd, unit_cells)?;
            let gamma = require(&p.gamma, "--gamma", cmd)?;
            check(gamma > 0.0 && gamma <= 2.0, "--gamma", format!("must lie in (0, 2], got {gamma}"))?;
            let eps = epsilon(&p, cmd)?;
            let fmt = format(&p, &[Format::Bin, Format::Csv, Format::Json])?;
            let moments = p.moments.clone().unwrap_or_else(|| vec![1.0, 2.0]);
            check(moments.iter().all(|m| m.is_finite() && *m >= 0.0), "--moments", "orders must be nonnegative")?;
            let reps = p.replicates.unwrap_or(32);
            check(reps >= 2, "--replicates", "moment estimates need at least 2")?;
            Ok(Plan {
                writes: true,
                footprint: Some((g.n, reps)),
                job: Box::new(move |em| {
                    let field = source(&p).sample(g.n, g.spacing, seed)?;
                    let m = measure(&mollify(&field, eps)?, gamma)?;
                    let table = moments
                        .iter()
                        .enumerate()
                        .map(|(i, &q)| moment_estimate(gamma, q, g.n, eps, reps, mix64(seed, 1 + i as u64)))
                        .collect::<crate::Result<Vec<_>>>()?;
                    em.write("gmc.json", &json(&m.summary(table)))?;
                    match fmt {
                        Format::Bin => em.write(
                            "measure.bin",
                            &field_io::encode_grid(b"LQGM", 0, g.n, g.spacing, m.cell_mass()),
                        )?,
                        Format::Csv => em.write("measure.csv", m.to_csv().as_bytes())?,
                        _ => {}
                    }
                    Ok(String::new())
                }),
            })
        }
        Command::Confluence => {
            let g = grid(&p, cmd, unit_square)?;
            xi_of(&p, cmd)?;
            epsilon(&p, cmd)?;
            let fmt = format(&p, &[Format::Json, Format::Csv])?;
            let (r, c) = center(&p, g.n)?;
            let s = p.s.unwrap_or(0.3);
            let t = p.t.unwrap_or(s / 4.0);
            check(s > 0.0 && s < 1.0, "--s", format!("fraction must lie in (0, 1), got {s}"))?;
            check(t > 0.0 && t < s, "--t", format!("fraction must lie in (0, s), got {t}"))?;
            let k = p.targets.unwrap_or(50);
            check(k >= 1, "--targets", "need at least one target")?;
            Ok(Plan {
                writes: true,
                footprint: Some((g.n, 1)),
                job: Box::new(move |em| {
                    let metric = metric_for(&p, cmd, &g, seed)?;
                    let max = distance_map(&metric, &[r * g.n + c])?.max_dist();
                    let rep = confluence_stat(&metric, r * g.n + c, s * max, t * max, k, mix64(seed, 1))?;
                    em.write("confluence.json", &json(&rep))?;
                    if fmt == Format::Csv {
                        em.write("confluence.csv", rep.to_csv().as_bytes())?;
                    }
                    Ok(String::new())
                }),
            })
        }
        Command::Thickpoints => {
            let g = grid(&p, cmd, unit_square)?;
            let q = match (p.q_threshold, p.gamma) {
                (Some(q), _) => q,
                (None, Some(gamma)) => {
                    check(gamma > 0.0 && gamma <= 2.0, "--gamma", format!("must lie in (0, 2], got {gamma}"))?;
                    q_subcritical(gamma)
                }
                (None, None) => return Err(CliError::usage(Some("--q-threshold"), "required by 'thickpoints' (or --gamma)")),
            };
            check(q.is_finite(), "--q-threshold", "must be finite")?;
            let radii = p.radii.clone().unwrap_or_else(|| vec![0.1, 0.05, 0.025]);
            check(!radii.is_empty(), "--radii", "empty list")?;
            check(radii.windows(2).all(|w| w[1] < w[0]), "--radii", "must be strictly decreasing")?;
            check(radii.iter().all(|r| *r > 0.0 && *r < 1.0), "--radii", "must lie in (0, 1)")?;
            let fmt = format(&p, &[Format::Pgm, Format::Csv, Format::Json])?;
            Ok(Plan {
                writes: true,
                footprint: Some((g.n, 1)),
                job: Box::new(move |em| {
                    let field: FieldGrid = source(&p).sample(g.n, g.spacing, seed)?;
                    let map = thick_point_map(&field, q, &radii)?;
                    let summary = serde_json::json!({
                        "n": g.n, "spacing": g.spacing, "seed": seed, "q_threshold": q,
                        "radii": radii, "evaluated": map.evaluated, "flagged": map.flagged(),
                        "flagged_fraction": map.flagged_fraction,
                    });
                    em.write("thickpoints.json", &json(&summary))?;
                    match fmt {
                        Format::Pgm => {
                            let img = Raster {
                                width: g.n,
                                height: g.n,
                                pixels: map.flags.iter().map(|&f| if f { 0 } else { 255 }).collect(),
                            };
                            em.write("thickpoints.pgm", &img.to_pgm())?;
                        }
                        Format::Csv => {
                            let csv = crate::field::io::grid_csv(g.n, g.spacing, "flag", |v| {
                                u8::from(map.flags[v]).to_string()
                            });
                            em.write("thickpoints.csv", csv.as_bytes())?;
                        }
                        _ => {}
                    }
                    Ok(String::new())
                }),
            })
        }
        Command::AnnulusEvent => {
            let g = grid(&p, cmd, unit_square)?;
            xi_of(&p, cmd)?;
            epsilon(&p, cmd)?;
            let fmt = format(&p, &[Format::Json, Format::Csv])?;
            let (r, c) = center(&p, g.n)?;
            let radius = p.radius.unwrap_or(16.0 * g.spacing);
            check(radius > 0.0 && radius.is_finite(), "--radius", format!("must be positive, got {radius}"))?;
            let reach = (3.0 * radius / g.spacing - 1e-9).floor() as usize;
            check(
                r >= reach && c >= reach && r + reach < g.n && c + reach < g.n,
                "--radius",
                "the ball of radius 3r leaves the grid",
            )?;
            let reps = p.replicates.unwrap_or(200);
            check(reps >= 1, "--replicates", "need at least one")?;
            Ok(Plan {
                writes: true,
                footprint: Some((g.n, reps)),
                job: Box::new(move |em| {
                    let events: Vec<AnnulusEventReport> = (0..reps as u64)
                        .into_par_iter()
                        .map(|k| -> crate::Result<AnnulusEventReport> {
                            let xi = p.xi.expect("validated");
                            let eps = p.epsilons.as_ref().expect("validated")[0];
                            let field = source(&p).sample(g.n, g.spacing, mix64(seed, k))?;
                            let m: MollifiedField = mollify(&field, eps)?;
                            let metric = build_metric(&m, xi, p.connectivity.unwrap_or_default())?;
                            annulus_event(&metric, r, c, radius)
                        })
                        .collect::<crate::Result<_>>()?;
                    let hits = events.iter().filter(|e| e.occurred).count();
                    let report = serde_json::json!({
                        "n": g.n, "spacing": g.spacing, "seed": seed, "center": [r, c], "r": radius,
                        "replicates": reps, "occurred": hits,
                        "probability": hits as f64 / reps as f64,
                        "events": events,
                    });
                    em.write("annulus-event.json", &json(&report))?;
                    if fmt == Format::Csv {
                        let mut csv = String::from("replicate,around,across,occurred\n");
                        for (k, e) in events.iter().enumerate() {
                            csv.push_str(&format!("{k},{:.17e},{:.17e},{}\n", e.around, e.across, u8::from(e.occurred)));
                        }
                        em.write("annulus-event.csv", csv.as_bytes())?;
                    }
                    Ok(String::new())
                }),
            })
        }
    }
}
