//! The `lqg` command-line front end.
//!
//! Every run is described by a [`RunConfig`]: a flat JSON object whose keys
//! mirror the long flag names. Flags override values read from `--config`.
//! A run writes its outputs plus `manifest.json` into `--out`; on failure
//! the files written so far are removed and a JSON error goes to stderr.

mod output;
mod run;

pub use output::{Manifest, OutputRecord};
pub use run::{run, RunOutput};

use crate::lfpp::Connectivity;
use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sample,
    Metric,
    Ball,
    Exponent,
    Kpz,
    Gmc,
    Confluence,
    Thickpoints,
    AnnulusEvent,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Metric => "metric",
            Command::Ball => "ball",
            Command::Exponent => "exponent",
            Command::Kpz => "kpz",
            Command::Gmc => "gmc",
            Command::Confluence => "confluence",
            Command::Thickpoints => "thickpoints",
            Command::AnnulusEvent => "annulus-event",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Pgm,
    Json,
    Bin,
}

/// Field normalization for commands that sample a GFF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldChoice {
    /// Scaled so that `Var h_ε ≈ log(1/ε)`.
    Gff,
    /// Plain graph-Laplacian normalization.
    Dgff,
}

/// Run parameters. Absent values take per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<Connectivity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<f64>>,
}

impl Params {
    /// Overwrites every field that is set in `other`.
    fn overlay(&mut self, other: Params) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            command, n, spacing, xi, gamma, epsilons, replicates, seed, threads, out, format, delta0,
            connectivity, field, center, radius, s, t, targets, q_threshold, radii, moments
        );
    }
}

/// A parsed, command-resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Effective parameters; `params.command == Some(command)`.
    pub params: Params,
}

impl RunConfig {
    /// Flat JSON form, accepted back by `--config`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.params).expect("params serialize")
    }
}

/// Why a run failed, and the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid or missing configuration: exit 2.
    Usage,
    /// Out of memory or disk: exit 3.
    Resource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    /// Offending flag, with leading dashes, when known.
    pub flag: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn usage(flag: Option<&str>, message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Usage, flag: flag.map(str::to_owned), message: message.into() }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Resource, flag: None, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Usage => 2,
            ErrorKind::Resource => 3,
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        let kind = match self.kind {
            ErrorKind::Usage => "usage",
            ErrorKind::Resource => "resource",
        };
        serde_json::json!({
            "error": kind,
            "flag": self.flag,
            "message": self.message,
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.flag {
            Some(flag) => write!(f, "{flag}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::usage(None, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lqg",
    version,
    about = "Liouville first passage percolation experiments",
    arg_required_else_help = true
)]
struct Args {
    /// Command to run (alternatively --command).
    #[arg(value_enum, value_name = "COMMAND")]
    positional: Option<Command>,
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Flat JSON file of parameters; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid side length in vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Lattice spacing; defaults to 1/(n-1).
    #[arg(long)]
    spacing: Option<f64>,
    /// LFPP exponent.
    #[arg(long)]
    xi: Option<f64>,
    /// LQG parameter in (0, 2].
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated mollification scales.
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Root seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "LQG_THREADS")]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Euclidean dimension fed to KPZ.
    #[arg(long)]
    delta0: Option<f64>,
    #[arg(long)]
    connectivity: Option<Connectivity>,
    #[arg(long, value_enum)]
    field: Option<FieldChoice>,
    /// Source vertex as row,col.
    #[arg(long, value_delimiter = ',')]
    center: Option<Vec<usize>>,
    /// Metric radius (ball) or Euclidean radius (annulus-event).
    #[arg(long)]
    radius: Option<f64>,
    /// Outer confluence radius as a fraction of the largest distance.
    #[arg(long)]
    s: Option<f64>,
    /// Inner confluence radius as a fraction of the largest distance.
    #[arg(long)]
    t: Option<f64>,
    /// Number of geodesic targets.
    #[arg(long)]
    targets: Option<usize>,
    #[arg(long)]
    q_threshold: Option<f64>,
    /// Comma-separated, strictly decreasing circle radii.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Comma-separated moment orders.
    #[arg(long, value_delimiter = ',')]
    moments: Option<Vec<f64>>,
}

impl Args {
    fn into_params(self) -> Params {
        Params {
            command: self.command.or(self.positional),
            n: self.n,
            spacing: self.spacing,
            xi: self.xi,
            gamma: self.gamma,
            epsilons: self.epsilons,
            replicates: self.replicates,
            seed: self.seed,
            threads: self.threads,
            out: self.out,
            format: self.format,
            delta0: self.delta0,
            connectivity: self.connectivity,
            field: self.field,
            center: self.center,
            radius: self.radius,
            s: self.s,
            t: self.t,
            targets: self.targets,
            q_threshold: self.q_threshold,
            radii: self.radii,
            moments: self.moments,
        }
    }
}

/// Outcome of argument parsing that is not a configuration.
#[derive(Debug)]
pub enum ParseOutcome {
    Config(Box<RunConfig>),
    /// Help or version text; print it and exit with the given code.
    Text(String, i32),
}

/// Parses a config file body. Errors carry the line number.
pub fn parse_config_str(body: &str) -> Result<Params, CliError> {
    serde_json::from_str(body).map_err(|e| {
        CliError::usage(Some("--config"), format!("line {}, column {}: {e}", e.line(), e.column()))
    })
}

/// Parses `argv` (including the program name) and the optional `--config`
/// file into a [`RunConfig`].
pub fn parse_config<I, T>(argv: I) -> Result<ParseOutcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::{ContextKind, ContextValue, ErrorKind as K};
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion => Ok(ParseOutcome::Text(e.render().to_string(), 0)),
                K::DisplayHelpOnMissingArgumentOrSubcommand => Ok(ParseOutcome::Text(e.render().to_string(), 2)),
                _ => {
                    let flag = match e.get(ContextKind::InvalidArg) {
                        Some(ContextValue::String(s)) => s.split_whitespace().next().map(str::to_owned),
                        _ => None,
                    };
                    let message = e.render().to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_owned();
                    Err(CliError { kind: ErrorKind::Usage, flag, message })
                }
            };
        }
    };
    if let (Some(a), Some(b)) = (args.positional, args.command) {
        if a != b {
            return Err(CliError::usage(Some("--command"), "conflicts with the positional command"));
        }
    }
    let mut params = match &args.config {
        Some(path) => {
            let body = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(Some("--config"), format!("{}: {e}", path.display())))?;
            parse_config_str(&body)?
        }
        None => Params::default(),
    };
    params.overlay(args.into_params());
    let command = params.command.ok_or_else(|| CliError::usage(Some("--command"), "no command given"))?;
    Ok(ParseOutcome::Config(Box::new(RunConfig { command, params })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(argv: &[&str]) -> RunConfig {
        match parse_config(argv.iter().copied()).unwrap() {
            ParseOutcome::Config(c) => *c,
            ParseOutcome::Text(..) => panic!("expected config"),
        }
    }

    #[test]
    fn positional_or_flag() {
        assert_eq!(cfg(&["lqg", "kpz"]).command, Command::Kpz);
        assert_eq!(cfg(&["lqg", "--command", "annulus-event"]).command, Command::AnnulusEvent);
        assert!(parse_config(["lqg", "kpz", "--command", "gmc"]).is_err());
    }

    #[test]
    fn lists_and_kebab_keys() {
        let c = cfg(&["lqg", "exponent", "--epsilons", "0.125,0.0625", "--q-threshold", "2"]);
        assert_eq!(c.params.epsilons, Some(vec![0.125, 0.0625]));
        assert!(c.to_json().contains("\"q-threshold\""));
    }

    #[test]
    fn file_errors_report_line() {
        let e = parse_config_str("{\n \"n\": 5,\n \"bogus\": 1\n}").unwrap_err();
        assert_eq!(e.flag.as_deref(), Some("--config"));
        assert!(e.message.contains("line 3"), "{}", e.message);
        let e = parse_config_str("{\n \"n\": 5,,\n}").unwrap_err();
        assert!(e.message.contains("line 2"), "{}", e.message);
    }

    #[test]
    fn bad_flag_value_is_named() {
        let e = parse_config(["lqg", "metric", "--xi", "abc"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(e.flag.as_deref(), Some("--xi"));
    }

    #[test]
    fn empty_argv_prints_usage() {
        match parse_config(["lqg"]).unwrap() {
            ParseOutcome::Text(t, code) => {
                assert_eq!(code, 2);
                assert!(t.contains("Usage"));
            }
            _ => panic!(),
        }
    }
}
