//! Run configuration shared by the command line and `run --config` files.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sendovlab::{Error, Result, Tolerances};

const NOTATION_HELP: &str = "\
Zero configurations (--zeros or io.input) are text records separated by
newlines or ';':  an optional header `n m` or `n=.. m=..`, then one line
`re im mult` per distinct zero, or the macro `roots_of_unity:N`.

Strata are written n:mu_1,...,mu_m/nu_1,...,nu_k, for example
5:1,1,1,1,1/1,1,1,1 (five simple zeros, four simple critical points) or
4:1,1,1,1/3 (a single critical point of multiplicity three).

Exit status: 0 success, 1 contract or parse error, 2 numeric failure,
3 a counterexample finding was recorded.";

#[derive(Debug, Parser)]
#[command(name = "sendovlab", version, about = "Experiments on zeros and critical points of complex polynomials")]
#[command(after_long_help = NOTATION_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Distance below which two locations count as the same point
    #[arg(long, global = true)]
    pub tau_sep: Option<f64>,
    /// Relative radius for merging root approximations into one cluster
    #[arg(long, global = true)]
    pub tau_cluster: Option<f64>,
    /// Smallest accepted sigma_min / sigma_max for full rank
    #[arg(long, global = true)]
    pub rank_threshold: Option<f64>,
    /// File holding the zero configuration.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Append findings to this log, one JSON object per line.
    #[arg(long, global = true)]
    pub findings: Option<PathBuf>,
    /// Write a whitespace-separated data table (track, scan) here.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "SENDOVLAB_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    #[command(flatten)]
    Experiment(Command),
    /// Run the experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Report the stratum (mu, nu) of a configuration.
    Classify(ZerosArgs),
    /// Critical points of both kinds.
    Crit(ZerosArgs),
    /// Certify the Jacobian rank on random samples of a stratum.
    RankSweep(RankSweepArgs),
    /// Track dependent zeros and critical points along a straight path of the free zeros.
    Track(TrackArgs),
    /// Cauchy-Riemann scan of one tracked output over a grid of one free zero.
    Scan(ScanArgs),
    /// Projected local ascent on S_ell.
    Search(SearchArgs),
    /// Monte Carlo maximum of S over the closed unit disk.
    Sample(SampleArgs),
    /// Multiplier fit and half-plane certificates.
    Kkt(KktArgs),
    /// Smallest disk enclosing the zeros.
    Disk(ZerosArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Crit(_) => "crit",
            Command::RankSweep(_) => "rank-sweep",
            Command::Track(_) => "track",
            Command::Scan(_) => "scan",
            Command::Search(_) => "search",
            Command::Sample(_) => "sample",
            Command::Kkt(_) => "kkt",
            Command::Disk(_) => "disk",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZerosArgs {
    /// Inline configuration, e.g. "roots_of_unity:5" or "n=2 m=2; 1 0 1; -1 0 1".
    #[arg(long, allow_hyphen_values = true)]
    pub zeros: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankSweepArgs {
    /// Stratum in n:mu/nu notation.
    #[arg(long)]
    pub stratum: String,
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "default_sweep_samples")]
    pub samples: usize,
}

fn default_sweep_samples() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub zeros: Option<String>,
    /// Target values of the free zeros, "re im; re im; ...".
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    /// Indices of the free zeros, comma separated; defaults to the last k+1.
    #[arg(long)]
    #[serde(default)]
    pub free: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    #[serde(default = "default_max_step")]
    pub max_step: f64,
}

fn default_max_step() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub zeros: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub free: Option<String>,
    /// Position of the scanned zero among the free zeros.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub variable: usize,
    /// Tracked output: "xi:J" or "dep:J".
    #[arg(long, default_value = "xi:0")]
    #[serde(default = "default_scan_output")]
    pub track: String,
    #[arg(long, default_value_t = 1e-2)]
    #[serde(default = "default_scan_radius")]
    pub radius: f64,
    #[arg(long, default_value_t = 11)]
    #[serde(default = "default_scan_resolution")]
    pub resolution: usize,
}

fn default_scan_output() -> String {
    "xi:0".into()
}

fn default_scan_radius() -> f64 {
    1e-2
}

fn default_scan_resolution() -> usize {
    11
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchArgs {
    /// Starting configuration; a random one of degree --n when absent.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub zeros: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub n: Option<usize>,
    /// Index of the simple zero whose S_ell is maximized.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub ell: usize,
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "default_search_steps")]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-2)]
    #[serde(default = "default_step_size")]
    pub step_size: f64,
}

fn default_search_steps() -> usize {
    1000
}

fn default_step_size() -> f64 {
    1e-2
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    #[serde(default = "default_mc_samples")]
    pub samples: u64,
}

fn default_mc_samples() -> u64 {
    100_000
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KktArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub zeros: Option<String>,
    /// Reference zero (simple, usually interior).
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub i0: usize,
    /// Evaluate the residual at these multipliers in addition to the fit.
    #[arg(long)]
    #[serde(default)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    #[serde(default)]
    pub theta_lambda: f64,
    /// Boundary multipliers, comma separated, one per distinct zero.
    #[arg(long)]
    #[serde(default)]
    pub eta: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub tau_sep: Option<f64>,
    pub tau_cluster: Option<f64>,
    pub rank_threshold: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self) -> Result<Tolerances> {
        let mut tol = Tolerances::default();
        for (slot, value, name) in [
            (&mut tol.tau_sep, self.tau_sep, "tau_sep"),
            (&mut tol.tau_cluster, self.tau_cluster, "tau_cluster"),
            (&mut tol.rank_threshold, self.rank_threshold, "rank_threshold"),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::contract(format!("{name} must be positive and finite, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(tol)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoPaths {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub findings: Option<PathBuf>,
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub io: IoPaths,
}

impl RunConfig {
    pub fn from_cli(command: Command, global: &GlobalArgs) -> Self {
        let mut config = RunConfig {
            command,
            seed: 0,
            tolerances: ToleranceOverrides::default(),
            io: IoPaths::default(),
        };
        config.override_with(global);
        config
    }

    /// Reads a TOML run file; syntax and schema errors carry line and column.
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::contract(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |span| line_column(text, span.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    /// Command-line flags take precedence over values from a run file.
    pub fn override_with(&mut self, global: &GlobalArgs) {
        if let Some(seed) = global.seed {
            self.seed = seed;
        }
        let t = &mut self.tolerances;
        t.tau_sep = global.tau_sep.or(t.tau_sep);
        t.tau_cluster = global.tau_cluster.or(t.tau_cluster);
        t.rank_threshold = global.rank_threshold.or(t.rank_threshold);
        let io = &mut self.io;
        for (slot, flag) in [
            (&mut io.input, &global.input),
            (&mut io.output, &global.output),
            (&mut io.findings, &global.findings),
            (&mut io.table, &global.table),
        ] {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_with_defaults() {
        let cfg = RunConfig::from_toml("seed = 7\n[command.sample]\nn = 8\n").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.command, Command::Sample(SampleArgs { n: 8, samples: 100_000 }));
        assert_eq!(cfg.tolerances, ToleranceOverrides::default());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = RunConfig::from_toml("seed = 1\n[command.sample]\nn = 8\nbogus = 2\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(RunConfig::from_toml("colour = 1\n[command.crit]\n").is_err());
        assert!(RunConfig::from_toml("[command.crit]\n[io]\nwhere = \"x\"\n").is_err());
    }

    #[test]
    fn flattened_zero_args() {
        let cfg = RunConfig::from_toml("[command.track]\nzeros = \"roots_of_unity:3\"\nto = \"0 1; 1 0\"\n").unwrap();
        match cfg.command {
            Command::Track(t) => {
                assert_eq!(t.zeros.as_deref(), Some("roots_of_unity:3"));
                assert_eq!(t.max_step, 0.05);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flags_override_file() {
        let mut cfg = RunConfig::from_toml("seed = 3\n[tolerances]\ntau_sep = 1e-6\n[command.crit]\n").unwrap();
        cfg.override_with(&GlobalArgs {
            seed: Some(9),
            tau_cluster: Some(1e-9),
            ..Default::default()
        });
        assert_eq!(cfg.seed, 9);
        let tol = cfg.tolerances.apply().unwrap();
        assert_eq!((tol.tau_sep, tol.tau_cluster), (1e-6, 1e-9));
    }

    #[test]
    fn bad_tolerance() {
        let t = ToleranceOverrides {
            tau_sep: Some(-1.0),
            ..Default::default()
        };
        assert!(matches!(t.apply(), Err(Error::Contract(_))));
    }
}
