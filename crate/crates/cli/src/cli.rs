//! Flag definitions and config-file loading.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use spinpurify::analysis::{BbpsswProbability, BbpsswRounds};
use spinpurify::CouplingSpec;

use crate::args::{parse_fidelity, parse_finite, Format, Grid, SiteSetArg, Triple};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "spinpurify",
    version,
    about = "Entanglement purification by spin-chain dynamics"
)]
pub struct Cli {
    /// Read the command and its flags from a JSON file instead.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Conditional fidelity and acceptance probability against Jt.
    Curve(CurveArgs),
    /// Three-pair protocol, BBPSSW and doing nothing over a fidelity grid.
    Compare(CompareArgs),
    /// Pair cost of reaching a target fidelity, three-pair vs BBPSSW.
    Resources(ResourcesArgs),
    /// Information gathered about an unknown Bell pair by the chain dynamics.
    Mutualinfo(MutualInfoArgs),
    /// Random anisotropic couplings on two pairs.
    Nogo(NogoArgs),
    /// XY chain with a Dzyaloshinskii-Moriya term.
    Dm(DmArgs),
    /// One run of a single protocol.
    Protocol(ProtocolArgs),
    /// Filtering a pure non-maximally entangled pair with one ancilla.
    Filter(FilterArgs),
    /// Spectrum of a bilateral chain Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Width of the half-gain measurement window around Jt = 2π.
    Window(WindowArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Curve(_) => "curve",
            Command::Compare(_) => "compare",
            Command::Resources(_) => "resources",
            Command::Mutualinfo(_) => "mutualinfo",
            Command::Nogo(_) => "nogo",
            Command::Dm(_) => "dm",
            Command::Protocol(_) => "protocol",
            Command::Filter(_) => "filter",
            Command::Spectrum(_) => "spectrum",
            Command::Window(_) => "window",
        }
    }

    /// Largest number of spins the command puts in one state.
    pub fn spins_needed(&self) -> usize {
        match self {
            Command::Nogo(_) => 4,
            Command::Protocol(p) => match p.kind {
                ProtocolKind::ThreePair | ProtocolKind::Rejected => 6,
                ProtocolKind::TwoPair | ProtocolKind::Bbpssw => 4,
            },
            Command::Filter(_) => 3,
            Command::Spectrum(s) => 2 * s.pairs,
            _ => 6,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CouplingArgs {
    /// Isotropic exchange constant.
    #[arg(long = "J", default_value_t = 1.0, value_parser = parse_finite, conflicts_with = "exchange")]
    #[serde(rename = "J")]
    pub j: f64,
    /// Anisotropic exchange `jx,jy,jz`.
    #[arg(long)]
    pub exchange: Option<Triple>,
    /// DM vector `dx,dy,dz`.
    #[arg(long, default_value = "0,0,0")]
    pub d: Triple,
}

impl CouplingArgs {
    pub fn coupling(&self) -> CouplingSpec {
        let [jx, jy, jz] = self.exchange.map_or([self.j; 3], |t| t.0);
        CouplingSpec::new(jx, jy, jz).with_dm(self.d.0)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long = "F", value_parser = parse_fidelity)]
    #[serde(rename = "F")]
    pub f: f64,
    #[arg(long, default_value = "0:40:0.05")]
    pub t: Grid,
    #[arg(long, value_enum, default_value = "3456")]
    pub site_set: SiteSetArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub coupling: CouplingArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    /// Fidelity grid `lo:hi:step` inside [0, 1].
    #[arg(long, default_value = "0.5:1:0.01")]
    pub grid: Grid,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbabilityMode {
    /// One BBPSSW success probability averaged over 1/2 < F < 1.
    Averaged,
    /// The simulated probability at each round's input fidelity.
    PerRound,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundsMode {
    /// Iterate simulated BBPSSW until the target is reached.
    Recurrence,
    /// Scale the three-pair round count by log(11/27)/log(2/3).
    Asymptotic,
}

impl From<ProbabilityMode> for BbpsswProbability {
    fn from(m: ProbabilityMode) -> Self {
        match m {
            ProbabilityMode::Averaged => BbpsswProbability::Averaged,
            ProbabilityMode::PerRound => BbpsswProbability::PerRound,
        }
    }
}

impl From<RoundsMode> for BbpsswRounds {
    fn from(m: RoundsMode) -> Self {
        match m {
            RoundsMode::Recurrence => BbpsswRounds::Recurrence,
            RoundsMode::Asymptotic => BbpsswRounds::Asymptotic,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResourcesArgs {
    #[arg(long = "Fi", value_parser = parse_fidelity)]
    #[serde(rename = "Fi")]
    pub fi: f64,
    #[arg(long = "Ff", value_parser = parse_fidelity)]
    #[serde(rename = "Ff")]
    pub ff: f64,
    #[arg(long, value_enum, default_value = "averaged")]
    pub pb: ProbabilityMode,
    #[arg(long, value_enum, default_value = "recurrence")]
    pub rb: RoundsMode,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MutualInfoArgs {
    #[arg(long, default_value_t = 2.0 * PI, value_parser = parse_finite)]
    pub t: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NogoArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long = "F", default_value_t = 0.75, value_parser = parse_fidelity)]
    #[serde(rename = "F")]
    pub f: f64,
    /// Couplings drawn for the invariant-subspace check.
    #[arg(long, default_value_t = 20)]
    pub leakage_samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DmArgs {
    #[arg(long = "F", default_value_t = 0.75, value_parser = parse_fidelity)]
    #[serde(rename = "F")]
    pub f: f64,
    /// XY exchange constant.
    #[arg(long = "J", default_value_t = 1.0, value_parser = parse_finite)]
    #[serde(rename = "J")]
    pub j: f64,
    #[arg(long, default_value = "0.1,0,0")]
    pub d: Triple,
    #[arg(long, default_value = "330:370:0.25")]
    pub t: Grid,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    /// Three pairs, accepted patterns (0,0,1,1) and (1,1,0,0).
    ThreePair,
    /// Three pairs, patterns (0,0,0,0) and (1,1,1,1).
    Rejected,
    /// Two pairs, coincident outcomes on the second pair.
    TwoPair,
    Bbpssw,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProtocolArgs {
    #[arg(long, value_enum, default_value = "three-pair")]
    pub kind: ProtocolKind,
    #[arg(long = "F", value_parser = parse_fidelity)]
    #[serde(rename = "F")]
    pub f: f64,
    #[arg(long, default_value_t = 2.0 * PI, value_parser = parse_finite)]
    pub t: f64,
    #[arg(long, value_enum, default_value = "3456")]
    pub site_set: SiteSetArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub coupling: CouplingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FilterArgs {
    /// Smaller Schmidt coefficient, `0 < alpha < 1/√2`.
    #[arg(long, value_parser = parse_finite)]
    pub alpha: f64,
    /// Measurement time; the optimal one when omitted.
    #[arg(long, value_parser = parse_finite)]
    pub t: Option<f64>,
    #[arg(long = "J", default_value_t = 1.0, value_parser = parse_finite)]
    #[serde(rename = "J")]
    pub j: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    /// Hamiltonian spec JSON `{n_pairs, jx, jy, jz, d}`.
    #[arg(long, conflicts_with_all = ["pairs", "j", "exchange", "d"])]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub pairs: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub coupling: CouplingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WindowArgs {
    #[arg(
        long = "F",
        value_parser = parse_fidelity,
        value_delimiter = ',',
        default_value = "0.61,0.65,0.75,0.85,0.94"
    )]
    #[serde(rename = "F")]
    pub f: Vec<f64>,
}

/// Turns a JSON config into an argument vector and parses it like the
/// command line. `{"command": "curve", "F": 0.75, "t": "0:1:0.1"}` becomes
/// `curve --F 0.75 --t 0:1:0.1`; arrays are joined with commas, `true`
/// becomes a bare flag and `false` or `null` is dropped.
pub fn load_config(path: &Path) -> CliResult<Cli> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Cli::try_parse_from(config_argv(&value)?).map_err(|e| CliError::Usage(e.to_string()))
}

fn config_argv(value: &Value) -> CliResult<Vec<String>> {
    let usage = |msg: &str| CliError::Usage(format!("config: {msg}"));
    let obj = value
        .as_object()
        .ok_or_else(|| usage("expected a JSON object"))?;
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| usage("missing \"command\""))?;
    let mut argv = vec!["spinpurify".to_string(), command.to_string()];
    for (key, v) in obj {
        if key == "command" {
            continue;
        }
        if key == "config" {
            return Err(usage("config files cannot nest"));
        }
        let flag = format!("--{key}");
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => argv.push(flag),
            Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(scalar)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| usage(&format!("{key}: arrays must hold scalars")))?;
                argv.push(flag);
                argv.push(parts.join(","));
            }
            other => {
                let s = scalar(other).ok_or_else(|| usage(&format!("{key}: unsupported value")))?;
                argv.push(flag);
                argv.push(s);
            }
        }
    }
    Ok(argv)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}
