//! Command-line front end of `brwlab`.
//!
//! A JSON config file may supply any long flag (`{"reps": 1000, "phis": [0, 0.5]}`);
//! flags given on the command line win. A run manifest is itself a valid
//! config file and also names the subcommand, so `brwlab --config
//! out/manifest.json` repeats a run.

mod commands;
mod portrait;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::{ModelParams, ParticleType};
use crate::sim::CountSign;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "brwlab", version, about = "Two-type branching random walk laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Monte Carlo replicates (default 100000).
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    /// Simulation horizon, or integration horizon for ODE commands.
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON file of flag values; command-line flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ModelArgs {
    #[arg(long)]
    pub q_plus: Option<f64>,
    #[arg(long)]
    pub q_minus: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

impl ModelArgs {
    pub fn params(&self) -> Result<ModelParams> {
        match (self.q_plus, self.q_minus, self.beta) {
            (Some(qp), Some(qm), Some(b)) => ModelParams::new(qp, qm, b),
            _ => Err(Error::InvalidParams(
                "--q-plus, --q-minus and --beta are required".to_string(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaperFigure {
    /// `(1,4,4)`: spiral at the corner.
    Super,
    /// `(1,4,0.5)`: degenerate node at the corner.
    Crit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveChoice {
    /// `x = H⁺⁻(y)`
    Hpm,
    /// `y = H⁻⁺(x)`
    Hmp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn particle(self) -> ParticleType {
        match self {
            Sign::Plus => ParticleType::Plus,
            Sign::Minus => ParticleType::Minus,
        }
    }

    pub fn count(self) -> CountSign {
        match self {
            Sign::Plus => CountSign::Plus,
            Sign::Minus => CountSign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Mean level counts at each `--phis` level.
    Means,
    /// `E θ^N` at the first `--phis` level.
    Pgf,
    /// Winding count means for `--generations` generations (Plus root).
    Windings,
    /// Fraction of replicates with a particle left of 0 (Plus root).
    Left,
    /// Event log of one tree, replicate `--rep`.
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainChoice {
    FirstPassage,
    LargeDeviation,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PortraitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Parameters and styling of one of the two reference figures.
    #[arg(long)]
    pub paper_figure: Option<PaperFigure>,
    /// Fan of `n × n` interior start points, each integrated both ways.
    #[arg(long, default_value_t = 4)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SeriesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
    /// Points `y` at which to report `A(y)`.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CurveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = CurveChoice::Hpm)]
    pub kind: CurveChoice,
    /// Bisection tolerance for shooting.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SimArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub release_eps: f64,
    #[arg(long, default_value_t = 30.0)]
    pub release_cap: f64,
    #[arg(long, default_value_t = 1e-15)]
    pub pgf_floor: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub sim: SimArgs,
    #[arg(long, value_enum, default_value_t = Quantity::Means)]
    pub quantity: Quantity,
    /// Type of the root particle.
    #[arg(long, value_enum, default_value_t = Sign::Plus)]
    pub root: Sign,
    /// `plus` counts `N⁺`, `minus` counts `N⁻`.
    #[arg(long, value_enum, default_value_t = Sign::Plus)]
    pub count: Sign,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub phis: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long, default_value_t = 2)]
    pub generations: usize,
    #[arg(long, default_value_t = 0)]
    pub rep: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SweepArgs {
    /// `--beta` is the top model `β₀`.
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub sim: SimArgs,
    /// Strictly descending, at most `β₀`; defaults to `β₀·(1, .9, .8, .6, .4, .2)`.
    #[arg(long, value_delimiter = ',')]
    pub betas: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ChainArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = ChainChoice::FirstPassage)]
    pub mode: ChainChoice,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// 10⁴ replicates instead of 10⁵; standard errors grow accordingly.
    #[arg(long)]
    pub fast: bool,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
    /// JSON file overriding expected constants of the battery.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Derived constants, spectrum at (1,1) and the minimum of γ, as JSON.
    Params(ModelArgs),
    /// Trajectory fan and probabilistic curves as CSV files and one SVG.
    Portrait(PortraitArgs),
    /// Coefficients of the series A(y).
    Series(SeriesArgs),
    /// One probabilistic curve by shooting, series or eigen-direction tracing.
    Curve(CurveArgs),
    /// Monte Carlo estimates of counts, pgfs, windings or a single tree.
    Simulate(SimulateArgs),
    /// Nested-model sweep of E⁺N⁻(0,β) over a descending β grid.
    Sweep(SweepArgs),
    /// Single-chain functionals: first passage or large-deviation frequencies.
    Chain(ChainArgs),
    /// Acceptance battery; exit 0 iff every criterion passes.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Params(_) => "params",
            Command::Portrait(_) => "portrait",
            Command::Series(_) => "series",
            Command::Curve(_) => "curve",
            Command::Simulate(_) => "simulate",
            Command::Sweep(_) => "sweep",
            Command::Chain(_) => "chain",
            Command::Verify(_) => "verify",
        }
    }

    fn args_value(&self) -> serde_json::Result<Value> {
        match self {
            Command::Params(a) => serde_json::to_value(a),
            Command::Portrait(a) => serde_json::to_value(a),
            Command::Series(a) => serde_json::to_value(a),
            Command::Curve(a) => serde_json::to_value(a),
            Command::Simulate(a) => serde_json::to_value(a),
            Command::Sweep(a) => serde_json::to_value(a),
            Command::Chain(a) => serde_json::to_value(a),
            Command::Verify(a) => serde_json::to_value(a),
        }
    }
}

const SUBCOMMANDS: [&str; 8] = [
    "params", "portrait", "series", "curve", "simulate", "sweep", "chain", "verify",
];

impl Cli {
    /// Every effective flag except `--config`, keyed by long name.
    pub fn effective_args(&self) -> Map<String, Value> {
        let mut map = Map::new();
        for v in [serde_json::to_value(&self.global), self.command.args_value()] {
            if let Ok(Value::Object(m)) = v {
                map.extend(m.into_iter().filter(|(_, v)| !v.is_null()));
            }
        }
        map
    }
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    args.iter().enumerate().find_map(|(i, a)| {
        let s = a.to_str()?;
        if let Some(p) = s.strip_prefix("--config=") {
            Some(PathBuf::from(p))
        } else if s == "--config" {
            args.get(i + 1).map(PathBuf::from)
        } else {
            None
        }
    })
}

fn flag_value(v: &Value) -> Option<String> {
    match v {
        Value::Null | Value::Bool(_) => None,
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => Some(items.iter().filter_map(flag_value).collect::<Vec<_>>().join(",")),
        Value::Object(_) => None,
    }
}

/// Appends config-file flags that the command line does not set.
fn merge_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)?;
    let mut file: Map<String, Value> = match serde_json::from_str(&text)? {
        Value::Object(m) => m,
        _ => return Err(Error::Domain(format!("{}: config must be a JSON object", path.display()))),
    };
    // a manifest carries the command and nests the flags
    let command = file.remove("command");
    if let Some(Value::Object(nested)) = file.remove("args") {
        file = nested;
    }
    let given: Vec<String> = args.iter().filter_map(|a| a.to_str().map(str::to_string)).collect();
    if !given.iter().any(|a| SUBCOMMANDS.contains(&a.as_str())) {
        if let Some(Value::String(c)) = command {
            args.push(c.into());
        }
    }
    for (key, value) in file {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" || given.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        match (&value, flag_value(&value)) {
            (Value::Bool(true), _) => args.push(flag.into()),
            (Value::Array(a), _) if a.is_empty() => {}
            (_, Some(s)) => {
                args.push(flag.into());
                args.push(s.into());
            }
            _ => {}
        }
    }
    Ok(args)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::Domain(_) => EXIT_USAGE,
        Error::Io(_) | Error::Json(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: config: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
