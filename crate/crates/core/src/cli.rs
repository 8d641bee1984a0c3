//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 internal failure, 2 malformed input, 3 trace
//! below the admissible minimum, 4 infeasible completion (result still
//! printed), 5 rank precondition of a completion violated, 6 frame not
//! spanning or frame operator singular.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Number, Value};

use crate::completion::{complete, plan, CompletionProblem};
use crate::duals::{optimal_dual, DualProblem};
use crate::error::FrameError;
use crate::frames::{Frame, FrameJson};
use crate::majorization::{PotentialKind, SpectrumVec, DEFAULT_TOL};
use crate::spectra::{nu, sample_lambda_set};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BAD_TRACE: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_RANK: i32 = 5;
pub const EXIT_NOT_SPANNING: i32 = 6;

/// Significant digits of every printed real.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "optframe", version, about = "Optimal frame completions and trace-constrained optimal duals")]
struct Cli {
    /// Tolerance for majorization and membership checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Seed for sampling subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct SpectrumArgs {
    /// Nonincreasing eigenvalues, comma separated (e.g. 9,5,4,2,1).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "lambda_file", required_unless_present = "lambda_file")]
    lambda: Option<Vec<f64>>,

    /// JSON array of eigenvalues (`-` for stdin).
    #[arg(long)]
    lambda_file: Option<PathBuf>,

    /// Rank parameter: perturbations have rank at most d − m.
    #[arg(long, allow_negative_numbers = true)]
    m: i64,

    /// Lower bound on the trace.
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimal spectrum ν(λ, m, t) and its waterfilling data.
    Nu(SpectrumArgs),
    /// Random member of Λ_t(λ, m) (uses --seed).
    Sample(SpectrumArgs),
    /// Optimal completion of a frame with prescribed squared norms.
    Complete {
        /// Frame JSON file (`-` for stdin).
        frame: PathBuf,
        /// Squared norms of the added vectors.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        beta: Vec<f64>,
    },
    /// Feasibility plan of a completion, without building vectors.
    Feasible {
        frame: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        beta: Vec<f64>,
    },
    /// Optimal dual frame with tr S_W ≥ t.
    Dual {
        /// Frame JSON file (`-` for stdin)
        frame: PathBuf,
        /// Lower bound on tr S_W; at least the canonical dual's trace
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Whether G is a dual frame of F.
    CheckDual {
        /// Frame JSON file
        f: PathBuf,
        /// Candidate dual, as frame JSON
        g: PathBuf,
    },
    /// Frame potential tr f(S_F).
    Potential {
        /// Frame JSON file (`-` for stdin)
        frame: PathBuf,
        /// fp: tr S², mse: tr S⁻¹, entropy: tr S log S
        #[arg(long, value_enum, default_value_t = KindArg::Fp)]
        kind: KindArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Fp,
    Mse,
    Entropy,
}

impl From<KindArg> for PotentialKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Fp => PotentialKind::FramePotential,
            KindArg::Mse => PotentialKind::MeanSquareError,
            KindArg::Entropy => PotentialKind::NegEntropy,
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { code, stdout: String::new(), stderr }
    }
}

enum Failure {
    Parse(String),
    Frame(FrameError),
}

impl From<FrameError> for Failure {
    fn from(e: FrameError) -> Self {
        Failure::Frame(e)
    }
}

fn exit_code(e: &FrameError) -> i32 {
    match e {
        FrameError::BadTrace { .. } => EXIT_BAD_TRACE,
        FrameError::RankDeficient { .. } => EXIT_RANK,
        FrameError::NotSpanning | FrameError::SingularFrameOperator => EXIT_NOT_SPANNING,
        FrameError::InvalidInput(_)
        | FrameError::LengthMismatch { .. }
        | FrameError::ShapeMismatch(_)
        | FrameError::BadM { .. }
        | FrameError::BadIndex { .. } => EXIT_PARSE,
        _ => EXIT_INTERNAL,
    }
}

/// Runs the CLI on `args` (including the program name), reading `-` inputs from `stdin`.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::fail(EXIT_PARSE, text) } else { Outcome::ok(text) };
        }
    };
    match dispatch(&cli, stdin) {
        Ok(outcome) => outcome,
        Err(Failure::Parse(msg)) => Outcome::fail(EXIT_PARSE, format!("error: {msg}")),
        Err(Failure::Frame(e)) => Outcome::fail(exit_code(&e), format!("error: {e}")),
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Nu(args) => {
            let (lambda, m, t) = spectrum_args(args, stdin)?;
            let breakdown = nu(&lambda, m, t)?;
            Ok(Outcome::ok(render(&breakdown)?))
        }
        Command::Sample(args) => {
            let (lambda, m, t) = spectrum_args(args, stdin)?;
            let member = sample_lambda_set(&lambda, m, t, cli.seed)?;
            Ok(Outcome::ok(render(&member)?))
        }
        Command::Complete { frame, beta } => {
            let problem = CompletionProblem::new(read_frame(frame, stdin)?, beta.clone())?.with_tol(cli.tol);
            let result = complete(&problem)?;
            let code = if result.feasible() { EXIT_OK } else { EXIT_INFEASIBLE };
            Ok(Outcome { code, stdout: render(&result.to_json())?, stderr: String::new() })
        }
        Command::Feasible { frame, beta } => {
            let problem = CompletionProblem::new(read_frame(frame, stdin)?, beta.clone())?.with_tol(cli.tol);
            let plan = plan(&problem)?;
            let code = if plan.feasible { EXIT_OK } else { EXIT_INFEASIBLE };
            Ok(Outcome { code, stdout: render(&plan)?, stderr: String::new() })
        }
        Command::Dual { frame, t } => {
            let problem = DualProblem::new(read_frame(frame, stdin)?, *t)?;
            let result = optimal_dual(&problem)?;
            Ok(Outcome::ok(render(&result.to_json())?))
        }
        Command::CheckDual { f, g } => {
            let f = read_frame(f, stdin)?;
            let g = read_frame(g, stdin)?;
            let residual = f.duality_residual(&g)?;
            #[derive(Serialize)]
            struct Check {
                is_dual: bool,
                residual: f64,
            }
            Ok(Outcome::ok(render(&Check { is_dual: residual <= cli.tol, residual })?))
        }
        Command::Potential { frame, kind } => {
            let frame = read_frame(frame, stdin)?;
            let value = frame.potential((*kind).into())?;
            Ok(Outcome::ok(render(&value)?))
        }
    }
}

fn spectrum_args(args: &SpectrumArgs, stdin: &mut dyn Read) -> Result<(SpectrumVec, i64, f64), Failure> {
    let values = match (&args.lambda, &args.lambda_file) {
        (Some(v), _) => v.clone(),
        (None, Some(path)) => {
            let text = read_input(path, stdin)?;
            serde_json::from_str::<Vec<f64>>(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(Failure::Parse("missing --lambda".into())),
    };
    let lambda = SpectrumVec::new(values).map_err(|e| Failure::Parse(e.to_string()))?;
    if lambda.is_empty() || lambda.as_slice().iter().any(|&x| x < 0.0) {
        return Err(Failure::Parse("λ must be a nonempty nonnegative vector".into()));
    }
    Ok((lambda, args.m, args.t))
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin.read_to_string(&mut text).map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_frame(path: &PathBuf, stdin: &mut dyn Read) -> Result<Frame, Failure> {
    let text = read_input(path, stdin)?;
    let json: FrameJson =
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    json.to_frame().map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_significant).and_then(Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Serializes with rounded reals and struct field order, newline terminated.
pub fn render<T: Serialize>(value: &T) -> Result<String, FrameError> {
    let mut v = serde_json::to_value(value).map_err(|e| FrameError::InvalidInput(e.to_string()))?;
    round_value(&mut v);
    let mut s = serde_json::to_string(&v).map_err(|e| FrameError::InvalidInput(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
