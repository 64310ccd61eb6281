use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdyson_core::{ShiftPolicy, ShiftVector};

#[derive(Parser, Debug)]
#[command(name = "qdyson", version, about = "Exact coefficients of the q-Dyson product")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient of x^delta as R(q, z) times the q-multinomial, with z_i = q^a_i.
    Coeff(CoeffArgs),
    /// The constant term, which must come out as R = 1.
    ConstantTerm(ConstantTermArgs),
    /// Grid shift that minimizes the number of evaluation points.
    BestShift(BestShiftArgs),
    /// Compare the engine against direct expansion at one exponent vector a.
    Verify(VerifyArgs),
    /// Verify every small case in a range.
    Sweep(SweepArgs),
    /// Theorem, computation trace and verification appendix for one coefficient.
    Article(ArticleArgs),
}

/// Comma-separated integers, e.g. `2,-2,0,0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

pub fn parse_ints(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("'{t}' is not an integer")))
        .collect::<Result<Vec<_>, _>>()
        .map(IntList)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftSpec {
    Auto,
    Zero,
    Given(Vec<i64>),
}

pub fn parse_shift(s: &str) -> Result<ShiftSpec, String> {
    match s {
        "auto" => Ok(ShiftSpec::Auto),
        "zero" => Ok(ShiftSpec::Zero),
        _ => parse_ints(s).map(|l| ShiftSpec::Given(l.0)).map_err(|e| format!("expected auto, zero or a list: {e}")),
    }
}

impl ShiftSpec {
    pub fn policy(&self, radius: Option<i64>) -> ShiftPolicy {
        match (self, radius) {
            (ShiftSpec::Auto, None) => ShiftPolicy::Best,
            (ShiftSpec::Auto, Some(r)) => ShiftPolicy::BestWithin(r),
            (ShiftSpec::Zero, _) => ShiftPolicy::Zero,
            (ShiftSpec::Given(c), _) => ShiftPolicy::Given(ShiftVector(c.clone())),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ShiftArgs {
    /// auto, zero, or explicit offsets c1,c2,...
    #[arg(long, default_value = "auto", value_parser = parse_shift, allow_hyphen_values = true)]
    pub shift: ShiftSpec,
    /// Search radius for the automatic shift.
    #[arg(long)]
    pub radius: Option<i64>,
}

impl ShiftArgs {
    pub fn policy(&self) -> ShiftPolicy {
        self.shift.policy(self.radius)
    }
}

#[derive(Args, Debug)]
pub struct DeltaArg {
    /// Exponent vector delta, e.g. 2,-2,0,0.
    #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
    pub delta: IntList,
}

#[derive(Args, Debug)]
pub struct JobsArg {
    /// Worker threads (0 = all cores).
    #[arg(long, env = "QDYSON_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct CoeffArgs {
    #[command(flatten)]
    pub delta: DeltaArg,
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// One summand per evaluation point instead of the combined R.
    #[arg(long)]
    pub split: bool,
    /// Recompute under several shifts and fail unless all agree.
    #[arg(long)]
    pub cross_check_shifts: bool,
    #[command(flatten)]
    pub jobs: JobsArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ConstantTermArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BestShiftArgs {
    #[command(flatten)]
    pub delta: DeltaArg,
    /// Search radius for the shift.
    #[arg(long)]
    pub radius: Option<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub delta: DeltaArg,
    /// Exponent vector a with every a_i >= 1, e.g. 1,2,1.
    #[arg(long, value_parser = parse_ints)]
    pub a: IntList,
    #[command(flatten)]
    pub shift: ShiftArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Fewest variables.
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    /// Most variables.
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
    /// Largest a_i.
    #[arg(long, default_value_t = 2)]
    pub a_max: u64,
    /// Largest sum of |delta_i|.
    #[arg(long, default_value_t = 2)]
    pub budget: u64,
    /// Shift policies to test; repeat for several.
    #[arg(long = "shift", value_parser = parse_shift, allow_hyphen_values = true, default_value = "auto")]
    pub shifts: Vec<ShiftSpec>,
    /// Search radius for the automatic shift.
    #[arg(long)]
    pub radius: Option<i64>,
    /// Also check exponent vectors with nonzero sum.
    #[arg(long)]
    pub inhomogeneous: bool,
    /// Allow n > 4 or a-max > 3.
    #[arg(long)]
    pub unbounded: bool,
    /// Run on one thread.
    #[arg(long)]
    pub sequential: bool,
    /// List every report, not just failures.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub jobs: JobsArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ArticleArgs {
    #[command(flatten)]
    pub delta: DeltaArg,
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// Sample exponent vector for the appendix; repeatable.
    #[arg(long = "a", value_parser = parse_ints)]
    pub samples: Vec<IntList>,
    #[command(flatten)]
    pub jobs: JobsArg,
    #[command(flatten)]
    pub output: OutputArgs,
}
