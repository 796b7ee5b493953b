//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "padic-char",
    version,
    about = "Exact character computations for p-adic representations"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Truncation degree for series, norms and growth windows.
    #[arg(long, global = true, default_value_t = 32)]
    pub trunc: u32,
    /// Seed for randomized suites and samples.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace of a torus element on the smooth functions of level h.
    SmoothTrace(SmoothTraceArgs),
    /// The invariant ε(r) for r = p^-q.
    EpsR(EpsArgs),
    /// p-elementary divisors of a sublattice.
    Snf(SnfArgs),
    /// Whether a lattice is powerful.
    Powerful(PowerfulArgs),
    /// The two alternating binomial sums and their claimed values.
    BinomId(BinomArgs),
    /// Dominance of S_β in the re-expansion along a subgroup.
    Dominance(DominanceArgs),
    /// Membership of Mahler coefficients in a growth class.
    Amice(AmiceArgs),
    /// Straightening of Heisenberg words into normal form.
    Straighten(StraightenArgs),
    /// Traces of the SL2 torus action on one finite quotient.
    Sl2Trace(Sl2TraceArgs),
    /// The character of an SL2 principal series at diag(a, 1/a).
    Sl2Theta(Sl2ThetaArgs),
    /// The character of an Iwahori principal series.
    IwahoriTheta(IwahoriThetaArgs),
    /// The full sweep over levels and cutoffs.
    Sweep(SweepArgs),
    /// Runs a verification suite, or all of them.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoveringArg {
    Standard,
    Inverted,
}

#[derive(Debug, Args)]
pub struct SmoothTraceArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub h: u32,
    /// The unit s, as n or n/d.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, value_enum, default_value_t = CoveringArg::Standard)]
    pub covering: CoveringArg,
}

#[derive(Debug, Args)]
pub struct EpsArgs {
    #[arg(long)]
    pub p: u64,
    /// The radius r written p^-q, e.g. 3^-1/3.
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
}

#[derive(Debug, Args)]
pub struct SnfArgs {
    /// JSON file with the lattice {p, generators, bracket?}.
    #[arg(long)]
    pub lattice: PathBuf,
    /// JSON file with the sublattice.
    #[arg(long)]
    pub sublattice: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LatticeSource {
    /// JSON file with the lattice {p, generators, bracket?}.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Heisenberg lattice p^a12 e12 + p^a13 e13 + p^a23 e23, given as a12,a13,a23.
    #[arg(long, value_delimiter = ',')]
    pub unitriangular: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct PowerfulArgs {
    #[command(flatten)]
    pub source: LatticeSource,
    /// Prime for --unitriangular.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BinomArgs {
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub b: u64,
    #[arg(long, default_value_t = 1)]
    pub c: u64,
    #[arg(long, default_value_t = 0)]
    pub d: u64,
    #[arg(long, default_value_t = 0)]
    pub h: u32,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct DominanceArgs {
    #[arg(long)]
    pub p: u64,
    /// Radius exponents q_ν of r_ν = p^-q_ν, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub beta: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub gamma: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Cr,
    CrPlus,
    Holomorphic,
}

#[derive(Debug, Args)]
pub struct AmiceArgs {
    #[arg(long)]
    pub p: u64,
    /// Level parametrizing the catalog rules.
    #[arg(long, default_value_t = 0)]
    pub h: u32,
    /// Catalog rule: half-digit, full-digit, linear or zero.
    #[arg(long, conflicts_with = "rule_file")]
    pub rule: Option<String>,
    /// JSON file with the valuations [v_0, v_1, …] (null for a zero coefficient).
    #[arg(long)]
    pub rule_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub class: ClassArg,
    /// λ of t = p^-λ, for cr and cr-plus.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Level of the holomorphic class.
    #[arg(long)]
    pub class_h: Option<u32>,
}

#[derive(Debug, Args)]
pub struct StraightenArgs {
    /// Group elements are Exp(p^m · x) for Heisenberg generators x.
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value_t = 7)]
    pub k1: usize,
    #[arg(long, default_value_t = 1)]
    pub k2: u32,
    /// Number of random words.
    #[arg(long, default_value_t = 10)]
    pub words: usize,
    /// An explicit word such as "x1 x3 x2 d1 d2 d3" instead of random ones.
    #[arg(long, conflicts_with = "words")]
    pub word: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Args)]
pub struct Sl2Point {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub c: i64,
    /// Torus coordinate a of diag(a, 1/a).
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
}

#[derive(Debug, Args)]
pub struct Sl2TraceArgs {
    #[command(flatten)]
    pub point: Sl2Point,
    #[arg(long, default_value_t = 1)]
    pub h: u32,
    #[arg(long, default_value_t = 0)]
    pub e: u32,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Traces → formal characters → limit → certified evaluation.
    Pipeline,
    /// The closed character formula.
    Formula,
}

#[derive(Debug, Args)]
pub struct Sl2ThetaArgs {
    #[command(flatten)]
    pub point: Sl2Point,
    #[arg(long, value_enum, default_value_t = MethodArg::Pipeline)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct IwahoriThetaArgs {
    /// JSON file with the root datum {p, torus_rank, roots, chi_w, levels, k}.
    #[arg(long)]
    pub datum: PathBuf,
    /// Torus point, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub s: Vec<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Pipeline)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON file with the family: {"kind": "sl2", "p", "c"} or {"kind": "iwahori", …root datum}.
    #[arg(long, conflicts_with_all = ["p", "c"])]
    pub family: Option<PathBuf>,
    /// SL2 family prime (instead of --family).
    #[arg(long, requires = "c")]
    pub p: Option<u64>,
    #[arg(long, allow_hyphen_values = true, requires = "p")]
    pub c: Option<i64>,
    /// Torus point, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub s: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub hs: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub es: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(crate::suites::SUITE_NAMES))]
    pub suite: String,
}
