use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "uli", version, about = "Exact probability functions on unary languages")]
pub struct Cli {
    /// TOML file supplying flag values; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function on a sentence or a state description.
    Eval(EvalArgs),
    /// Check a principle exhaustively up to a bound.
    Check(CheckArgs),
    /// Decide whether a compressed Px point extends to a higher level.
    Extend(ExtendArgs),
    /// Bernstein point of a finite measure on [0,1].
    Bernstein(BernsteinArgs),
    /// Build a row-pick function from an upsilon matrix.
    Nabla(NablaArgs),
    /// Decompose y_c, or a mixture of y_c's, into two nabla mixtures.
    Decompose(DecomposeArgs),
    /// Restrict a function to a smaller language.
    Marginalize(MarginalizeArgs),
}

/// A sentence or a state description to evaluate on.
#[derive(Debug, Args)]
pub struct Target {
    /// Quantifier-free sentence, e.g. "P1(a1) & !P2(a2)".
    #[arg(long, value_name = "FORMULA")]
    pub phi: Option<String>,

    /// State description as 1-based atom indices, e.g. 2,4.
    #[arg(long, value_name = "ATOMS", conflicts_with = "phi")]
    pub sd: Option<String>,

    /// Constant window for --phi (default: the constants it mentions).
    #[arg(long, value_name = "INDICES", requires = "phi")]
    pub constants: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["phi", "sd"])))]
pub struct EvalArgs {
    /// Function descriptor: a path or inline JSON.
    #[arg(long, value_name = "JSON")]
    pub f: String,

    #[command(flatten)]
    pub target: Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrincipleArg {
    Ex,
    Px,
    Ip,
    Wip,
    Additivity,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub principle: PrincipleArg,

    /// Function descriptor: a path or inline JSON.
    #[arg(long, value_name = "JSON")]
    pub f: String,

    /// Largest number of constants examined.
    #[arg(long, default_value_t = 3)]
    pub n: usize,

    /// Predicates in the first block (wip only).
    #[arg(long, required_if_eq("principle", "wip"))]
    pub p: Option<u32>,

    /// Predicates in the second block (wip only).
    #[arg(long, required_if_eq("principle", "wip"))]
    pub r: Option<u32>,

    /// Refuse checks planning more evaluations than this.
    #[arg(long)]
    pub max_cases: Option<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Fm,
    Simplex,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    /// Compressed point C_0,..,C_q.
    #[arg(long = "C", value_name = "RATIONALS")]
    pub c: String,

    #[arg(long)]
    pub q: u32,

    /// Target level.
    #[arg(long)]
    pub r: u32,

    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct BernsteinArgs {
    /// Measure as [{"x":"1/2","w":"1"}]: a path or inline JSON.
    #[arg(long, value_name = "JSON")]
    pub measure: String,

    #[arg(long)]
    pub q: u32,
}

#[derive(Debug, Args)]
pub struct NablaArgs {
    /// Upsilon matrix: a path or inline JSON.
    #[arg(long, value_name = "JSON")]
    pub upsilon: String,

    #[arg(long)]
    pub q: u32,

    /// Average over injective picks only.
    #[arg(long)]
    pub no_replacement: bool,

    /// Sentence to evaluate.
    #[arg(long, value_name = "FORMULA")]
    pub eval: Option<String>,

    /// State description to evaluate, as 1-based atom indices.
    #[arg(long, value_name = "ATOMS", conflicts_with = "eval")]
    pub sd: Option<String>,

    /// Constant window for --eval.
    #[arg(long, value_name = "INDICES", requires = "eval")]
    pub constants: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["c", "f"])))]
pub struct DecomposeArgs {
    /// Point c of y_c.
    #[arg(long, value_name = "RATIONALS")]
    pub c: Option<String>,

    /// Level of --c (inferred from its length when absent).
    #[arg(long, requires = "c")]
    pub q: Option<u32>,

    /// Mixture of symmetrized functions: a path or inline JSON.
    #[arg(long, value_name = "JSON")]
    pub f: Option<String>,

    /// Verify the identity on all state descriptions up to this size.
    #[arg(long, default_value_t = 3)]
    pub verify_n: usize,
}

#[derive(Debug, Args)]
pub struct MarginalizeArgs {
    /// Function descriptor: a path or inline JSON.
    #[arg(long, value_name = "JSON")]
    pub f: String,

    /// Target level.
    #[arg(long)]
    pub q: u32,

    /// Tabulate values on state descriptions up to this size.
    #[arg(long, default_value_t = 3)]
    pub n: usize,

    #[command(flatten)]
    pub target: Target,
}
