//! `twistchar`: characters of twisted chiral theories from the command line.

mod cache;
mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use render::Format;

#[derive(Parser, Debug)]
#[command(name = "twistchar", version, about = "Characters of holomorphically twisted chiral theories")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Directory for cached results (the TWISTCHAR_CACHE environment variable takes precedence).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    /// Seed for sampled checks run by --verify.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Cross-check the result against an independent computation; exit 3 on mismatch.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characters as truncated series, or the elliptic gamma function numerically.
    #[command(subcommand)]
    Char(CharCommand),
    /// Cohomology of the chiral Jacobi ring of a superpotential.
    Jacobi(JacobiArgs),
    /// Explicit operator bases.
    #[command(subcommand)]
    Operators(OperatorsCommand),
    /// Higher current algebra on punctured C².
    #[command(subcommand)]
    Current(CurrentCommand),
    /// Compactification on a curve and the Hodge-to-de-Rham family.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Raw truncated S³ partition-function product.
    Partition3d(Partition3dArgs),
}

#[derive(Subcommand, Debug)]
pub enum CharCommand {
    /// Free character in q1, q2, z, u.
    Free(FreeArgs),
    /// Free character in the SU(2) variables p, q, z, u.
    Su2(FreeArgs),
    /// Character with superpotential x^(N+1) in p, q, z.
    Potential(PotentialArgs),
    /// Elliptic gamma function at a point.
    Gamma(GammaArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct FreeArgs {
    /// Number of chiral fields (all with flavor charge 1).
    #[arg(long, default_value_t = 1)]
    pub dim_v: usize,
    /// Explicit flavor charges, one vector per field: "1;2" or "1,0;0,1".
    #[arg(long)]
    pub charges: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub q_max: i64,
    #[arg(long, default_value_t = 4)]
    pub z_max: i64,
    #[arg(long, default_value_t = 2)]
    pub u_max: i64,
    /// Build from the plethystic exponential instead of the product.
    #[arg(long)]
    pub pe: bool,
}

#[derive(Clone, Copy, Debug, Serialize, clap::ValueEnum)]
pub enum ConventionArg {
    Z,
    P,
}

#[derive(Args, Debug, Serialize)]
pub struct PotentialArgs {
    /// N, so that the superpotential has degree N + 1.
    #[arg(long)]
    pub degree: u32,
    #[arg(long, default_value_t = 3)]
    pub q_max: i64,
    #[arg(long, default_value_t = 6)]
    pub z_max: i64,
    /// Obtain it by substituting u in the SU(2) free character instead of the direct product.
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
}

#[derive(Args, Debug, Serialize)]
pub struct GammaArgs {
    /// Complex numbers as "re,im".
    #[arg(long, allow_hyphen_values = true)]
    pub q1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub q2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, default_value_t = 1e-16)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 10_000)]
    pub cutoff: u32,
}

#[derive(Clone, Copy, Debug, Serialize, clap::ValueEnum)]
pub enum BasisArg {
    Taylor,
    Derivative,
}

#[derive(Args, Debug, Serialize)]
pub struct JacobiArgs {
    /// Superpotential over x (one field) or x1, x2, ..., e.g. "x^3/3".
    #[arg(long)]
    pub potential: String,
    /// Largest n1 + n2 of the sectors.
    #[arg(long, default_value_t = 3)]
    pub max_weight: u32,
    /// Largest flavor weight Z of the sectors.
    #[arg(long, default_value_t = 6)]
    pub z_max: u32,
    /// Quasi-homogeneous weights "w1,w2,..." (requires --total-degree).
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub total_degree: Option<u32>,
    #[arg(long, value_enum, default_value = "taylor")]
    pub basis: BasisArg,
}

#[derive(Subcommand, Debug)]
pub enum OperatorsCommand {
    /// List the monomials of a weight space.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct EnumerateArgs {
    /// q-weight "a,b".
    #[arg(long)]
    pub weight: String,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub z_min: i64,
    #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
    pub z_max: i64,
    #[arg(long, default_value_t = 0)]
    pub u_min: u32,
    #[arg(long, default_value_t = 2)]
    pub u_max: u32,
    #[arg(long, default_value_t = 1)]
    pub dim_v: usize,
}

#[derive(Subcommand, Debug)]
pub enum CurrentCommand {
    /// Bracket of a positive-mode current with a current acting on local operators.
    Bracket(BracketArgs),
    /// The cubic bracket ℓ₃.
    Ell3(Ell3Args),
    /// Cohomology of A₂* per torus weight.
    Cohomology(A2CohomologyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct BracketArgs {
    /// Flavor algebra "glN".
    #[arg(long, default_value = "gl2")]
    pub algebra: String,
    /// Matrix: a gl2 name (E, F, H, I, E11, E12, E21, E22) or rows "a,b;c,d".
    #[arg(long = "X", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long = "Y", allow_hyphen_values = true)]
    pub y: String,
    /// Mode "m1,m2" of the lowering current.
    #[arg(long)]
    pub m: String,
    /// Mode "n1,n2" of the current on local operators.
    #[arg(long)]
    pub n: String,
    /// Level K.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub level: String,
}

#[derive(Clone, Copy, Debug, Serialize, clap::ValueEnum)]
pub enum ThetaArg {
    /// ½Tr(X{Y,Z}).
    Trace,
    /// The same on traceless parts.
    Traceless,
    Zero,
}

#[derive(Args, Debug, Serialize)]
pub struct Ell3Args {
    #[arg(long, default_value = "gl2")]
    pub algebra: String,
    /// Elements of A₂* over z1, z2, w1, w2, omega.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long = "X", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long = "Y", allow_hyphen_values = true)]
    pub y: String,
    #[arg(long = "Z", allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, value_enum, default_value = "trace")]
    pub theta: ThetaArg,
}

#[derive(Args, Debug, Serialize)]
pub struct A2CohomologyArgs {
    #[arg(long, default_value_t = 3)]
    pub max_weight: u32,
    /// Monomial-degree truncation.
    #[arg(long, default_value_t = 6)]
    pub jet: u32,
}

#[derive(Subcommand, Debug)]
pub enum ReduceCommand {
    /// Trivial bundle on T².
    T2(ReduceBoxArgs),
    /// O(n) on P¹.
    P1(P1Args),
    /// Line-bundle cohomology on a genus-g curve.
    Surface(SurfaceArgs),
    /// Cohomology of eps+ ∂̄ ± eps- ∂ on jet-truncated forms on C.
    Plane(PlaneArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ReduceBoxArgs {
    #[arg(long, default_value_t = 1)]
    pub dim_v: usize,
    #[arg(long, default_value_t = 6)]
    pub q_max: i64,
    #[arg(long, default_value_t = 6)]
    pub z_max: i64,
    #[arg(long, default_value_t = 3)]
    pub u_max: i64,
    /// Keep the fugacity sigma of odd target classes (otherwise sigma = 1).
    #[arg(long)]
    pub sigma: Option<i64>,
}

#[derive(Args, Debug, Serialize)]
pub struct P1Args {
    #[arg(long, allow_hyphen_values = true)]
    pub bundle_degree: i64,
    #[command(flatten)]
    #[serde(flatten)]
    pub bounds: ReduceBoxArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub genus: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub degree: i64,
    #[arg(long, requires = "h1")]
    pub h0: Option<u64>,
    #[arg(long, requires = "h0")]
    pub h1: Option<u64>,
}

#[derive(Clone, Copy, Debug, Serialize, clap::ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Args, Debug, Serialize)]
pub struct PlaneArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps_plus: String,
    #[arg(long, allow_hyphen_values = true)]
    pub eps_minus: String,
    #[arg(long, default_value_t = 3)]
    pub jets: u32,
    #[arg(long, value_enum, default_value = "plus")]
    pub sign: SignArg,
}

#[derive(Args, Debug, Serialize)]
pub struct Partition3dArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub tau1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub tau2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a_f: String,
    /// Largest |n| of the winding modes.
    #[arg(long, default_value_t = 2)]
    pub n_cutoff: u32,
    /// Largest n1 and n2.
    #[arg(long, default_value_t = 4)]
    pub mode_cutoff: u32,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    match commands::run(&cli.command, &cli.global) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
