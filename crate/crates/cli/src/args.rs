use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gromov_lab::generators::{ProngVariant, Weight};

#[derive(Debug, Parser)]
#[command(name = "gromov-lab", version, about = "Uniformize, hyperbolize and verify discrete metric-measure spaces")]
pub struct Cli {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Parameters shared by every subcommand; they override the config file.
#[derive(Debug, Args, Default)]
pub struct ParamArgs {
    /// JSON config file with default parameters.
    #[arg(long, global = true, env = "GROMOV_LAB_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long = "R0", global = true)]
    pub r0: Option<f64>,
    #[arg(long = "R1", global = true)]
    pub r1: Option<f64>,
    /// Largest allowed epsilon; derived from the δ estimate when absent.
    #[arg(long, global = true)]
    pub eps0: Option<f64>,
    #[arg(long, global = true)]
    pub tol_geom: Option<f64>,
    #[arg(long, global = true)]
    pub tol_solve: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cap: Option<f64>,
    /// Sampled pairs, centers or balls per check.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Truncation grid, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub tgrid: Option<Vec<f64>>,
    /// Allow epsilon above eps0.
    #[arg(long, global = true)]
    pub force: bool,
    /// Directory for CSV copies of report tables.
    #[arg(long, global = true)]
    pub csv_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph as JSON.
    Generate(GenerateArgs),
    /// Deform a pointed graph by e^{-ε d(·, z₀)} and reweight its measure by e^{-β d}.
    Uniformize(TransformArgs),
    /// Quasihyperbolic graph of a bounded domain with the measure μ / d_Ω^α.
    Hyperbolize(TransformArgs),
    /// Sum-metric product of two bounded domains.
    Product(ProductArgs),
    /// Quasihyperbolic product of two uniformized pointed spaces.
    IndirectProduct(IndirectArgs),
    /// Solve a variational problem.
    Solve {
        #[command(subcommand)]
        problem: SolveCommand,
    },
    /// Sobolev or variational p-capacity of a vertex set.
    Capacity(CapacityArgs),
    /// Liouville integral criterion with a truncation sweep of Dirichlet energies.
    Liouville(LiouvilleArgs),
    /// Run one verification check.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Run a named generate, transform and verify recipe.
    Pipeline {
        #[command(subcommand)]
        recipe: Recipe,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Line,
    Interval,
    KaryTree,
    Strip,
    Prong,
    DiskPolar,
    Square,
    SlitSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Doubling,
    Pi,
}

impl From<Variant> for ProngVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Doubling => ProngVariant::Doubling,
            Variant::Pi => ProngVariant::Pi,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Truncation parameter.
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Mesh size.
    #[arg(long)]
    pub h: Option<f64>,
    /// Branching number of a tree.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Depth of a tree.
    #[arg(long = "D")]
    pub d: Option<usize>,
    /// `const:c`, `exp:a`, `expNeg:a` or `table:x:w,x:w,...`.
    #[arg(long)]
    pub weight: Option<Weight>,
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    #[arg(long)]
    pub rings: Option<usize>,
    #[arg(long)]
    pub sectors: Option<usize>,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IndirectArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Graph output.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Projection and δ report; printed when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    /// Discrete p-harmonic extension of Dirichlet data.
    Pharmonic(PharmonicArgs),
}

#[derive(Debug, Args)]
pub struct DirichletArgs {
    /// Data `a` on the ball of radius R1 about the base and `b` outside radius R2.
    #[arg(long, num_args = 2, value_names = ["R1", "R2"], conflicts_with = "ends")]
    pub annulus: Option<Vec<f64>>,
    /// Data `a` on the first ray tip and `b` on the last.
    #[arg(long)]
    pub ends: bool,
    /// Boundary values `a b`.
    #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0.0, 1.0])]
    pub values: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct PharmonicArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub dirichlet: DirichletArgs,
    /// Solution CSV (vertex, value).
    #[arg(short, long)]
    pub out: PathBuf,
    /// Solver report; printed when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    pub input: PathBuf,
    /// Vertex ids of the condenser set.
    #[arg(long, value_delimiter = ',', required = true)]
    pub set: Vec<usize>,
    /// Open set for the variational capacity; Sobolev capacity when absent.
    #[arg(long, value_delimiter = ',')]
    pub omega: Option<Vec<usize>>,
    /// Minimizer CSV (vertex, value).
    #[arg(long)]
    pub minimizer: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Strip,
    Line,
}

#[derive(Debug, Args)]
pub struct LiouvilleArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value = "const:1")]
    pub weight: Weight,
    #[arg(long, default_value_t = 0.25)]
    pub h: f64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportOut {
    /// Report JSON; printed when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SingleInput {
    pub input: PathBuf,
    #[command(flatten)]
    pub report: ReportOut,
}

#[derive(Debug, Args)]
pub struct PairInput {
    pub first: PathBuf,
    pub second: PathBuf,
    #[command(flatten)]
    pub report: ReportOut,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Doubling constant of the measure at scales up to R0.
    Doubling(SingleInput),
    /// Poincaré constant on one ball.
    Poincare {
        #[command(flatten)]
        io: SingleInput,
        #[arg(long)]
        center: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
    /// Local-to-global doubling upgrade from R0 to R1.
    Upgrade(SingleInput),
    /// Boundary distances, ball inclusions, comparability and global doubling
    /// of the uniformized space.
    Uniformization(SingleInput),
    /// Uniformize then hyperbolize and compare with the original metric.
    Roundtrip(SingleInput),
    /// Quasihyperbolic estimates and doubling of μ / d_Ω^α on k-balls.
    Hyperbolization(SingleInput),
    /// Long curves in the product of two bounded domains.
    Product(PairInput),
    /// Lipschitz behaviour of the canonical maps between two indirect products.
    Canonical {
        #[command(flatten)]
        io: PairInput,
        /// Second, smaller parameter ε'.
        #[arg(long)]
        eps2: f64,
    },
    /// Energy and solution transfer between the original and uniformized space.
    Transfer {
        #[command(flatten)]
        io: SingleInput,
        #[command(flatten)]
        dirichlet: DirichletArgs,
    },
    /// Gromov δ estimate.
    Delta(SingleInput),
}

#[derive(Debug, Subcommand)]
pub enum Recipe {
    /// Tree, uniformization, global doubling and ball inclusions.
    TreeUniformizeVerify {
        #[arg(long = "K", default_value_t = 2)]
        k: usize,
        #[arg(long = "D", default_value_t = 8)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Square domain, hyperbolization, k-estimates and doubling of μ / d_Ω^α.
    SquareHyperbolizeVerify {
        #[arg(long, default_value_t = 0.125)]
        h: f64,
        #[command(flatten)]
        report: ReportOut,
    },
}
