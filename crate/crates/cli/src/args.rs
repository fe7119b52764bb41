use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "causal", version, about = "Causal models, causal discovery and fine-tuning checks for Bell scenarios")]
pub struct Cli {
    /// Tolerance of floating-point independence tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Master seed of randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for output files; printed to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect a model file.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Recover causal structures from independences.
    #[command(subcommand)]
    Discover(DiscoverCmd),
    /// Structural versus fine-tuned independences.
    #[command(subcommand)]
    Faithfulness(FaithCmd),
    /// Quantum Bell experiments.
    #[command(subcommand)]
    Bell(BellCmd),
    /// The built-in scenarios.
    #[command(subcommand)]
    Case(CaseCmd),
}

#[derive(Subcommand, Debug)]
pub enum ModelCmd {
    /// Variables, edges and CPTs.
    Show { file: PathBuf },
    /// The joint distribution.
    Joint { file: PathBuf },
    /// Every conditional independence of the (observed) joint.
    Ci {
        file: PathBuf,
        #[command(flatten)]
        scope: ScopeArgs,
    },
    /// Graphviz drawing of the DAG.
    Dot { file: PathBuf },
    /// Print a built-in model in file format; lists them without a name.
    Builtin { name: Option<String> },
}

#[derive(Args, Debug)]
pub struct ScopeArgs {
    /// Restrict to these variables (comma separated); default all.
    #[arg(long, value_delimiter = ',')]
    pub observed: Vec<String>,
    /// Only statements between single variables.
    #[arg(long)]
    pub pairs: bool,
}

/// Where the independences come from: explicit statements or a model.
#[derive(Args, Debug)]
pub struct CiInput {
    /// Variable names (comma separated), required with --ci.
    #[arg(long, value_delimiter = ',')]
    pub vars: Vec<String>,
    /// A generating statement such as "S _||_ C | T"; repeatable.
    #[arg(long = "ci")]
    pub statements: Vec<String>,
    /// Read independences off this model file instead.
    #[arg(long, conflicts_with = "statements")]
    pub model: Option<PathBuf>,
    /// Observed variables of --model (comma separated); default all.
    #[arg(long, value_delimiter = ',')]
    pub observed: Vec<String>,
    /// Ordering constraint such as "S<T"; repeatable.
    #[arg(long = "order")]
    pub order: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Pairwise,
    Unrestricted,
}

#[derive(Subcommand, Debug)]
pub enum DiscoverCmd {
    /// One minimal DAG per causal ordering, then the faithful ones.
    Nolatent(CiInput),
    /// Brute-force search over structures with latent common causes.
    Latent {
        #[command(flatten)]
        input: CiInput,
        #[arg(long, value_enum, default_value_t = Mode::Pairwise)]
        mode: Mode,
        /// Upper bound on the number of latent variables.
        #[arg(long, default_value_t = 3)]
        max_latents: usize,
        /// Keep only structures without redundant latents.
        #[arg(long)]
        maximal: bool,
    },
    /// The pattern summarizing all latent structures, and its expansion.
    Pattern(CiInput),
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    /// Number of perturbed models.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Weight of the random distribution mixed into each CPT row.
    #[arg(long, default_value_t = 0.1)]
    pub magnitude: f64,
}

#[derive(Subcommand, Debug)]
pub enum FaithCmd {
    /// Label each observed independence structural or fine-tuned.
    Classify {
        file: PathBuf,
        /// Observed variables (comma separated); default all.
        #[arg(long, value_delimiter = ',')]
        observed: Vec<String>,
        #[command(flatten)]
        perturb: PerturbArgs,
        /// Skip the perturbation test.
        #[arg(long)]
        no_perturb: bool,
    },
    /// Survival rate of one statement under parameter perturbation.
    Perturb {
        file: PathBuf,
        /// Statement such as "A _||_ B | C".
        statement: String,
        #[command(flatten)]
        perturb: PerturbArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Epr,
    Chsh,
}

#[derive(Args, Debug)]
pub struct BellArgs {
    #[arg(long, value_enum, default_value_t = Kind::Chsh)]
    pub kind: Kind,
    /// State weight p of √p|++⟩ + √(1−p)|−−⟩.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Rotate every measurement axis by this angle (radians) about ŷ.
    #[arg(long, default_value_t = 0.0)]
    pub tilt: f64,
}

#[derive(Subcommand, Debug)]
pub enum BellCmd {
    /// P(A,B|S,T) for the four setting pairs.
    Tables(BellArgs),
    /// The joint P(S,T,A,B).
    Joint(BellArgs),
    /// Every conditional independence of the joint.
    Ci(BellArgs),
    /// The CHSH combination of correlators.
    Chsh(BellArgs),
}

#[derive(Subcommand, Debug)]
pub enum CaseCmd {
    /// Run one case, or all with --all.
    Run {
        #[arg(required_unless_present = "all")]
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
    /// Registered cases.
    List,
}
