//! Command-line front end: runs checks and constructions, emits reports and
//! replayable certificates.

mod commands;
mod inputs;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use conemeans::Error;

#[derive(Parser, Debug)]
#[command(name = "conemeans", version, about = "Exact vector pricings, conditional means and random-walk certificates")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every sampled input.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Maximum support size of convolution powers.
    #[arg(long = "support-cap", global = true, env = "CONEMEANS_SUPPORT_CAP")]
    pub support_cap: Option<usize>,
}

impl Common {
    pub fn cap(&self) -> usize {
        self.support_cap.unwrap_or(conemeans::groups::DEFAULT_SUPPORT_CAP)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Vector pricings.
    #[command(subcommand)]
    Vp(VpCmd),
    /// Chains of partial functionals.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Invariant chains built from orbit ideals.
    #[command(subcommand)]
    Invariant(InvariantCmd),
    /// Invariance, equivariance and stationarity.
    #[command(subcommand)]
    Property(PropertyCmd),
    /// Random walks: convolution powers, spectral bounds, Green functions.
    #[command(subcommand)]
    Walk(WalkCmd),
    /// Harmonic functions obtained from invariant functionals.
    #[command(subcommand)]
    Harmonic(HarmonicCmd),
    /// Extension of conditional means to all positive step functions.
    #[command(subcommand)]
    Cm(CmCmd),
    /// Classical conditional probability tables.
    #[command(subcommand)]
    Cp(CpCmd),
    /// Refute signed invariant pricings for a group element.
    Negate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        g: String,
    },
    #[command(subcommand)]
    Certificate(CertificateCmd),
}

#[derive(Args, Debug, Clone)]
pub struct BackendArgs {
    #[arg(long, value_enum, default_value_t = Backend::Lex)]
    pub backend: Backend,
    /// `X<n>` for the finite coordinate space of size n.
    #[arg(long, default_value = "X6")]
    pub space: String,
    /// Ordered blocks for the lexicographic chain, e.g. `0,1|2|3,4,5`.
    #[arg(long)]
    pub blocks: Option<String>,
    /// Chain JSON file for `--backend chain`.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Window `[-W, W]` of the rightmost-point chain.
    #[arg(long, default_value_t = 8)]
    pub window: i64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// Lexicographic chain on `Q^X`.
    Lex,
    /// Counting functional quotient on `Q^X`.
    Faithful,
    /// Counting below density on eventually periodic functions on Z.
    Density,
    /// Rightmost point of finitely supported functions on Z.
    Rightmost,
    /// A chain read from `--chain`.
    Chain,
}

#[derive(Subcommand, Debug)]
pub enum VpCmd {
    /// Axioms of the pricing and of its conditional mean.
    Check(BackendArgs),
    /// Evaluates `r(u, v)`.
    Eval {
        #[command(flatten)]
        backend: BackendArgs,
        /// Vector as JSON, a JSON file, or comma-separated coordinates.
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Pricing to mean and back, both ways.
    Roundtrip(BackendArgs),
}

#[derive(Subcommand, Debug)]
pub enum ChainCmd {
    Validate(BackendArgs),
    Fullness(BackendArgs),
}

#[derive(Subcommand, Debug)]
pub enum InvariantCmd {
    /// Builds an invariant chain for a finite group acting on itself and
    /// checks the mean on all pairs of indicators.
    Build {
        #[arg(long)]
        group: String,
        /// JSON array of vectors; defaults to the point masses.
        #[arg(long)]
        vectors: Option<PathBuf>,
    },
    /// The invariant chain on Z from `1`, `1_even` and `delta_0`.
    Zdemo,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropertyKindArg {
    Invariance,
    Equivariance,
    Stationarity,
}

#[derive(Subcommand, Debug)]
pub enum PropertyCmd {
    Check {
        #[arg(long, value_enum)]
        kind: PropertyKindArg,
        #[command(flatten)]
        backend: BackendArgs,
        /// Largest shift `|g|` tested.
        #[arg(long, default_value_t = 10)]
        shifts: i64,
        #[arg(long, default_value = "srw")]
        mu: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct WalkArgs {
    #[arg(long)]
    pub group: String,
    /// `srw`, `lazy`, `uniform`, or a measure JSON file.
    #[arg(long, default_value = "srw")]
    pub mu: String,
    #[arg(long = "N", default_value_t = 10)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum WalkCmd {
    /// `mu^{*N}`.
    Power(WalkArgs),
    /// Lower bounds `p_{2n}^{1/2n}` for `n <= N`.
    Rho(WalkArgs),
    /// Truncated Green function and its recursion.
    Green {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        z: String,
    },
    /// Certificate that no bounded solution exists past the spectral radius.
    Obstruct {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        z: String,
        /// Upper bound for the spectral radius; defaults to the closed form
        /// on free groups.
        #[arg(long)]
        rho: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum HarmonicCmd {
    /// `(mu * h) = t h` for `h(g) = J(g v)` with the counting functional.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "srw")]
        mu: String,
        #[arg(long, default_value = "1")]
        t: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CmCmd {
    /// Checks the extension of `P(. | v)` on random step functions, or
    /// evaluates it at `--u`, `--v`.
    Extend {
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long, requires = "v")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    /// Table JSON file.
    #[arg(long, conflicts_with = "measures")]
    pub table: Option<PathBuf>,
    /// Measure chain, e.g. `1,1,0,0|0,0,2,0|0,0,0,1`.
    #[arg(long)]
    pub measures: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum CpCmd {
    Validate(TableArgs),
    /// Lifts to step functions and restricts back to indicators.
    Lift(TableArgs),
}

#[derive(Subcommand, Debug)]
pub enum CertificateCmd {
    /// Replays an obstruction or refutation certificate.
    Replay {
        #[arg(long)]
        input: PathBuf,
    },
}

/// What a command produced: the artifact and whether every check passed.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotAChain { .. }
        | Error::NotFullAt(_)
        | Error::PreconditionFailed(_)
        | Error::SupplierContractViolation(_)
        | Error::InvalidTable(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(out) => {
            let mut body = out.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &cli.common.out {
                Some(path) => fs::write(path, &body),
                None => std::io::stdout().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
