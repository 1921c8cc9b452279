use thiserror::Error;

/// Errors raised by the library. Mathematical check failures are reported
/// as data (see [`crate::report::Report`]), not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vectors live in different spaces: {0} vs {1}")]
    SpaceMismatch(String, String),

    #[error("vector outside the functional's domain: {0}")]
    Domain(String),

    #[error("ideal generator is not positive: {0}")]
    NonPositiveGenerator(String),

    #[error("not a chain: elements {first} and {second} are {reason}")]
    NotAChain { first: String, second: String, reason: ChainDefect },

    #[error("no chain element handles {0}")]
    NotFullAt(String),

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("undefined product 0 * inf")]
    UndefinedProduct,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("support cap exceeded: {size} entries > cap {cap}")]
    SupportCapExceeded { cap: usize, size: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("functional supplier contract violated: {0}")]
    SupplierContractViolation(String),

    #[error("measure is not symmetric")]
    NonSymmetric,

    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("invalid conditional probability table: {0}")]
    InvalidTable(String),
}

/// Why two partial functionals fail to form a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainDefect {
    Incomparable,
    BothDirections,
}

impl std::fmt::Display for ChainDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChainDefect::Incomparable => f.write_str("incomparable"),
            ChainDefect::BothDirections => f.write_str("comparable in both directions"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
