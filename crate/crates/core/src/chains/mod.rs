//! Partial functionals, the Renyi order, chains and chain pricings.

mod chain;
mod partial;

pub use chain::{
    build_builtin_chain, check_fullness, check_fullness_within, eval_chain_pricing, validate_chain, BuiltinChain,
    Chain, ChainPricing, ChainWire, Fullness,
};
pub use partial::{renyi_compare, renyi_prec, Domain, PartialFunctional, PartialFunctionalWire, Precedence};
