//! Exact vector pricings and conditional means on ordered vector spaces.

pub mod chains;
pub mod error;
pub mod groups;
pub mod invariant;
pub mod lattice;
pub mod order;
pub mod pricing;
pub mod rational;
pub mod report;
pub mod sample;

pub use error::{Error, Result};

// The guide's code blocks run as doctests of this crate, one module per
// chapter so a failure points at its chapter.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pricings.md")]
    mod pricings {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/invariance.md")]
    mod invariance {}
    #[doc = include_str!("../../../book/src/walks.md")]
    mod walks {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
