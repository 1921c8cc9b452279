//! Groups, measures on them, their actions and random walks.

mod action;
mod group;
pub(crate) mod measure;
mod walk;

pub use action::Action;
pub use group::{CayleyTable, Element, GroupHandle};
pub use measure::{mu_apply, Measure, DEFAULT_SUPPORT_CAP};
pub use walk::{
    bounded_by, green_identity_check, green_truncated, kesten_rho_upper, obstruction_certificate, root_cmp,
    spectral_radius_bounds, strictly_increasing, verify_green_identity, IdentityCheck, ObstructionCertificate,
    SpectralBound,
};
