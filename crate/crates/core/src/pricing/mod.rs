//! Vector pricings, conditional means, axiom and property checks, and the
//! refutation of signed invariant pricings.

mod axioms;
mod backends;
mod property;
mod refute;
mod value;

pub use axioms::{check_bijection, check_cm_axioms, check_vp_axioms, SampleConfig};
pub use backends::{
    check_mean_pair, cm_from_vp, fin_ideal_contains, vp_from_cm, ConditionalMean, DynMean, DynPricing,
    FaithfulQuotient, MeanFromPricing, PerturbedPricing, PricingFromMean, VectorPricing,
};
pub use property::{check_property, make_property, Allowed, Constraint, ElementaryProperty, PropertyKind};
pub use refute::{refute_signed_invariant, Justification, RefutationCertificate, Step};
pub use value::VPValue;
