//! Vector pricings, conditional means, and the bijection between them.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::value::VPValue;
use crate::chains::{eval_chain_pricing, ChainPricing};
use crate::error::{Error, Result};
use crate::order::{cone_leq, functional_eval, is_positive, FunctionalSpec, Space, Vector};
use crate::rational::Rational;

/// A map `r: V+ x V+ -> [0, +inf]`, expected to satisfy the pricing axioms
/// (checked, not assumed, by [`super::check_vp_axioms`]).
pub trait VectorPricing: Send + Sync {
    fn space(&self) -> &Space;
    fn price(&self, u: &Vector, v: &Vector) -> Result<VPValue>;
    fn describe(&self) -> String;
}

/// A map `P(u | v) in [0, 1]` on pairs `0 <= u <= v != 0`.
pub trait ConditionalMean: Send + Sync {
    fn space(&self) -> &Space;
    fn mean(&self, u: &Vector, v: &Vector) -> Result<Rational>;
    fn describe(&self) -> String;
}

pub type DynPricing = Arc<dyn VectorPricing>;
pub type DynMean = Arc<dyn ConditionalMean>;

impl VectorPricing for ChainPricing {
    fn space(&self) -> &Space {
        ChainPricing::space(self)
    }

    fn price(&self, u: &Vector, v: &Vector) -> Result<VPValue> {
        eval_chain_pricing(self, u, v)
    }

    fn describe(&self) -> String {
        format!("chain pricing ({} elements) on {}", self.chain().len(), self.space())
    }
}

/// `r(u, v) = p(u) / p(v)` for a strictly positive functional `p`; such a
/// pricing vanishes only at `u = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulQuotient {
    space: Space,
    functional: FunctionalSpec,
}

impl FaithfulQuotient {
    pub fn new(space: &Space, functional: FunctionalSpec) -> Result<Self> {
        functional.validate_for(space)?;
        let faithful = match (&functional, space) {
            (FunctionalSpec::Counting, Space::FiniteCoord { .. } | Space::GroupFinSupp { .. }) => true,
            (FunctionalSpec::Weighted(w), Space::FiniteCoord { size }) => {
                (0..*size).all(|i| w.get(&crate::groups::Element::Index(i)).is_some_and(Signed::is_positive))
            }
            (FunctionalSpec::Weighted(w), Space::GroupFinSupp { group }) => {
                group.elements().is_some_and(|els| els.iter().all(|g| w.get(g).is_some_and(Signed::is_positive)))
            }
            (FunctionalSpec::DualVector(d), Space::PolyCone(c)) => c.generators.iter().all(|g| {
                g.iter().all(Zero::is_zero)
                    || g.iter().zip(d).fold(Rational::zero(), |a, (x, y)| a + x * y).is_positive()
            }),
            _ => false,
        };
        if !faithful {
            return Err(Error::InvalidInput(format!("{functional} is not strictly positive on {space}")));
        }
        Ok(FaithfulQuotient { space: space.clone(), functional })
    }
}

impl VectorPricing for FaithfulQuotient {
    fn space(&self) -> &Space {
        &self.space
    }

    fn price(&self, u: &Vector, v: &Vector) -> Result<VPValue> {
        check_positive_pair(&self.space, u, v)?;
        if u.is_zero() && v.is_zero() {
            return Ok(VPValue::one());
        }
        VPValue::ratio(&functional_eval(&self.functional, u)?, &functional_eval(&self.functional, v)?)
    }

    fn describe(&self) -> String {
        format!("quotient by {} on {}", self.functional, self.space)
    }
}

fn check_positive_pair(space: &Space, u: &Vector, v: &Vector) -> Result<()> {
    space.check_same(u.space())?;
    space.check_same(v.space())?;
    if !is_positive(u) || !is_positive(v) {
        return Err(Error::InvalidInput("vector pricings take positive arguments".into()));
    }
    Ok(())
}

/// Checks `0 <= u <= v != 0`.
pub fn check_mean_pair(space: &Space, u: &Vector, v: &Vector) -> Result<()> {
    check_positive_pair(space, u, v)?;
    if v.is_zero() || !cone_leq(u, v)? {
        return Err(Error::InvalidInput("conditional means need 0 <= u <= v != 0".into()));
    }
    Ok(())
}

/// `P(u | v) = r(u, v)`.
#[derive(Clone)]
pub struct MeanFromPricing {
    pricing: DynPricing,
}

impl ConditionalMean for MeanFromPricing {
    fn space(&self) -> &Space {
        self.pricing.space()
    }

    fn mean(&self, u: &Vector, v: &Vector) -> Result<Rational> {
        check_mean_pair(self.space(), u, v)?;
        match self.pricing.price(u, v)? {
            VPValue::Finite(x) if !x.is_negative() && x <= Rational::one() => Ok(x),
            other => Err(Error::InvalidInput(format!("pricing gave {other} for u <= v"))),
        }
    }

    fn describe(&self) -> String {
        format!("mean of [{}]", self.pricing.describe())
    }
}

/// `r_P(u, v) = P(u | u+v) / P(v | u+v)`, and `r_P(0, 0) = 1`.
#[derive(Clone)]
pub struct PricingFromMean {
    mean: DynMean,
}

impl VectorPricing for PricingFromMean {
    fn space(&self) -> &Space {
        self.mean.space()
    }

    fn price(&self, u: &Vector, v: &Vector) -> Result<VPValue> {
        check_positive_pair(self.space(), u, v)?;
        let w = u.try_add(v)?;
        if w.is_zero() {
            return Ok(VPValue::one());
        }
        VPValue::ratio(&self.mean.mean(u, &w)?, &self.mean.mean(v, &w)?)
    }

    fn describe(&self) -> String {
        format!("pricing of [{}]", self.mean.describe())
    }
}

pub fn cm_from_vp(r: DynPricing) -> DynMean {
    Arc::new(MeanFromPricing { pricing: r })
}

pub fn vp_from_cm(p: DynMean) -> DynPricing {
    Arc::new(PricingFromMean { mean: p })
}

/// `u` lies in the finiteness ideal of `v`: `r(u, v) != +inf`.
pub fn fin_ideal_contains(r: &dyn VectorPricing, v: &Vector, u: &Vector) -> Result<bool> {
    Ok(!r.price(u, v)?.is_infinite())
}

/// Adds `eps` to `r(u0, v0)` at one pair; for mutation tests.
pub struct PerturbedPricing {
    pub inner: DynPricing,
    pub at: (Vector, Vector),
    pub eps: Rational,
}

impl VectorPricing for PerturbedPricing {
    fn space(&self) -> &Space {
        self.inner.space()
    }

    fn price(&self, u: &Vector, v: &Vector) -> Result<VPValue> {
        let r = self.inner.price(u, v)?;
        if (u, v) == (&self.at.0, &self.at.1) {
            return Ok(r.add(&VPValue::Finite(self.eps.clone())));
        }
        Ok(r)
    }

    fn describe(&self) -> String {
        format!("perturbed [{}]", self.inner.describe())
    }
}

impl fmt::Debug for dyn VectorPricing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl fmt::Debug for dyn ConditionalMean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
