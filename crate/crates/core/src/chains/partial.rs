//! Partial positive functionals and the Renyi order between them.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Element;
use crate::order::{
    functional_eval, ideal_contains, is_positive, FunctionalSpec, FunctionalWire, PeriodicZ, Space, Vector,
};
use crate::rational::Rational;

/// The ideal on which a partial functional is defined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Whole,
    /// The ideal generated by finitely many positive vectors.
    Ideal(Vec<Vector>),
    /// Eventually periodic vectors whose left (right) periodic part may be
    /// non-zero only if `left` (`right`) is set. `Tails { false, false }` is
    /// the finitely supported ideal; these are exactly the shift-invariant
    /// ideals generated by single vectors.
    Tails {
        left: bool,
        right: bool,
    },
}

impl Domain {
    pub fn finitely_supported() -> Domain {
        Domain::Tails { left: false, right: false }
    }

    /// Canonical form for `space`: `Whole` on `ep(Z)` is `Tails { true, true }`.
    fn normalize(self, space: &Space) -> Result<Domain> {
        match (self, space) {
            (Domain::Whole, Space::PeriodicZ) => Ok(Domain::Tails { left: true, right: true }),
            (d @ Domain::Tails { .. }, Space::PeriodicZ) => Ok(d),
            (Domain::Tails { .. }, _) => Err(Error::UnsupportedSpace(format!("tail ideals on {space}"))),
            (Domain::Ideal(gens), _) => {
                if gens.is_empty() {
                    return Err(Error::InvalidInput("ideal needs at least one generator".into()));
                }
                for g in &gens {
                    g.space().check_same(space)?;
                    if !is_positive(g) {
                        return Err(Error::NonPositiveGenerator(g.to_string()));
                    }
                }
                Ok(Domain::Ideal(gens))
            }
            (d, _) => Ok(d),
        }
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        match self {
            Domain::Whole => Ok(true),
            Domain::Ideal(gens) => Ok(ideal_contains(gens, v)?.0),
            Domain::Tails { left, right } => {
                let p = v.as_periodic().ok_or_else(|| Error::SpaceMismatch("ep(Z)".into(), v.space().to_string()))?;
                Ok((*left || p.left_is_zero()) && (*right || p.right_is_zero()))
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Whole => f.write_str("whole"),
            Domain::Ideal(gens) => write!(f, "ideal({} gens)", gens.len()),
            Domain::Tails { left: false, right: false } => f.write_str("finitely supported"),
            Domain::Tails { left, right } => write!(f, "tails(left={left}, right={right})"),
        }
    }
}

/// A pair `(U, J)`: an ideal `U` and a non-zero positive linear functional
/// `J` on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialFunctional {
    space: Space,
    domain: Domain,
    functional: FunctionalSpec,
    label: String,
}

impl PartialFunctional {
    pub fn new(space: &Space, domain: Domain, functional: FunctionalSpec, label: impl Into<String>) -> Result<Self> {
        functional.validate_for(space)?;
        let domain = domain.normalize(space)?;
        let pf = PartialFunctional { space: space.clone(), domain, functional, label: label.into() };
        if !pf.functional_defined_on_domain() {
            return Err(Error::Domain(format!("{} is not defined on {}", pf.functional, pf.domain)));
        }
        match pf.vanishes_on_domain_of(&pf)? {
            Some(false) => Ok(pf),
            _ => Err(Error::InvalidInput(format!("{} vanishes on {}", pf.functional, pf.domain))),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn functional(&self) -> &FunctionalSpec {
        &self.functional
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `J(v)`; a domain error if `v` is not in `U`.
    pub fn eval(&self, v: &Vector) -> Result<Rational> {
        if !self.domain.contains(v)? {
            return Err(Error::Domain(format!("{v} is outside {}", self.domain)));
        }
        functional_eval(&self.functional, v)
    }

    /// Whether `self` handles `v`: `v in U` and `J(v) != 0`.
    pub fn handles(&self, v: &Vector) -> Result<bool> {
        Ok(self.domain.contains(v)? && !functional_eval(&self.functional, v)?.is_zero())
    }

    fn functional_defined_on_domain(&self) -> bool {
        match (&self.functional, &self.domain) {
            (FunctionalSpec::Counting, Domain::Tails { left, right }) => !left && !right,
            (FunctionalSpec::Counting, Domain::Ideal(gens)) => gens.iter().all(Vector::is_finitely_supported),
            _ => true,
        }
    }

    /// Whether this functional's formula vanishes on the ideal `other.domain`:
    /// `Some(true)` if it does, `Some(false)` if not, `None` when the formula
    /// is undefined somewhere on that ideal.
    ///
    /// A positive functional vanishing on the generators of an ideal vanishes
    /// on the whole ideal, since every element is dominated by a multiple of
    /// their sum, so generators suffice.
    fn vanishes_on_domain_of(&self, other: &PartialFunctional) -> Result<Option<bool>> {
        let j = &self.functional;
        let probes: Vec<Vector> = match &other.domain {
            Domain::Ideal(gens) => gens.clone(),
            Domain::Whole => match &self.space {
                Space::FiniteCoord { size } => {
                    vec![Vector::from_coords(&self.space, &vec![Rational::one(); *size])?]
                }
                Space::GroupFinSupp { group } => match group.elements() {
                    Some(els) => vec![Vector::indicator(&self.space, &els)?],
                    // Every delta lies in the whole space: a non-empty
                    // weight list or counting is non-zero on some delta.
                    None => {
                        return Ok(Some(match j {
                            FunctionalSpec::Weighted(w) => w.values().all(Zero::is_zero),
                            FunctionalSpec::DensityZ => true,
                            _ => false,
                        }))
                    }
                },
                Space::PolyCone(c) => {
                    c.generators.iter().map(|g| Vector::from_coords(&self.space, g)).collect::<Result<_>>()?
                }
                Space::PeriodicZ => unreachable!("normalized to tails"),
            },
            Domain::Tails { left, right } => {
                return Ok(match j {
                    FunctionalSpec::DensityZ => Some(!left && !right),
                    FunctionalSpec::Counting if *left || *right => None,
                    FunctionalSpec::Counting => Some(false),
                    FunctionalSpec::Weighted(w) => Some(w.values().all(Zero::is_zero)),
                    FunctionalSpec::DualVector(_) => None,
                })
            }
        };
        for p in &probes {
            match functional_eval(j, p) {
                Ok(x) if x.is_zero() => {}
                Ok(_) => return Ok(Some(false)),
                Err(Error::Domain(_)) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        Ok(Some(true))
    }
}

impl fmt::Display for PartialFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{} on {}]", self.label, self.functional, self.domain)
    }
}

/// Outcome of comparing `p1` against `p2` in the Renyi order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precedence {
    /// `J_2` vanishes on `U_1`: `p1 < p2`.
    Precedes,
    /// `J_2` is non-zero somewhere on `U_1`.
    NotVanishing,
    /// `J_2` cannot be evaluated on all of `U_1`.
    Undefined,
}

/// Compares `p1` and `p2` in the Renyi order.
pub fn renyi_compare(p1: &PartialFunctional, p2: &PartialFunctional) -> Result<Precedence> {
    p1.space.check_same(&p2.space)?;
    Ok(match p2.vanishes_on_domain_of(p1)? {
        Some(true) => Precedence::Precedes,
        Some(false) => Precedence::NotVanishing,
        None => Precedence::Undefined,
    })
}

/// `p1 < p2` in the Renyi order, i.e. `J_2` vanishes on `U_1`. An undefined
/// comparison counts as "not below".
pub fn renyi_prec(p1: &PartialFunctional, p2: &PartialFunctional) -> Result<bool> {
    Ok(renyi_compare(p1, p2)? == Precedence::Precedes)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub(crate) enum DomainWire {
    Whole,
    Ideal(Vec<Vector>),
    Tails { left: bool, right: bool },
}

/// JSON form of a partial functional; the space is supplied by the
/// enclosing chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartialFunctionalWire {
    pub label: String,
    domain: DomainWire,
    functional: FunctionalWire,
}

impl PartialFunctionalWire {
    pub fn from_pf(pf: &PartialFunctional) -> Self {
        let domain = match &pf.domain {
            Domain::Whole => DomainWire::Whole,
            Domain::Ideal(g) => DomainWire::Ideal(g.clone()),
            Domain::Tails { left, right } => DomainWire::Tails { left: *left, right: *right },
        };
        PartialFunctionalWire {
            label: pf.label.clone(),
            domain,
            functional: FunctionalWire::from_spec(&pf.space, &pf.functional),
        }
    }

    pub fn into_pf(self, space: &Space) -> Result<PartialFunctional> {
        let domain = match self.domain {
            DomainWire::Whole => Domain::Whole,
            DomainWire::Ideal(g) => Domain::Ideal(g),
            DomainWire::Tails { left, right } => Domain::Tails { left, right },
        };
        PartialFunctional::new(space, domain, self.functional.into_spec(space)?, self.label)
    }
}

/// Indicator of `[lo, hi]` inside `ep(Z)` or `fin(Z)`.
pub(crate) fn interval(space: &Space, lo: i64, hi: i64) -> Result<Vector> {
    let pts: Vec<Element> = (lo..=hi).map(Element::z).collect();
    Vector::indicator(space, &pts)
}

/// `1_{n >= 0}` and `1_{n < 0}` on `ep(Z)`.
pub(crate) fn half_lines() -> (Vector, Vector) {
    let one = || vec![Rational::one()];
    let zero = || vec![Rational::zero()];
    (
        Vector::periodic(PeriodicZ::new(zero(), 0, Vec::new(), one())),
        Vector::periodic(PeriodicZ::new(one(), 0, Vec::new(), zero())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn counting_fin() -> PartialFunctional {
        PartialFunctional::new(&Space::PeriodicZ, Domain::finitely_supported(), FunctionalSpec::Counting, "count")
            .unwrap()
    }

    fn density() -> PartialFunctional {
        PartialFunctional::new(&Space::PeriodicZ, Domain::Whole, FunctionalSpec::DensityZ, "density").unwrap()
    }

    #[test]
    fn counting_precedes_density() {
        assert!(renyi_prec(&counting_fin(), &density()).unwrap());
        assert_eq!(renyi_compare(&density(), &counting_fin()).unwrap(), Precedence::Undefined);
        assert!(!renyi_prec(&density(), &density()).unwrap());
        assert!(!renyi_prec(&counting_fin(), &counting_fin()).unwrap());
    }

    #[test]
    fn disjoint_deltas_kill_each_other() {
        let x = Space::finite(3).unwrap();
        let d = |i| Vector::delta(&x, Element::Index(i)).unwrap();
        let p = |i| {
            PartialFunctional::new(&x, Domain::Ideal(vec![d(i)]), FunctionalSpec::uniform([Element::Index(i)]), "")
                .unwrap()
        };
        assert!(renyi_prec(&p(1), &p(2)).unwrap());
        assert!(renyi_prec(&p(2), &p(1)).unwrap());
    }

    #[test]
    fn rejects_vanishing_or_undefined_functionals() {
        assert!(PartialFunctional::new(&Space::PeriodicZ, Domain::finitely_supported(), FunctionalSpec::DensityZ, "")
            .is_err());
        assert!(PartialFunctional::new(&Space::PeriodicZ, Domain::Whole, FunctionalSpec::Counting, "").is_err());
        let x = Space::finite(2).unwrap();
        let d0 = Vector::delta(&x, Element::Index(0)).unwrap();
        assert!(PartialFunctional::new(&x, Domain::Ideal(vec![d0]), FunctionalSpec::uniform([Element::Index(1)]), "")
            .is_err());
    }

    #[test]
    fn tails_membership() {
        let (right, left) = half_lines();
        let d = Domain::Tails { left: false, right: true };
        assert!(d.contains(&right).unwrap());
        assert!(!d.contains(&left).unwrap());
        assert!(d.contains(&interval(&Space::PeriodicZ, -4, 2).unwrap()).unwrap());
        assert_eq!(density().eval(&left).unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(counting_fin().eval(&interval(&Space::PeriodicZ, 0, 4).unwrap()).unwrap(), int(5));
    }
}
