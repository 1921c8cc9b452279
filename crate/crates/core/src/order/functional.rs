//! Positive linear functionals on the concrete spaces.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::space::Space;
use super::vector::{format_point, parse_point, Data, Vector};
use crate::error::{Error, Result};
use crate::groups::Element;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctionalSpec {
    /// `v -> sum_x w(x) v(x)` for finitely many nonnegative weights.
    Weighted(BTreeMap<Element, Rational>),
    /// Sum of all entries; defined on finitely supported vectors only.
    Counting,
    /// Two-sided mean of the periodic parts of an eventually periodic vector.
    DensityZ,
    /// `v -> <d, v>` on a cone space; `d` is nonnegative on the generators.
    DualVector(Vec<Rational>),
}

impl FunctionalSpec {
    /// Uniform weight `1` on the given points.
    pub fn uniform(points: impl IntoIterator<Item = Element>) -> Self {
        FunctionalSpec::Weighted(points.into_iter().map(|p| (p, Rational::from_integer(1.into()))).collect())
    }

    /// Checks the functional is well-formed and positive for `space`.
    pub fn validate_for(&self, space: &Space) -> Result<()> {
        match (self, space) {
            (
                FunctionalSpec::Weighted(w),
                Space::FiniteCoord { .. } | Space::GroupFinSupp { .. } | Space::PeriodicZ,
            ) => {
                if w.values().any(Signed::is_negative) {
                    return Err(Error::InvalidInput("negative functional weight".into()));
                }
                for p in w.keys() {
                    Vector::delta(space, p.clone())?;
                }
                Ok(())
            }
            (FunctionalSpec::Counting, Space::FiniteCoord { .. } | Space::GroupFinSupp { .. } | Space::PeriodicZ) => {
                Ok(())
            }
            (FunctionalSpec::DensityZ, Space::PeriodicZ) => Ok(()),
            (FunctionalSpec::DensityZ, Space::GroupFinSupp { group }) if group.is_integers() => Ok(()),
            (FunctionalSpec::DualVector(d), Space::PolyCone(c)) => {
                if d.len() != c.dim {
                    return Err(Error::InvalidInput("dual vector of wrong dimension".into()));
                }
                let negative = c
                    .generators
                    .iter()
                    .any(|g| g.iter().zip(d).fold(Rational::zero(), |a, (x, y)| a + x * y).is_negative());
                if negative {
                    return Err(Error::InvalidInput("dual vector negative on a cone generator".into()));
                }
                Ok(())
            }
            _ => Err(Error::UnsupportedSpace(format!("{self} on {space}"))),
        }
    }
}

/// Exact value `J(v)`.
pub fn functional_eval(j: &FunctionalSpec, v: &Vector) -> Result<Rational> {
    match (j, v.data()) {
        (FunctionalSpec::Weighted(w), Data::Sparse(_) | Data::Periodic(_)) => {
            Ok(w.iter().fold(Rational::zero(), |acc, (p, c)| acc + c * v.value_at(p)))
        }
        (FunctionalSpec::Counting, Data::Sparse(m)) => Ok(m.values().fold(Rational::zero(), |a, b| a + b)),
        (FunctionalSpec::Counting, Data::Periodic(p)) => {
            p.sum().ok_or_else(|| Error::Domain(format!("counting functional on non-finitely supported {v}")))
        }
        (FunctionalSpec::DensityZ, Data::Periodic(p)) => Ok(p.density()),
        (FunctionalSpec::DensityZ, Data::Sparse(_)) if matches!(v.space(), Space::GroupFinSupp { group } if group.is_integers()) => {
            Ok(Rational::zero())
        }
        (FunctionalSpec::DualVector(d), Data::Dense(x)) if d.len() == x.len() => {
            Ok(d.iter().zip(x).fold(Rational::zero(), |a, (p, q)| a + p * q))
        }
        _ => Err(Error::Domain(format!("{j} cannot evaluate vectors of {}", v.space()))),
    }
}

impl fmt::Display for FunctionalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalSpec::Weighted(w) => write!(f, "weighted[{} pts]", w.len()),
            FunctionalSpec::Counting => f.write_str("counting"),
            FunctionalSpec::DensityZ => f.write_str("density"),
            FunctionalSpec::DualVector(d) => {
                write!(f, "dual({})", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

/// JSON form: `{"kind": "weighted", "weights": {"pt": "q"}}`, `{"kind":
/// "counting"}`, `{"kind": "density"}`, `{"kind": "dual", "coords": [..]}`.
/// Weighted points are keyed as in the enclosing space, so conversion needs
/// the space at hand.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalWire {
    Weighted { weights: BTreeMap<String, String> },
    Counting,
    Density,
    Dual { coords: Vec<String> },
}

impl FunctionalWire {
    pub fn from_spec(space: &Space, j: &FunctionalSpec) -> Self {
        match j {
            FunctionalSpec::Weighted(w) => FunctionalWire::Weighted {
                weights: w.iter().map(|(p, c)| (format_point(space, p), format_rational(c))).collect(),
            },
            FunctionalSpec::Counting => FunctionalWire::Counting,
            FunctionalSpec::DensityZ => FunctionalWire::Density,
            FunctionalSpec::DualVector(d) => FunctionalWire::Dual { coords: d.iter().map(format_rational).collect() },
        }
    }

    pub fn into_spec(self, space: &Space) -> Result<FunctionalSpec> {
        let spec = match self {
            FunctionalWire::Weighted { weights } => FunctionalSpec::Weighted(
                weights.iter().map(|(k, x)| Ok((parse_point(space, k)?, parse_rational(x)?))).collect::<Result<_>>()?,
            ),
            FunctionalWire::Counting => FunctionalSpec::Counting,
            FunctionalWire::Density => FunctionalSpec::DensityZ,
            FunctionalWire::Dual { coords } => {
                FunctionalSpec::DualVector(coords.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?)
            }
        };
        spec.validate_for(space)?;
        Ok(spec)
    }
}
