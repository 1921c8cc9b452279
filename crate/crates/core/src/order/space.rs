use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupHandle;
use crate::rational::Rational;

/// Largest index set for finite coordinate spaces.
pub const MAX_FINITE_COORDS: usize = 64;

/// A polyhedral cone in `Q^dim` given by generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyConeSpec {
    pub dim: usize,
    #[serde(with = "generators_serde")]
    pub generators: Vec<Vec<Rational>>,
}

mod generators_serde {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(g: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<String>> = g.iter().map(|v| v.iter().map(format_rational).collect()).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter().map(|v| v.iter().map(|x| parse_rational(x).map_err(D::Error::custom)).collect()).collect()
    }
}

/// The concrete ordered vector spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    /// `Q^X` for `X = {0, .., size - 1}`, coordinatewise order.
    FiniteCoord { size: usize },
    /// Finitely supported functions on a group, pointwise order.
    GroupFinSupp { group: GroupHandle },
    /// Eventually periodic functions on `Z`, pointwise order.
    PeriodicZ,
    /// `Q^dim` ordered by a polyhedral cone.
    PolyCone(Arc<PolyConeSpec>),
}

impl Space {
    pub fn finite(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_FINITE_COORDS {
            return Err(Error::InvalidInput(format!(
                "finite coordinate spaces need 1 <= |X| <= {MAX_FINITE_COORDS}, got {size}"
            )));
        }
        Ok(Space::FiniteCoord { size })
    }

    pub fn poly_cone(dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != dim) {
            return Err(Error::InvalidInput("cone generator of wrong dimension".into()));
        }
        Ok(Space::PolyCone(Arc::new(PolyConeSpec { dim, generators })))
    }

    /// Spaces whose order is pointwise (and which are vector lattices).
    pub fn is_coordinatewise(&self) -> bool {
        !matches!(self, Space::PolyCone(_))
    }

    /// The group whose points index this space, if any.
    pub fn point_group(&self) -> Option<GroupHandle> {
        match self {
            Space::GroupFinSupp { group } => Some(group.clone()),
            Space::PeriodicZ => Some(GroupHandle::integers()),
            _ => None,
        }
    }

    pub(crate) fn check_same(&self, other: &Space) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::FiniteCoord { size } => write!(f, "Q^{size}"),
            Space::GroupFinSupp { group } => write!(f, "fin({group})"),
            Space::PeriodicZ => f.write_str("ep(Z)"),
            Space::PolyCone(c) => write!(f, "cone(Q^{}, {} gens)", c.dim, c.generators.len()),
        }
    }
}
