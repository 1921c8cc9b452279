use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::periodic::PeriodicZ;
use super::space::Space;
use crate::error::{Error, Result};
use crate::groups::Element;
use crate::rational::{format_rational, parse_rational, Rational};

/// Storage of a vector; which variant is used is fixed by the space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Data {
    /// `FiniteCoord` and `GroupFinSupp`: zero entries are never stored.
    Sparse(BTreeMap<Element, Rational>),
    Periodic(PeriodicZ),
    /// `PolyCone`.
    Dense(Vec<Rational>),
}

/// An element of one of the concrete ordered spaces. Values are immutable and
/// canonical, so `==` is equality of vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    space: Space,
    data: Data,
}

impl Vector {
    pub fn zero(space: &Space) -> Vector {
        let data = match space {
            Space::FiniteCoord { .. } | Space::GroupFinSupp { .. } => Data::Sparse(BTreeMap::new()),
            Space::PeriodicZ => Data::Periodic(PeriodicZ::zero()),
            Space::PolyCone(c) => Data::Dense(vec![Rational::zero(); c.dim]),
        };
        Vector { space: space.clone(), data }
    }

    /// Dense coordinates for `FiniteCoord` or `PolyCone` spaces.
    pub fn from_coords(space: &Space, coords: &[Rational]) -> Result<Vector> {
        match space {
            Space::FiniteCoord { size } => {
                if coords.len() != *size {
                    return Err(Error::InvalidInput(format!("expected {size} coordinates, got {}", coords.len())));
                }
                Vector::from_entries(space, coords.iter().enumerate().map(|(i, x)| (Element::Index(i), x.clone())))
            }
            Space::PolyCone(c) => {
                if coords.len() != c.dim {
                    return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", c.dim, coords.len())));
                }
                Ok(Vector { space: space.clone(), data: Data::Dense(coords.to_vec()) })
            }
            _ => Err(Error::UnsupportedSpace(format!("dense coordinates on {space}"))),
        }
    }

    /// Finitely many point values (repeated points add up).
    pub fn from_entries(space: &Space, entries: impl IntoIterator<Item = (Element, Rational)>) -> Result<Vector> {
        let mut map: BTreeMap<Element, Rational> = BTreeMap::new();
        for (p, x) in entries {
            check_point(space, &p)?;
            *map.entry(p).or_insert_with(Rational::zero) += x;
        }
        map.retain(|_, x| !x.is_zero());
        match space {
            Space::FiniteCoord { .. } | Space::GroupFinSupp { .. } => {
                Ok(Vector { space: space.clone(), data: Data::Sparse(map) })
            }
            Space::PeriodicZ => {
                let Some(lo) = map.keys().filter_map(Element::as_z).min() else {
                    return Ok(Vector::zero(space));
                };
                let hi = map.keys().filter_map(Element::as_z).max().unwrap_or(lo);
                let core = (lo..=hi).map(|n| map.get(&Element::z(n)).cloned().unwrap_or_else(Rational::zero)).collect();
                Ok(Vector::periodic(PeriodicZ::finite(lo, core)))
            }
            Space::PolyCone(_) => Err(Error::UnsupportedSpace(format!("point entries on {space}"))),
        }
    }

    pub fn periodic(p: PeriodicZ) -> Vector {
        Vector { space: Space::PeriodicZ, data: Data::Periodic(p) }
    }

    pub fn indicator(space: &Space, points: &[Element]) -> Result<Vector> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        Vector::from_entries(space, pts.into_iter().map(|p| (p, Rational::one())))
    }

    pub fn delta(space: &Space, point: Element) -> Result<Vector> {
        Vector::from_entries(space, [(point, Rational::one())])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn data(&self) -> &Data {
        &self.data
    }

    pub fn as_sparse(&self) -> Option<&BTreeMap<Element, Rational>> {
        match &self.data {
            Data::Sparse(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_periodic(&self) -> Option<&PeriodicZ> {
        match &self.data {
            Data::Periodic(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_dense(&self) -> Option<&[Rational]> {
        match &self.data {
            Data::Dense(d) => Some(d),
            _ => None,
        }
    }

    /// Value at a point of a coordinatewise space (zero off the support).
    pub fn value_at(&self, point: &Element) -> Rational {
        match &self.data {
            Data::Sparse(m) => m.get(point).cloned().unwrap_or_else(Rational::zero),
            Data::Periodic(p) => point.as_z().map(|n| p.value_at(n).clone()).unwrap_or_else(Rational::zero),
            Data::Dense(d) => match point {
                Element::Index(i) => d.get(*i).cloned().unwrap_or_else(Rational::zero),
                _ => Rational::zero(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Sparse(m) => m.is_empty(),
            Data::Periodic(p) => p.is_zero(),
            Data::Dense(d) => d.iter().all(Zero::is_zero),
        }
    }

    /// Every value is `>= 0`. For coordinatewise spaces this is positivity;
    /// cone spaces use [`crate::order::is_positive`].
    pub fn is_pointwise_nonneg(&self) -> bool {
        match &self.data {
            Data::Sparse(m) => m.values().all(|x| !x.is_negative()),
            Data::Periodic(p) => p.is_nonneg(),
            Data::Dense(d) => d.iter().all(|x| !x.is_negative()),
        }
    }

    /// Finitely many coordinates are non-zero.
    pub fn is_finitely_supported(&self) -> bool {
        match &self.data {
            Data::Periodic(p) => p.is_finitely_supported(),
            _ => true,
        }
    }

    /// Pointwise combination of two vectors of the same coordinatewise space.
    pub fn zip_with(&self, other: &Vector, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Vector> {
        self.space.check_same(&other.space)?;
        let data = match (&self.data, &other.data) {
            (Data::Sparse(a), Data::Sparse(b)) => {
                let zero = Rational::zero();
                let mut out = BTreeMap::new();
                for k in a.keys().chain(b.keys()) {
                    if out.contains_key(k) {
                        continue;
                    }
                    let x = f(a.get(k).unwrap_or(&zero), b.get(k).unwrap_or(&zero));
                    out.insert(k.clone(), x);
                }
                out.retain(|_, x: &mut Rational| !x.is_zero());
                Data::Sparse(out)
            }
            (Data::Periodic(a), Data::Periodic(b)) => Data::Periodic(a.zip_with(b, f)),
            (Data::Dense(a), Data::Dense(b)) => Data::Dense(a.iter().zip(b).map(|(x, y)| f(x, y)).collect()),
            _ => unreachable!("same space implies same storage"),
        };
        Ok(Vector { space: self.space.clone(), data })
    }

    /// Applies `f` to every value; `f(0)` must be `0` for sparse storage.
    pub fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> Vector {
        let data = match &self.data {
            Data::Sparse(m) => {
                let mut out: BTreeMap<Element, Rational> = m.iter().map(|(k, x)| (k.clone(), f(x))).collect();
                out.retain(|_, x| !x.is_zero());
                Data::Sparse(out)
            }
            Data::Periodic(p) => Data::Periodic(p.map(&f)),
            Data::Dense(d) => Data::Dense(d.iter().map(&f).collect()),
        };
        Vector { space: self.space.clone(), data }
    }

    pub fn try_add(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, t: &Rational) -> Vector {
        if t.is_zero() {
            return Vector::zero(&self.space);
        }
        self.map_values(|x| x * t)
    }

    /// Sum of a non-empty list of vectors.
    pub fn sum<'a>(vs: impl IntoIterator<Item = &'a Vector>) -> Option<Vector> {
        let mut it = vs.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, v| &acc + v))
    }

    /// Points with non-zero value, for sparse storage.
    pub fn support_points(&self) -> Vec<Element> {
        match &self.data {
            Data::Sparse(m) => m.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }

    /// Distinct values taken (including 0 where the vector vanishes somewhere
    /// in its representation).
    pub fn stored_values(&self) -> Vec<Rational> {
        match &self.data {
            Data::Sparse(m) => m.values().cloned().collect(),
            Data::Periodic(p) => p.values().cloned().collect(),
            Data::Dense(d) => d.clone(),
        }
    }

    /// Largest value attained (0 for the zero vector of a sparse space).
    pub fn max_value(&self) -> Rational {
        let vals = self.stored_values();
        let base = if matches!(self.data, Data::Sparse(_)) { Some(Rational::zero()) } else { None };
        vals.into_iter().chain(base).max().unwrap_or_else(Rational::zero)
    }

    /// Smallest strictly positive value, if any.
    pub fn min_positive_value(&self) -> Option<Rational> {
        self.stored_values().into_iter().filter(|x| x.is_positive()).min()
    }

    /// Indicator of the support, for coordinatewise spaces.
    pub fn support_indicator(&self) -> Vector {
        self.map_values(|x| if x.is_zero() { Rational::zero() } else { Rational::one() })
    }
}

fn check_point(space: &Space, p: &Element) -> Result<()> {
    let ok = match space {
        Space::FiniteCoord { size } => matches!(p, Element::Index(i) if i < size),
        Space::GroupFinSupp { group } => group.contains(p),
        Space::PeriodicZ => p.as_z().is_some(),
        Space::PolyCone(_) => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("point {p:?} is not in {space}")))
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.try_add(rhs).expect("vector addition across spaces")
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.try_sub(rhs).expect("vector subtraction across spaces")
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.map_values(|x| -x)
    }
}

impl Mul<&Vector> for &Rational {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            Data::Sparse(m) => {
                let group = self.space.point_group();
                let entries: Vec<String> = m
                    .iter()
                    .map(|(k, x)| {
                        let key = match &group {
                            Some(g) => g.format_element(k),
                            None => match k {
                                Element::Index(i) => i.to_string(),
                                other => format!("{other:?}"),
                            },
                        };
                        format!("{key}: {x}")
                    })
                    .collect();
                write!(f, "{{{}}}", entries.join(", "))
            }
            Data::Periodic(p) => write!(f, "{p}"),
            Data::Dense(d) => write!(f, "({})", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
        }
    }
}

// Wire format: {"space": .., "entries": {"pt": "p/q"}} for sparse storage,
// {"space": .., "periodic": {..}} and {"space": .., "coords": [..]}.

#[derive(Serialize, Deserialize)]
struct PeriodicWire {
    #[serde(with = "crate::rational::serde_str_vec")]
    left: Vec<Rational>,
    core_start: i64,
    #[serde(with = "crate::rational::serde_str_vec")]
    core: Vec<Rational>,
    #[serde(with = "crate::rational::serde_str_vec")]
    right: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct VectorWire {
    space: Space,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    periodic: Option<PeriodicWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    #[serde(with = "opt_vec")]
    coords: Option<Vec<Rational>>,
}

mod opt_vec {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|v| v.iter().map(format_rational).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|v| v.iter().map(|x| parse_rational(x).map_err(D::Error::custom)).collect()).transpose()
    }
}

/// String key of a point in a coordinatewise space.
pub fn format_point(space: &Space, p: &Element) -> String {
    match (space.point_group(), p) {
        (Some(g), _) => g.format_element(p),
        (None, Element::Index(i)) => i.to_string(),
        (None, other) => format!("{other:?}"),
    }
}

pub fn parse_point(space: &Space, s: &str) -> Result<Element> {
    match space.point_group() {
        Some(g) => g.parse_element(s),
        None => s.trim().parse().map(Element::Index).map_err(|_| Error::Parse(format!("bad coordinate {s:?}"))),
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut wire = VectorWire { space: self.space.clone(), entries: None, periodic: None, coords: None };
        match &self.data {
            Data::Sparse(m) => {
                wire.entries = Some(m.iter().map(|(k, x)| (format_point(&self.space, k), format_rational(x))).collect())
            }
            Data::Periodic(p) => {
                wire.periodic = Some(PeriodicWire {
                    left: p.left().to_vec(),
                    core_start: p.core_start(),
                    core: p.core().to_vec(),
                    right: p.right().to_vec(),
                })
            }
            Data::Dense(d) => wire.coords = Some(d.clone()),
        }
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = VectorWire::deserialize(d)?;
        let space = wire.space;
        if let Some(p) = wire.periodic {
            if space != Space::PeriodicZ {
                return Err(D::Error::custom("periodic data outside ep(Z)"));
            }
            return Ok(Vector::periodic(PeriodicZ::new(p.left, p.core_start, p.core, p.right)));
        }
        if let Some(c) = wire.coords {
            return Vector::from_coords(&space, &c).map_err(D::Error::custom);
        }
        let entries = wire.entries.unwrap_or_default();
        let parsed = entries
            .iter()
            .map(|(k, x)| Ok((parse_point(&space, k)?, parse_rational(x)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Vector::from_entries(&space, parsed).map_err(D::Error::custom)
    }
}
