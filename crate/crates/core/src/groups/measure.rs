//! Finitely supported rational measures on groups and their convolution.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{Action, Element, GroupHandle};
use crate::order::{Space, Vector};
use crate::rational::{format_rational, parse_rational, Rational};

/// Default bound on the number of support points a convolution may produce.
pub const DEFAULT_SUPPORT_CAP: usize = 10_000_000;

/// A finitely supported measure with non-negative rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    group: GroupHandle,
    weights: BTreeMap<Element, Rational>,
}

impl Measure {
    pub fn new(group: GroupHandle, weights: impl IntoIterator<Item = (Element, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Element, Rational> = BTreeMap::new();
        for (g, w) in weights {
            if !group.contains(&g) {
                return Err(Error::InvalidInput(format!("{g:?} is not an element of {group}")));
            }
            if w.is_negative() {
                return Err(Error::InvalidInput(format!("negative weight {w} at {}", group.format_element(&g))));
            }
            *map.entry(g).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        Ok(Measure { group, weights: map })
    }

    pub fn dirac(group: GroupHandle, g: Element) -> Result<Self> {
        Measure::new(group, [(g, Rational::one())])
    }

    /// Uniform measure on the standard symmetric generating set.
    pub fn simple_random_walk(group: &GroupHandle) -> Result<Self> {
        let gens = group.standard_generators();
        if gens.is_empty() {
            return Measure::dirac(group.clone(), group.identity());
        }
        let w = Rational::new(BigInt::one(), BigInt::from(gens.len()));
        Measure::new(group.clone(), gens.into_iter().map(|g| (g, w.clone())))
    }

    /// `(delta_e + srw) / 2`.
    pub fn lazy_random_walk(group: &GroupHandle) -> Result<Self> {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let srw = Measure::simple_random_walk(group)?;
        Measure::new(
            group.clone(),
            srw.weights.into_iter().map(|(g, w)| (g, w * &half)).chain([(group.identity(), half.clone())]),
        )
    }

    /// Uniform measure on a finite group.
    pub fn uniform(group: &GroupHandle) -> Result<Self> {
        let els = group.elements().ok_or_else(|| Error::InvalidInput(format!("{group} is infinite")))?;
        let w = Rational::new(BigInt::one(), BigInt::from(els.len()));
        Measure::new(group.clone(), els.into_iter().map(|g| (g, w.clone())))
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn weights(&self) -> &BTreeMap<Element, Rational> {
        &self.weights
    }

    pub fn weight(&self, g: &Element) -> Rational {
        self.weights.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn total_mass(&self) -> Rational {
        self.weights.values().fold(Rational::zero(), |a, w| a + w)
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    pub fn is_symmetric(&self) -> bool {
        self.weights.iter().all(|(g, w)| self.weight(&self.group.inv(g)) == *w)
    }

    /// `(self * other)(x) = sum_s self(s) other(s^-1 x)`.
    pub fn convolve(&self, other: &Measure) -> Result<Measure> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(self.group.to_string(), other.group.to_string()));
        }
        let mut out: BTreeMap<Element, Rational> = BTreeMap::new();
        for (s, a) in &self.weights {
            for (t, b) in &other.weights {
                *out.entry(self.group.mul(s, t)).or_insert_with(Rational::zero) += a * b;
            }
        }
        Measure::new(self.group.clone(), out)
    }

    /// `n`-fold convolution power; `mu^0 = delta_e`.
    pub fn conv_power(&self, n: usize, cap: usize) -> Result<Measure> {
        self.require_probability()?;
        let walk = Walk::new(self)?;
        let mut state = walk.start();
        for _ in 0..n {
            state = walk.step(&state, cap)?;
        }
        Ok(state.to_measure(&self.group))
    }

    /// The measure as a finitely supported function on its group.
    pub fn to_vector(&self) -> Vector {
        Vector::from_entries(&Space::GroupFinSupp { group: self.group.clone() }, self.weights.clone())
            .expect("points belong to the group")
    }

    pub(crate) fn require_probability(&self) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("measure has total mass {}, not 1", self.total_mass())))
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, w)) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", self.group.format_element(g), format_rational(w))?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureWire {
    group: GroupHandle,
    weights: BTreeMap<String, String>,
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureWire {
            group: self.group.clone(),
            weights: self.weights.iter().map(|(g, w)| (self.group.format_element(g), format_rational(w))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = MeasureWire::deserialize(d)?;
        let mut entries = Vec::new();
        for (g, w) in &wire.weights {
            let g = wire.group.parse_element(g).map_err(D::Error::custom)?;
            let w = parse_rational(w).map_err(D::Error::custom)?;
            entries.push((g, w));
        }
        Measure::new(wire.group, entries).map_err(D::Error::custom)
    }
}

/// `(mu * v)(x) = sum_g mu(g) v(g^-1 x)` for the natural action on `v`'s space.
pub fn mu_apply(mu: &Measure, v: &Vector) -> Result<Vector> {
    let action = Action::natural(&mu.group, v.space())?;
    action.average(&mu.weights, v)
}

/// Unsigned accumulator for the scaled-integer walk: `u128` on the fast path,
/// `BigUint` once that overflows.
pub(crate) trait Count: Clone + Zero + Send + Sync {
    fn from_big(x: &BigUint) -> Option<Self>;
    fn to_big(&self) -> BigUint;
    /// `self += a * b`; `None` on overflow.
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()>;
}

impl Count for u128 {
    fn from_big(x: &BigUint) -> Option<Self> {
        x.to_u128()
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self = self.checked_add(a.checked_mul(*b)?)?;
        Some(())
    }
}

impl Count for BigUint {
    fn from_big(x: &BigUint) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn add_mul(&mut self, a: &Self, b: &Self) -> Option<()> {
        *self += a * b;
        Some(())
    }
}

/// A probability measure written as integer weights over a common
/// denominator, so that convolution powers are integer path counts.
pub(crate) struct Walk {
    pub(crate) group: GroupHandle,
    pub(crate) denom: BigUint,
    pub(crate) steps: Vec<(Element, BigUint)>,
}

/// `mu^{*n}` as `counts / denom^n`.
#[derive(Clone, Debug)]
pub(crate) struct WalkState {
    pub(crate) n: usize,
    pub(crate) denom_pow: BigUint,
    pub(crate) counts: HashMap<Element, BigUint>,
}

impl WalkState {
    pub(crate) fn to_measure(&self, group: &GroupHandle) -> Measure {
        let d = BigInt::from(self.denom_pow.clone());
        let weights: BTreeMap<Element, Rational> =
            self.counts.iter().map(|(g, c)| (g.clone(), Rational::new(BigInt::from(c.clone()), d.clone()))).collect();
        Measure { group: group.clone(), weights }
    }

    pub(crate) fn max_count(&self) -> BigUint {
        self.counts.values().max().cloned().unwrap_or_else(BigUint::zero)
    }
}

impl Walk {
    pub(crate) fn new(mu: &Measure) -> Result<Walk> {
        mu.require_probability()?;
        let denom = mu.weights.values().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let steps = mu
            .weights
            .iter()
            .map(|(g, w)| {
                let c = w.numer() * (&denom / w.denom());
                (g.clone(), c.to_biguint().expect("weights are non-negative"))
            })
            .collect();
        Ok(Walk { group: mu.group.clone(), denom: denom.to_biguint().expect("positive denominator"), steps })
    }

    pub(crate) fn start(&self) -> WalkState {
        let mut counts = HashMap::new();
        counts.insert(self.group.identity(), BigUint::one());
        WalkState { n: 0, denom_pow: BigUint::one(), counts }
    }

    /// `mu^{*(n+1)} = mu^{*n} * mu`.
    pub(crate) fn step(&self, state: &WalkState, cap: usize) -> Result<WalkState> {
        let counts = match self.step_with::<u128>(state, cap)? {
            Some(c) => c,
            None => self.step_with::<BigUint>(state, cap)?.expect("BigUint never overflows"),
        };
        Ok(WalkState { n: state.n + 1, denom_pow: &state.denom_pow * &self.denom, counts })
    }

    fn step_with<T: Count>(&self, state: &WalkState, cap: usize) -> Result<Option<HashMap<Element, BigUint>>> {
        let Some(steps) = self.steps.iter().map(|(g, c)| T::from_big(c).map(|c| (g, c))).collect::<Option<Vec<_>>>()
        else {
            return Ok(None);
        };
        let mut out: HashMap<Element, T> = HashMap::with_capacity(state.counts.len() * 2);
        for (x, c) in &state.counts {
            let Some(c) = T::from_big(c) else { return Ok(None) };
            for (s, a) in &steps {
                let slot = out.entry(self.group.mul(x, s)).or_insert_with(T::zero);
                if slot.add_mul(&c, a).is_none() {
                    return Ok(None);
                }
            }
            if out.len() > cap {
                return Err(Error::SupportCapExceeded { cap, size: out.len() });
            }
        }
        Ok(Some(out.into_iter().map(|(g, c)| (g, c.to_big())).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn srw(g: &GroupHandle) -> Measure {
        Measure::simple_random_walk(g).unwrap()
    }

    #[test]
    fn convolution_with_dirac_identity() {
        let g = GroupHandle::Free(2);
        let mu = srw(&g);
        let e = Measure::dirac(g.clone(), g.identity()).unwrap();
        assert_eq!(e.convolve(&mu).unwrap(), mu);
        assert_eq!(mu.convolve(&e).unwrap(), mu);
    }

    #[test]
    fn small_return_probabilities() {
        let z = GroupHandle::integers();
        let mu = srw(&z);
        assert_eq!(mu.convolve(&mu).unwrap().weight(&Element::z(0)), rat(1, 2));
        assert_eq!(mu.conv_power(4, DEFAULT_SUPPORT_CAP).unwrap().weight(&Element::z(0)), rat(3, 8));
        let f2 = GroupHandle::Free(2);
        let nu = srw(&f2);
        assert_eq!(nu.convolve(&nu).unwrap().weight(&f2.identity()), rat(1, 4));
        let c2 = GroupHandle::Cyclic(2);
        assert_eq!(srw(&c2).conv_power(2, DEFAULT_SUPPORT_CAP).unwrap().weight(&Element::Index(0)), int(1));
        assert_eq!(mu.conv_power(0, 10).unwrap(), Measure::dirac(z.clone(), z.identity()).unwrap());
    }

    #[test]
    fn fast_power_matches_naive_convolution() {
        let g = GroupHandle::Lamplighter;
        let mu = Measure::lazy_random_walk(&g).unwrap();
        let mut naive = Measure::dirac(g.clone(), g.identity()).unwrap();
        for n in 0..5 {
            assert_eq!(mu.conv_power(n, DEFAULT_SUPPORT_CAP).unwrap(), naive);
            naive = naive.convolve(&mu).unwrap();
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = GroupHandle::Free(2);
        let err = srw(&g).conv_power(6, 100).unwrap_err();
        assert!(matches!(err, Error::SupportCapExceeded { cap: 100, .. }));
    }

    #[test]
    fn mu_apply_examples() {
        let z = GroupHandle::integers();
        let mu = srw(&z);
        let d0 = Vector::delta(&Space::PeriodicZ, Element::z(0)).unwrap();
        let expected =
            Vector::from_entries(&Space::PeriodicZ, [(Element::z(-1), rat(1, 2)), (Element::z(1), rat(1, 2))]).unwrap();
        assert_eq!(mu_apply(&mu, &d0).unwrap(), expected);
        let ones = Vector::periodic(crate::order::PeriodicZ::constant(int(1)));
        assert_eq!(mu_apply(&mu, &ones).unwrap(), ones);
    }

    #[test]
    fn serde_round_trip() {
        let mu = Measure::lazy_random_walk(&GroupHandle::Free(2)).unwrap();
        let s = serde_json::to_string(&mu).unwrap();
        assert_eq!(serde_json::from_str::<Measure>(&s).unwrap(), mu);
    }
}
