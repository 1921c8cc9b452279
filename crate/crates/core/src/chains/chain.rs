//! Chains of partial functionals, fullness, and the pricing they define.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::partial::{half_lines, interval, renyi_prec, Domain, PartialFunctional, PartialFunctionalWire};
use crate::error::{ChainDefect, Error, Result};
use crate::groups::Element;
use crate::order::{functional_eval, is_positive, FunctionalSpec, Space, Vector};
use crate::pricing::VPValue;
use crate::rational::Rational;

/// Partial functionals totally ordered by the Renyi order, stored
/// increasingly: the last element is the greatest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    space: Space,
    elements: Vec<PartialFunctional>,
}

/// Checks that every pair is comparable in exactly one direction and sorts.
pub fn validate_chain(elements: Vec<PartialFunctional>) -> Result<Chain> {
    let Some(first) = elements.first() else {
        return Err(Error::InvalidInput("a chain needs at least one element".into()));
    };
    let space = first.space().clone();
    let n = elements.len();
    let mut below = vec![0usize; n];
    for i in 0..n {
        elements[i].space().check_same(&space)?;
        for j in i + 1..n {
            let ij = renyi_prec(&elements[i], &elements[j])?;
            let ji = renyi_prec(&elements[j], &elements[i])?;
            let reason = match (ij, ji) {
                (true, false) => {
                    below[j] += 1;
                    continue;
                }
                (false, true) => {
                    below[i] += 1;
                    continue;
                }
                (true, true) => ChainDefect::BothDirections,
                (false, false) => ChainDefect::Incomparable,
            };
            return Err(Error::NotAChain { first: elements[i].to_string(), second: elements[j].to_string(), reason });
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| below[i]);
    // In a total order the k-th element has exactly k predecessors; anything
    // else means a cycle among pairwise comparisons.
    if order.iter().enumerate().any(|(k, &i)| below[i] != k) {
        return Err(Error::NotAChain {
            first: elements[order[0]].to_string(),
            second: elements[order[n - 1]].to_string(),
            reason: ChainDefect::BothDirections,
        });
    }
    let mut slots: Vec<Option<PartialFunctional>> = elements.into_iter().map(Some).collect();
    let elements = order.iter().map(|&i| slots[i].take().expect("permutation")).collect();
    Ok(Chain { space, elements })
}

impl Chain {
    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Elements in increasing Renyi order.
    pub fn elements(&self) -> &[PartialFunctional] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the element handling `w`: the greatest one with `w` in its
    /// domain and a non-zero value there.
    pub fn handler(&self, w: &Vector) -> Result<Option<usize>> {
        for (i, pf) in self.elements.iter().enumerate().rev() {
            if pf.handles(w)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Adds a new element and re-validates.
    pub fn with(&self, pf: PartialFunctional) -> Result<Chain> {
        let mut els = self.elements.clone();
        els.push(pf);
        validate_chain(els)
    }
}

/// The vector pricing defined by a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPricing {
    chain: Chain,
}

impl ChainPricing {
    pub fn new(chain: Chain) -> Self {
        ChainPricing { chain }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn space(&self) -> &Space {
        &self.chain.space
    }
}

/// `r(u, v) = J(u) / J(v)` for the element `(U, J)` handling `u + v`.
pub fn eval_chain_pricing(cp: &ChainPricing, u: &Vector, v: &Vector) -> Result<VPValue> {
    let space = cp.space();
    space.check_same(u.space())?;
    space.check_same(v.space())?;
    if !is_positive(u) || !is_positive(v) {
        return Err(Error::InvalidInput("vector pricings take positive arguments".into()));
    }
    if v.is_zero() {
        return Ok(if u.is_zero() { VPValue::one() } else { VPValue::Infinite });
    }
    let w = u.try_add(v)?;
    let Some(i) = cp.chain.handler(&w)? else {
        return Err(Error::NotFullAt(w.to_string()));
    };
    let pf = &cp.chain.elements[i];
    VPValue::ratio(&pf.eval(u)?, &pf.eval(v)?)
}

/// Result of a fullness check; `witness` is a positive non-zero vector no
/// element handles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fullness {
    pub full: bool,
    pub witness: Option<Vector>,
}

impl Fullness {
    fn full() -> Self {
        Fullness { full: true, witness: None }
    }

    fn missing(v: Vector) -> Self {
        Fullness { full: false, witness: Some(v) }
    }
}

/// Decides whether every non-zero positive vector is handled by some element.
///
/// Pointwise spaces with finitely many points are exact: for such orders an
/// element `(U, J)` handles `v` iff `supp v` lies in the support `D` of `U`
/// and meets the set `P` of points where `J` is positive, so only supports
/// matter. On `ep(Z)` the four tail classes are checked.
pub fn check_fullness(chain: &Chain) -> Result<Fullness> {
    match chain.space() {
        Space::FiniteCoord { size } => {
            let points: Vec<Element> = (0..*size).map(Element::Index).collect();
            check_fullness_within(chain, &points)
        }
        Space::GroupFinSupp { group } => match group.elements() {
            Some(points) => check_fullness_within(chain, &points),
            None => fullness_infinite_group(chain),
        },
        Space::PeriodicZ => fullness_periodic(chain),
        Space::PolyCone(_) => Err(Error::UnsupportedSpace("fullness on cone spaces".into())),
    }
}

/// Fullness for vectors supported in the finite set `points`.
pub fn check_fullness_within(chain: &Chain, points: &[Element]) -> Result<Fullness> {
    let space = chain.space();
    if !space.is_coordinatewise() || matches!(space, Space::PeriodicZ) {
        return Err(Error::UnsupportedSpace(format!("support-based fullness on {space}")));
    }
    let universe: BTreeSet<Element> = points.iter().cloned().collect();
    let mut sets = Vec::new();
    for pf in chain.elements() {
        let d: BTreeSet<Element> = match pf.domain() {
            Domain::Whole => universe.clone(),
            Domain::Ideal(gens) => gens.iter().flat_map(Vector::support_points).collect(),
            Domain::Tails { .. } => unreachable!("tails live on ep(Z)"),
        };
        let mut p = BTreeSet::new();
        for x in &universe {
            if !functional_eval(pf.functional(), &Vector::delta(space, x.clone())?)?.is_zero() {
                p.insert(x.clone());
            }
        }
        sets.push((d, p));
    }
    let bad = |s: &BTreeSet<Element>| !s.is_empty() && sets.iter().all(|(d, p)| !s.is_subset(d) || s.is_disjoint(p));
    // An unhandled S determines T = {k : S in D_k}; then the largest
    // candidate (meet of D_k over T) minus (union of P_k over T) is also
    // unhandled. Search over T with pruning on empty candidates.
    fn search(
        k: usize,
        cand: &BTreeSet<Element>,
        sets: &[(BTreeSet<Element>, BTreeSet<Element>)],
        bad: &dyn Fn(&BTreeSet<Element>) -> bool,
    ) -> Option<BTreeSet<Element>> {
        if cand.is_empty() {
            return None;
        }
        if k == sets.len() {
            return bad(cand).then(|| cand.clone());
        }
        let (d, p) = &sets[k];
        let inside: BTreeSet<Element> = cand.intersection(d).filter(|x| !p.contains(x)).cloned().collect();
        search(k + 1, &inside, sets, bad).or_else(
            || {
                if cand.is_subset(d) {
                    None
                } else {
                    search(k + 1, cand, sets, bad)
                }
            },
        )
    }
    let Some(mut s) = search(0, &universe, &sets, &bad) else {
        return Ok(Fullness::full());
    };
    for x in s.clone() {
        let mut smaller = s.clone();
        smaller.remove(&x);
        if bad(&smaller) {
            s = smaller;
        }
    }
    Ok(Fullness::missing(Vector::indicator(space, &s.into_iter().collect::<Vec<_>>())?))
}

fn fullness_infinite_group(chain: &Chain) -> Result<Fullness> {
    let counts_everything = chain
        .elements()
        .iter()
        .any(|pf| matches!(pf.domain(), Domain::Whole) && matches!(pf.functional(), FunctionalSpec::Counting));
    if counts_everything {
        return Ok(Fullness::full());
    }
    if chain.elements().iter().all(|pf| matches!(pf.domain(), Domain::Ideal(_))) {
        let Space::GroupFinSupp { group } = chain.space() else { unreachable!() };
        let covered: BTreeSet<Element> = chain
            .elements()
            .iter()
            .flat_map(|pf| match pf.domain() {
                Domain::Ideal(g) => g.iter().flat_map(Vector::support_points).collect::<Vec<_>>(),
                _ => Vec::new(),
            })
            .collect();
        let mut radius = 0;
        loop {
            if let Some(x) = group.ball(radius).into_iter().find(|x| !covered.contains(x)) {
                return Ok(Fullness::missing(Vector::delta(chain.space(), x)?));
            }
            radius += 1;
        }
    }
    Err(Error::UnsupportedSpace("fullness on an infinite group beyond ideal and counting domains".into()))
}

fn fullness_periodic(chain: &Chain) -> Result<Fullness> {
    let mut reach: i64 = 0;
    for pf in chain.elements() {
        match (pf.domain(), pf.functional()) {
            (Domain::Tails { .. }, FunctionalSpec::Counting | FunctionalSpec::DensityZ) => {}
            (Domain::Tails { .. }, FunctionalSpec::Weighted(w)) => {
                for p in w.keys() {
                    reach = reach.max(p.as_z().map_or(0, i64::abs));
                }
            }
            _ => return Err(Error::UnsupportedSpace("fullness on ep(Z) beyond tail-class domains".into())),
        }
    }
    // Within a tail class only counting (finite class) or density (classes
    // with a non-zero periodic part) is non-zero on every member; weighted
    // functionals miss vectors living beyond their finitely many points.
    let far = reach + 1;
    let (right, left) = half_lines();
    for (l, r) in [(false, false), (false, true), (true, false), (true, true)] {
        let covered = chain.elements().iter().any(|pf| {
            let Domain::Tails { left, right } = pf.domain() else { return false };
            (*left || !l)
                && (*right || !r)
                && match pf.functional() {
                    FunctionalSpec::Counting => !l && !r,
                    FunctionalSpec::DensityZ => l || r,
                    _ => false,
                }
        });
        if !covered {
            let far_right = Vector::periodic(right.as_periodic().expect("periodic").shift(far));
            let far_left = Vector::periodic(left.as_periodic().expect("periodic").shift(-far));
            let witness = match (l, r) {
                (false, false) => Vector::delta(&Space::PeriodicZ, Element::z(far))?,
                (false, true) => far_right,
                (true, false) => far_left,
                (true, true) => &far_right + &far_left,
            };
            // Re-verify the witness against the chain.
            if chain.handler(&witness)?.is_none() {
                return Ok(Fullness::missing(witness));
            }
        }
    }
    Ok(Fullness::full())
}

/// Parameters of the built-in chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinChain {
    /// Ordered partition of `{0, .., size-1}`; block 1 is the greatest
    /// element. Optional positive per-coordinate weights (default 1).
    Lexicographic { size: usize, blocks: Vec<Vec<usize>>, weights: Option<Vec<Rational>> },
    /// Finitely supported vectors on `Z` within `[-W, W]`, priced by their
    /// rightmost point.
    RightmostZ { window: i64 },
    /// Counting on finitely supported vectors, below density on `ep(Z)`.
    DensityZ,
}

pub fn build_builtin_chain(kind: &BuiltinChain) -> Result<Chain> {
    match kind {
        BuiltinChain::Lexicographic { size, blocks, weights } => lexicographic(*size, blocks, weights.as_deref()),
        BuiltinChain::RightmostZ { window } => rightmost_z(*window),
        BuiltinChain::DensityZ => density_z(),
    }
}

fn lexicographic(size: usize, blocks: &[Vec<usize>], weights: Option<&[Rational]>) -> Result<Chain> {
    let space = Space::finite(size)?;
    let mut seen = vec![false; size];
    for b in blocks {
        if b.is_empty() {
            return Err(Error::InvalidInput("empty partition block".into()));
        }
        for &x in b {
            if x >= size || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidInput(format!("coordinate {x} is out of range or repeated")));
            }
        }
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidInput(format!("partition does not cover coordinate {x}")));
    }
    if let Some(w) = weights {
        if w.len() != size || w.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidInput("weights must be positive, one per coordinate".into()));
        }
    }
    let weight = |x: usize| weights.map_or_else(Rational::one, |w| w[x].clone());
    let mut elements = Vec::new();
    for (k, block) in blocks.iter().enumerate() {
        let tail: Vec<Element> = blocks[k..].iter().flatten().map(|&x| Element::Index(x)).collect();
        let j = FunctionalSpec::Weighted(block.iter().map(|&x| (Element::Index(x), weight(x))).collect());
        elements.push(PartialFunctional::new(
            &space,
            Domain::Ideal(vec![Vector::indicator(&space, &tail)?]),
            j,
            format!("block {}", k + 1),
        )?);
    }
    validate_chain(elements)
}

fn rightmost_z(window: i64) -> Result<Chain> {
    if window <= 0 {
        return Err(Error::InvalidInput(format!("window must be positive, got {window}")));
    }
    let space = Space::GroupFinSupp { group: crate::groups::GroupHandle::integers() };
    let elements = (-window..=window)
        .map(|n| {
            PartialFunctional::new(
                &space,
                Domain::Ideal(vec![interval(&space, -window, n)?]),
                FunctionalSpec::uniform([Element::z(n)]),
                format!("point {n}"),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    validate_chain(elements)
}

fn density_z() -> Result<Chain> {
    validate_chain(vec![
        PartialFunctional::new(&Space::PeriodicZ, Domain::finitely_supported(), FunctionalSpec::Counting, "counting")?,
        PartialFunctional::new(&Space::PeriodicZ, Domain::Whole, FunctionalSpec::DensityZ, "density")?,
    ])
}

/// JSON form of a chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainWire {
    pub space: Space,
    pub elements: Vec<PartialFunctionalWire>,
}

impl ChainWire {
    pub fn from_chain(chain: &Chain) -> Self {
        ChainWire {
            space: chain.space.clone(),
            elements: chain.elements.iter().map(PartialFunctionalWire::from_pf).collect(),
        }
    }

    /// Parses and validates.
    pub fn into_chain(self) -> Result<Chain> {
        let space = self.space;
        let els = self.elements.into_iter().map(|w| w.into_pf(&space)).collect::<Result<Vec<_>>>()?;
        validate_chain(els)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::PeriodicZ;
    use crate::rational::{int, rat};

    fn lex3() -> Chain {
        build_builtin_chain(&BuiltinChain::Lexicographic { size: 3, blocks: vec![vec![0], vec![1, 2]], weights: None })
            .unwrap()
    }

    #[test]
    fn lexicographic_values() {
        let c = lex3();
        assert_eq!(c.len(), 2);
        assert_eq!(c.elements()[1].label(), "block 1");
        let cp = ChainPricing::new(c);
        let x = cp.space().clone();
        let d = |i| Vector::delta(&x, Element::Index(i)).unwrap();
        assert_eq!(eval_chain_pricing(&cp, &d(1), &d(0)).unwrap(), VPValue::zero());
        assert_eq!(eval_chain_pricing(&cp, &d(0), &d(1)).unwrap(), VPValue::Infinite);
        assert_eq!(eval_chain_pricing(&cp, &d(2), &(&d(1) + &d(2))).unwrap(), VPValue::from(rat(1, 2)));
        assert!(check_fullness(cp.chain()).unwrap().full);
    }

    #[test]
    fn chain_defects() {
        let x = Space::finite(3).unwrap();
        let d = |i| Vector::delta(&x, Element::Index(i)).unwrap();
        let p = |i| {
            PartialFunctional::new(&x, Domain::Ideal(vec![d(i)]), FunctionalSpec::uniform([Element::Index(i)]), "")
                .unwrap()
        };
        let err = validate_chain(vec![p(1), p(2)]).unwrap_err();
        assert!(matches!(err, Error::NotAChain { reason: ChainDefect::BothDirections, .. }));
        assert_eq!(validate_chain(vec![p(1)]).unwrap().len(), 1);
    }

    #[test]
    fn missing_coordinate_is_witnessed() {
        let c = build_builtin_chain(&BuiltinChain::Lexicographic {
            size: 3,
            blocks: vec![vec![0], vec![1, 2]],
            weights: None,
        })
        .unwrap();
        let x = Space::finite(4).unwrap();
        let els: Vec<PartialFunctional> = c
            .elements()
            .iter()
            .map(|pf| {
                let Domain::Ideal(g) = pf.domain() else { unreachable!() };
                let g = Vector::indicator(&x, &g[0].support_points()).unwrap();
                PartialFunctional::new(&x, Domain::Ideal(vec![g]), pf.functional().clone(), pf.label()).unwrap()
            })
            .collect();
        let f = check_fullness(&validate_chain(els).unwrap()).unwrap();
        assert!(!f.full);
        assert_eq!(f.witness.unwrap().support_points(), vec![Element::Index(3)]);
    }

    #[test]
    fn density_chain_values() {
        let c = build_builtin_chain(&BuiltinChain::DensityZ).unwrap();
        assert!(check_fullness(&c).unwrap().full);
        let cp = ChainPricing::new(c);
        let d = |n| Vector::delta(&Space::PeriodicZ, Element::z(n)).unwrap();
        let ones = Vector::periodic(PeriodicZ::constant(int(1)));
        assert_eq!(eval_chain_pricing(&cp, &d(0), &ones).unwrap(), VPValue::zero());
        assert_eq!(eval_chain_pricing(&cp, &d(0), &(&d(0) + &d(5))).unwrap(), VPValue::from(rat(1, 2)));
        assert_eq!(eval_chain_pricing(&cp, &ones, &d(0)).unwrap(), VPValue::Infinite);
        let without_counting = validate_chain(vec![cp.chain().elements()[1].clone()]).unwrap();
        let f = check_fullness(&without_counting).unwrap();
        assert!(!f.full && f.witness.unwrap().is_finitely_supported());
    }

    #[test]
    fn rightmost_values_and_window() {
        let c = build_builtin_chain(&BuiltinChain::RightmostZ { window: 10 }).unwrap();
        let cp = ChainPricing::new(c);
        let s = cp.space().clone();
        let ind = |pts: &[i64]| Vector::indicator(&s, &pts.iter().map(|&n| Element::z(n)).collect::<Vec<_>>()).unwrap();
        assert_eq!(eval_chain_pricing(&cp, &ind(&[0]), &ind(&[0, 1])).unwrap(), VPValue::zero());
        assert_eq!(eval_chain_pricing(&cp, &ind(&[1]), &ind(&[0, 1])).unwrap(), VPValue::one());
        assert!(matches!(eval_chain_pricing(&cp, &ind(&[11]), &ind(&[0])), Err(Error::NotFullAt(_))));
        let window: Vec<Element> = (-10..=10).map(Element::z).collect();
        assert!(check_fullness_within(cp.chain(), &window).unwrap().full);
        assert!(!check_fullness(cp.chain()).unwrap().full);
        assert!(build_builtin_chain(&BuiltinChain::RightmostZ { window: 0 }).is_err());
    }

    #[test]
    fn chain_wire_round_trip() {
        for c in [lex3(), build_builtin_chain(&BuiltinChain::DensityZ).unwrap()] {
            let s = serde_json::to_string(&ChainWire::from_chain(&c)).unwrap();
            let back = serde_json::from_str::<ChainWire>(&s).unwrap().into_chain().unwrap();
            assert_eq!(back, c);
        }
    }
}
