//! Classical conditional probability tables on a finite set and their lift
//! to conditional means on step functions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Element;
use crate::order::{Space, Vector};
use crate::pricing::{check_mean_pair, ConditionalMean};
use crate::rational::{format_rational, serde_str, Rational};
use crate::report::{Check, Report};

/// Largest ground set accepted.
pub const MAX_GROUND: usize = 12;

/// Triples `A ⊆ B ⊆ C` are enumerated in full up to this size; above it
/// the product rule is checked on singletons, which together with
/// additivity is equivalent.
const FULL_TRIPLES_UP_TO: usize = 8;

/// `P(A | B)` for nonempty subsets of `{0, .., ground - 1}`, stored as bit
/// masks. Entries with `A ⊄ B` may be omitted; they are read as
/// `P(A ∩ B | B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpTable {
    ground: usize,
    values: BTreeMap<(u16, u16), Rational>,
}

fn mask_string(m: u16) -> String {
    let items: Vec<String> = (0..16).filter(|i| m & (1 << i) != 0).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn submasks(c: u16) -> impl Iterator<Item = u16> {
    // Nonempty submasks of c, in decreasing order.
    let mut sub = c;
    let mut done = c == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        sub = (sub.wrapping_sub(1)) & c;
        done = sub == 0;
        Some(out)
    })
}

impl CpTable {
    pub fn new(ground: usize) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::InvalidInput(format!("ground set size must be in 1..={MAX_GROUND}, got {ground}")));
        }
        Ok(CpTable { ground, values: BTreeMap::new() })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn full_mask(&self) -> u16 {
        ((1u32 << self.ground) - 1) as u16
    }

    pub fn set(&mut self, a: u16, b: u16, p: Rational) -> Result<()> {
        let full = self.full_mask();
        if a == 0 || b == 0 || a & !full != 0 || b & !full != 0 {
            return Err(Error::InvalidInput(format!("bad subsets {} | {}", mask_string(a), mask_string(b))));
        }
        self.values.insert((a, b), p);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (u16, u16, &Rational)> {
        self.values.iter().map(|(&(a, b), p)| (a, b, p))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `P(A | B)`, resolving `A ⊄ B` through `A ∩ B`; `None` if missing.
    pub fn prob(&self, a: u16, b: u16) -> Option<Rational> {
        if let Some(p) = self.values.get(&(a, b)) {
            return Some(p.clone());
        }
        let ab = a & b;
        if ab == 0 {
            return Some(Rational::zero());
        }
        self.values.get(&(ab, b)).cloned()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    a: Vec<usize>,
    b: Vec<usize>,
    #[serde(with = "serde_str")]
    p: Rational,
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    ground: usize,
    entries: Vec<EntryWire>,
}

fn to_indices(m: u16) -> Vec<usize> {
    (0..16).filter(|i| m & (1 << i) != 0).collect()
}

fn from_indices(ix: &[usize], ground: usize) -> std::result::Result<u16, String> {
    let mut m = 0u16;
    for &i in ix {
        if i >= ground {
            return Err(format!("index {i} outside ground set of size {ground}"));
        }
        m |= 1 << i;
    }
    Ok(m)
}

impl Serialize for CpTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries =
            self.entries().map(|(a, b, p)| EntryWire { a: to_indices(a), b: to_indices(b), p: p.clone() }).collect();
        TableWire { ground: self.ground, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CpTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = TableWire::deserialize(d)?;
        let mut t = CpTable::new(w.ground).map_err(D::Error::custom)?;
        for e in w.entries {
            let a = from_indices(&e.a, w.ground).map_err(D::Error::custom)?;
            let b = from_indices(&e.b, w.ground).map_err(D::Error::custom)?;
            t.set(a, b, e.p).map_err(D::Error::custom)?;
        }
        Ok(t)
    }
}

/// Lexicographic table from a list of measures: `P(A | B) = m_k(A ∩ B) /
/// m_k(B)` for the first `k` with `m_k(B) > 0`.
pub fn from_measure_chain(ground: usize, measures: &[Vec<Rational>]) -> Result<CpTable> {
    let mut t = CpTable::new(ground)?;
    for m in measures {
        if m.len() != ground || m.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput("measures must be non-negative with one weight per point".into()));
        }
    }
    let mass = |m: &[Rational], set: u16| -> Rational {
        (0..ground).filter(|i| set & (1 << i) != 0).map(|i| m[i].clone()).sum()
    };
    for b in 1..=t.full_mask() {
        let m = measures
            .iter()
            .find(|m| mass(m, b).is_positive())
            .ok_or_else(|| Error::InvalidInput(format!("no measure charges {}", mask_string(b))))?;
        let mb = mass(m, b);
        for a in submasks(b) {
            t.set(a, b, mass(m, a) / &mb)?;
        }
    }
    Ok(t)
}

/// Checks that each `P(. | B)` is a probability on `B` and the product
/// rule `P(A | B) P(B | C) = P(A | C)` for `A ⊆ B ⊆ C`.
pub fn cp_validate(t: &CpTable) -> Report {
    let full = t.full_mask();
    let mut complete = Check::new("defined for all A ⊆ B");
    let mut range = Check::new("values in [0, 1]");
    let mut outside = Check::new("P(A | B) = P(A ∩ B | B)");
    let mut norm = Check::new("normalization P(B | B) = 1");
    let mut additive = Check::new("additivity on disjoint unions");
    let mut product = Check::new("product rule P(A | B) P(B | C) = P(A | C)");

    for (a, b, p) in t.entries() {
        range.record(!p.is_negative() && *p <= Rational::one(), || {
            format!("P({} | {}) = {}", mask_string(a), mask_string(b), format_rational(p))
        });
        if a & !b != 0 {
            let inner = if a & b == 0 { Some(Rational::zero()) } else { t.values.get(&(a & b, b)).cloned() };
            outside.record(inner.as_ref() == Some(p), || format!("A = {}, B = {}", mask_string(a), mask_string(b)));
        }
    }
    let mut missing = false;
    for b in 1..=full {
        for a in submasks(b) {
            if t.prob(a, b).is_none() {
                complete.fail(|| format!("P({} | {}) missing", mask_string(a), mask_string(b)));
                missing = true;
            }
        }
    }
    if !missing {
        complete.pass();
    }
    let mut report = Report::new("conditional probability table");
    if missing {
        for c in [complete, range, outside] {
            report.push(c);
        }
        return report;
    }
    let p = |a: u16, b: u16| t.prob(a, b).expect("complete");
    for b in 1..=full {
        norm.record(p(b, b).is_one(), || format!("B = {}, P(B | B) = {}", mask_string(b), format_rational(&p(b, b))));
        for a in submasks(b) {
            if a.count_ones() > 1 {
                let split: Rational = to_indices(a).into_iter().map(|i| p(1 << i, b)).sum();
                additive.record(split == p(a, b), || format!("A = {}, B = {}", mask_string(a), mask_string(b)));
            }
        }
    }
    let full_triples = t.ground <= FULL_TRIPLES_UP_TO;
    for c in 1..=full {
        for b in submasks(c) {
            let pbc = p(b, c);
            let lower: Vec<u16> =
                if full_triples { submasks(b).collect() } else { to_indices(b).into_iter().map(|i| 1 << i).collect() };
            for a in lower {
                product.record(p(a, b) * &pbc == p(a, c), || {
                    format!("(A, B, C) = ({}, {}, {})", mask_string(a), mask_string(b), mask_string(c))
                });
            }
        }
    }
    for c in [complete, range, outside, norm, additive, product] {
        report.push(c);
    }
    report
}

/// The conditional mean on step functions over a finite set lifted from a
/// table: `P'(u | A) = sum_t t P(u^-1(t) | A)` and
/// `P''(u | v) = P'(u | supp v) / P'(v | supp v)`.
#[derive(Clone, Debug)]
pub struct CpMean {
    table: Arc<CpTable>,
    space: Space,
}

impl CpMean {
    pub fn table(&self) -> &CpTable {
        &self.table
    }

    fn support_mask(&self, v: &Vector) -> u16 {
        v.support_points().iter().fold(0u16, |m, p| match p {
            Element::Index(i) => m | (1 << i),
            _ => m,
        })
    }

    /// `P'(u | A)` for a nonempty `A`.
    pub fn p_prime(&self, u: &Vector, a: u16) -> Result<Rational> {
        let mut level: BTreeMap<Rational, u16> = BTreeMap::new();
        for (p, x) in u.as_sparse().ok_or_else(|| Error::UnsupportedSpace(u.space().to_string()))? {
            if let Element::Index(i) = p {
                *level.entry(x.clone()).or_insert(0) |= 1 << i;
            }
        }
        let mut total = Rational::zero();
        for (t, set) in level {
            let p = self
                .table
                .prob(set, a)
                .ok_or_else(|| Error::InvalidTable(format!("P({} | {}) missing", mask_string(set), mask_string(a))))?;
            total += t * p;
        }
        Ok(total)
    }
}

impl ConditionalMean for CpMean {
    fn space(&self) -> &Space {
        &self.space
    }

    fn mean(&self, u: &Vector, v: &Vector) -> Result<Rational> {
        check_mean_pair(&self.space, u, v)?;
        let av = self.support_mask(v);
        Ok(self.p_prime(u, av)? / self.p_prime(v, av)?)
    }

    fn describe(&self) -> String {
        format!("step-function lift of a table on {} points", self.table.ground)
    }
}

pub fn cp_to_cm(t: &CpTable) -> Result<CpMean> {
    let report = cp_validate(t);
    if let Some(bad) = report.failures().next() {
        let witness = bad.witness.clone().unwrap_or_default();
        return Err(Error::InvalidTable(format!("{}: {witness}", bad.name)));
    }
    Ok(CpMean { table: Arc::new(t.clone()), space: Space::finite(t.ground)? })
}
