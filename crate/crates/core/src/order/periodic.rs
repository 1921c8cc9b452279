//! Eventually periodic functions on `Z`.
//!
//! A vector is stored as a finite core on `[core_start, core_start + len)`
//! plus a left and a right periodic pattern. Patterns are anchored at `0`:
//! for `n` left of the core the value is `left[n mod |left|]`, and likewise on
//! the right. The representation is canonical: patterns are reduced to their
//! minimal period, core ends matching a pattern are absorbed, and an empty
//! core sits at the leftmost point where the right pattern takes over.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{lcm_usize, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicZ {
    left: Vec<Rational>,
    core_start: i64,
    core: Vec<Rational>,
    right: Vec<Rational>,
}

fn pattern_at(pattern: &[Rational], n: i64) -> &Rational {
    &pattern[n.rem_euclid(pattern.len() as i64) as usize]
}

fn minimal_period(pattern: &[Rational]) -> Vec<Rational> {
    let len = pattern.len();
    for d in 1..=len {
        if len.is_multiple_of(d) && (0..len).all(|i| pattern[i] == pattern[i % d]) {
            return pattern[..d].to_vec();
        }
    }
    pattern.to_vec()
}

fn same_pattern(a: &[Rational], b: &[Rational]) -> bool {
    let l = lcm_usize(a.len(), b.len()) as i64;
    (0..l).all(|n| pattern_at(a, n) == pattern_at(b, n))
}

impl PeriodicZ {
    /// Builds a vector from its parts. Empty patterns are treated as `[0]`.
    pub fn new(left: Vec<Rational>, core_start: i64, core: Vec<Rational>, right: Vec<Rational>) -> Self {
        let fix = |p: Vec<Rational>| if p.is_empty() { vec![Rational::zero()] } else { p };
        let mut v = PeriodicZ { left: fix(left), core_start, core, right: fix(right) };
        v.canonicalize();
        v
    }

    /// Finitely supported vector with the given values from `start` on.
    pub fn finite(start: i64, values: Vec<Rational>) -> Self {
        Self::new(vec![], start, values, vec![])
    }

    /// The same pattern repeated on all of `Z` (anchored at 0).
    pub fn periodic(pattern: Vec<Rational>) -> Self {
        Self::new(pattern.clone(), 0, vec![], pattern)
    }

    pub fn constant(c: Rational) -> Self {
        Self::periodic(vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn delta(n: i64, c: Rational) -> Self {
        Self::finite(n, vec![c])
    }

    fn canonicalize(&mut self) {
        self.left = minimal_period(&self.left);
        self.right = minimal_period(&self.right);
        while let Some(last) = self.core.last() {
            let pos = self.core_start + self.core.len() as i64 - 1;
            if last == pattern_at(&self.right, pos) {
                self.core.pop();
            } else {
                break;
            }
        }
        let drop = self
            .core
            .iter()
            .enumerate()
            .take_while(|(i, x)| *x == pattern_at(&self.left, self.core_start + *i as i64))
            .count();
        self.core.drain(..drop);
        self.core_start += drop as i64;
        if self.core.is_empty() {
            if same_pattern(&self.left, &self.right) {
                self.right = self.left.clone();
                self.core_start = 0;
            } else {
                // Slide the boundary left while both patterns agree; this
                // terminates within one common period since they differ.
                while pattern_at(&self.left, self.core_start - 1) == pattern_at(&self.right, self.core_start - 1) {
                    self.core_start -= 1;
                }
            }
        }
    }

    pub fn left(&self) -> &[Rational] {
        &self.left
    }

    pub fn right(&self) -> &[Rational] {
        &self.right
    }

    pub fn core(&self) -> &[Rational] {
        &self.core
    }

    pub fn core_start(&self) -> i64 {
        self.core_start
    }

    pub fn core_end(&self) -> i64 {
        self.core_start + self.core.len() as i64
    }

    pub fn value_at(&self, n: i64) -> &Rational {
        if n < self.core_start {
            pattern_at(&self.left, n)
        } else if n < self.core_end() {
            &self.core[(n - self.core_start) as usize]
        } else {
            pattern_at(&self.right, n)
        }
    }

    pub fn left_is_zero(&self) -> bool {
        self.left.iter().all(Zero::is_zero)
    }

    pub fn right_is_zero(&self) -> bool {
        self.right.iter().all(Zero::is_zero)
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.left_is_zero() && self.right_is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.is_finitely_supported() && self.core.is_empty()
    }

    /// All distinct positions that determine the vector: the core plus one
    /// full period of each pattern on either side.
    pub fn window(&self) -> std::ops::Range<i64> {
        let l = self.left.len() as i64;
        let r = self.right.len() as i64;
        (self.core_start - l)..(self.core_end() + r)
    }

    /// Values taken anywhere on `Z`, with repetitions.
    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.left.iter().chain(self.core.iter()).chain(self.right.iter())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let ll = lcm_usize(self.left.len(), other.left.len());
        let rl = lcm_usize(self.right.len(), other.right.len());
        let left = (0..ll as i64).map(|n| f(pattern_at(&self.left, n), pattern_at(&other.left, n))).collect();
        let right = (0..rl as i64).map(|n| f(pattern_at(&self.right, n), pattern_at(&other.right, n))).collect();
        let start = self.core_start.min(other.core_start);
        let end = self.core_end().max(other.core_end());
        let core = (start..end).map(|n| f(self.value_at(n), other.value_at(n))).collect();
        Self::new(left, start, core, right)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self::new(
            self.left.iter().map(&f).collect(),
            self.core_start,
            self.core.iter().map(&f).collect(),
            self.right.iter().map(&f).collect(),
        )
    }

    /// `(shift_k v)(n) = v(n - k)`.
    pub fn shift(&self, k: i64) -> Self {
        let rot =
            |p: &[Rational]| -> Vec<Rational> { (0..p.len() as i64).map(|i| pattern_at(p, i - k).clone()).collect() };
        Self::new(rot(&self.left), self.core_start + k, self.core.clone(), rot(&self.right))
    }

    pub fn is_nonneg(&self) -> bool {
        self.values().all(|x| !x.is_negative())
    }

    /// Two-sided mean: the average of the means of both periodic parts.
    pub fn density(&self) -> Rational {
        let mean = |p: &[Rational]| {
            p.iter().fold(Rational::zero(), |a, b| a + b) / Rational::from_integer((p.len() as i64).into())
        };
        (mean(&self.left) + mean(&self.right)) / Rational::from_integer(2.into())
    }

    /// Sum of all entries, for finitely supported vectors.
    pub fn sum(&self) -> Option<Rational> {
        self.is_finitely_supported().then(|| self.core.iter().fold(Rational::zero(), |a, b| a + b))
    }

    /// Indicator function of the support.
    pub fn support_indicator(&self) -> Self {
        self.map(|x| if x.is_zero() { Rational::zero() } else { Rational::from_integer(1.into()) })
    }
}

impl fmt::Display for PeriodicZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |p: &[Rational]| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}|{}|{}", list(&self.left), self.core_start, list(&self.core), list(&self.right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn canonical_forms_coincide() {
        let a = PeriodicZ::new(v(&[1, 0, 1, 0]), 3, v(&[0, 1]), v(&[1, 0]));
        let b = PeriodicZ::periodic(v(&[1, 0]));
        assert_eq!(a, b);
        assert!(a.core().is_empty());

        let step = PeriodicZ::new(v(&[0]), 5, vec![], v(&[1]));
        assert_eq!(step.value_at(4), &int(0));
        assert_eq!(step.value_at(5), &int(1));
        let step2 = PeriodicZ::new(v(&[0]), 3, v(&[0, 0]), v(&[1]));
        assert_eq!(step, step2);
    }

    #[test]
    fn values_and_window() {
        let x = PeriodicZ::new(v(&[2]), -1, v(&[5, 7]), v(&[0, 3]));
        assert_eq!(x.value_at(-10), &int(2));
        assert_eq!(x.value_at(0), &int(7));
        assert_eq!(x.value_at(1), &int(3));
        assert_eq!(x.value_at(2), &int(0));
        assert_eq!(x.density(), (int(2) + rat(3, 2)) / int(2));
    }

    #[test]
    fn shift_moves_everything() {
        let x = PeriodicZ::new(v(&[2, 1]), -1, v(&[5, 7]), v(&[0, 3, 4]));
        let y = x.shift(4);
        for n in -20..20 {
            assert_eq!(y.value_at(n), x.value_at(n - 4));
        }
        assert_eq!(x.shift(4).shift(-4), x);
    }

    #[test]
    fn zip_is_pointwise() {
        let x = PeriodicZ::new(v(&[2, 1]), -1, v(&[5, 7]), v(&[0, 3, 4]));
        let y = PeriodicZ::new(v(&[1, 1, 0]), 2, v(&[-1]), v(&[1, 0]));
        let s = x.zip_with(&y, |a, b| a + b);
        let m = x.zip_with(&y, |a, b| a.min(b).clone());
        for n in -30..30 {
            assert_eq!(s.value_at(n), &(x.value_at(n) + y.value_at(n)));
            assert_eq!(m.value_at(n), x.value_at(n).min(y.value_at(n)));
        }
    }

    #[test]
    fn density_of_even_indicator() {
        let even = PeriodicZ::periodic(v(&[1, 0]));
        assert_eq!(even.density(), rat(1, 2));
        assert_eq!(PeriodicZ::delta(3, int(4)).density(), int(0));
        assert_eq!(PeriodicZ::delta(3, int(4)).sum(), Some(int(4)));
        assert_eq!(even.sum(), None);
    }
}
