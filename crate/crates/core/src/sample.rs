//! Seeded generation of exact random inputs, and counterexample shrinking.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groups::Element;
use crate::order::{is_positive, Data, PeriodicZ, Space, Vector};
use crate::rational::Rational;

/// Draws random positive vectors. The same seed always yields the same
/// sequence.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    /// For sparse spaces, restricts supports to these points.
    pool: Option<Vec<Element>>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), pool: None }
    }

    /// Restricts the supports of sparse vectors to `points`.
    pub fn within(mut self, points: Vec<Element>) -> Self {
        self.pool = Some(points);
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// `p/q` with `1 <= p <= 6`, `1 <= q <= 4`.
    pub fn positive_rational(&mut self) -> Rational {
        let p: i64 = self.rng.gen_range(1..=6);
        let q: i64 = self.rng.gen_range(1..=4);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    /// Zero with probability 1/5, else [`Self::positive_rational`].
    pub fn entry(&mut self) -> Rational {
        if self.rng.gen_ratio(1, 5) {
            Rational::zero()
        } else {
            self.positive_rational()
        }
    }

    /// A rational in `[0, 1]` with denominator at most 4.
    pub fn fraction(&mut self) -> Rational {
        let q: i64 = self.rng.gen_range(1..=4);
        let p: i64 = self.rng.gen_range(0..=q);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn entries(&mut self, len: usize) -> Vec<Rational> {
        (0..len).map(|_| self.entry()).collect()
    }

    /// A positive vector, possibly zero.
    pub fn positive(&mut self, space: &Space) -> Vector {
        match space {
            Space::FiniteCoord { size } => {
                let coords = self.entries(*size);
                let v = Vector::from_coords(space, &coords).expect("right length");
                self.restrict(v)
            }
            Space::GroupFinSupp { group } => {
                let pool = match &self.pool {
                    Some(p) => p.clone(),
                    None => group.elements().unwrap_or_else(|| group.ball(2)),
                };
                let k = self.rng.gen_range(1..=pool.len().min(4));
                let pts: Vec<Element> = pool.choose_multiple(&mut self.rng, k).cloned().collect();
                let vals = self.entries(k);
                Vector::from_entries(space, pts.into_iter().zip(vals)).expect("points of the group")
            }
            Space::PeriodicZ => {
                if self.rng.gen_ratio(2, 5) {
                    let start = self.rng.gen_range(-5..=5);
                    let len = self.rng.gen_range(1..=6);
                    let core = self.entries(len);
                    return Vector::periodic(PeriodicZ::finite(start, core));
                }
                let pattern = |s: &mut Self| {
                    if s.rng.gen_ratio(1, 3) {
                        vec![Rational::zero()]
                    } else {
                        let len = s.rng.gen_range(1..=3);
                        s.entries(len)
                    }
                };
                let left = pattern(self);
                let right = pattern(self);
                let start = self.rng.gen_range(-5..=5);
                let len = self.rng.gen_range(0..=4);
                let core = self.entries(len);
                Vector::periodic(PeriodicZ::new(left, start, core, right))
            }
            Space::PolyCone(cone) => {
                let mut x = vec![Rational::zero(); cone.dim];
                for g in &cone.generators {
                    let c = self.entry();
                    for (xi, gi) in x.iter_mut().zip(g) {
                        *xi += &c * gi;
                    }
                }
                Vector::from_coords(space, &x).expect("right dimension")
            }
        }
    }

    fn restrict(&self, v: Vector) -> Vector {
        match &self.pool {
            Some(pool) => {
                let keep: Vec<(Element, Rational)> = pool.iter().map(|p| (p.clone(), v.value_at(p))).collect();
                Vector::from_entries(v.space(), keep).expect("pool points lie in the space")
            }
            None => v,
        }
    }

    /// A non-zero positive vector.
    pub fn nonzero(&mut self, space: &Space) -> Vector {
        loop {
            let v = self.positive(space);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// A vector `u` with `0 <= u <= w`.
    pub fn below(&mut self, w: &Vector) -> Vector {
        match w.data() {
            Data::Sparse(m) => {
                let entries: Vec<(Element, Rational)> =
                    m.iter().map(|(p, x)| (p.clone(), x * self.fraction())).collect();
                Vector::from_entries(w.space(), entries).expect("same points")
            }
            Data::Periodic(p) => {
                let lf: Vec<Rational> = (0..p.left().len()).map(|_| self.fraction()).collect();
                let rf: Vec<Rational> = (0..p.right().len()).map(|_| self.fraction()).collect();
                let start = p.core_start();
                let cf: Vec<Rational> = (0..p.core().len()).map(|_| self.fraction()).collect();
                // Pattern lengths divide themselves, so anchoring is preserved.
                let f = PeriodicZ::new(lf, start, cf, rf);
                Vector::periodic(p.zip_with(&f, |a, b| a * b))
            }
            Data::Dense(_) => {
                // Cone spaces: shrink along the segment towards 0, which
                // stays between 0 and w for any positive w.
                w.scale(&self.fraction())
            }
        }
    }

    /// A non-zero vector `u` with `0 <= u <= w`, `w != 0`.
    pub fn nonzero_below(&mut self, w: &Vector) -> Vector {
        for _ in 0..64 {
            let u = self.below(w);
            if !u.is_zero() {
                return u;
            }
        }
        w.clone()
    }
}

/// Simpler variants of a positive vector: each stored entry set to 0, set to
/// 1, or with its numerator halved. Only positive results are returned.
pub fn shrink_candidates(v: &Vector) -> Vec<Vector> {
    fn variants(x: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        if !x.is_zero() {
            out.push(Rational::zero());
        }
        if !x.is_one() && !x.is_zero() {
            out.push(Rational::one());
        }
        let half = Rational::new(x.numer() / 2, x.denom().clone());
        if half != *x && !half.is_zero() {
            out.push(half);
        }
        out
    }
    let mut out = Vec::new();
    match v.data() {
        Data::Sparse(m) => {
            for (p, x) in m {
                for y in variants(x) {
                    let mut m2 = m.clone();
                    m2.insert(p.clone(), y);
                    out.push(Vector::from_entries(v.space(), m2).expect("same points"));
                }
            }
        }
        Data::Periodic(p) => {
            let parts = [p.left().to_vec(), p.core().to_vec(), p.right().to_vec()];
            for which in 0..3 {
                for i in 0..parts[which].len() {
                    for y in variants(&parts[which][i]) {
                        let mut q = parts.clone();
                        q[which][i] = y;
                        let [l, c, r] = q;
                        out.push(Vector::periodic(PeriodicZ::new(l, p.core_start(), c, r)));
                    }
                }
            }
        }
        Data::Dense(d) => {
            for i in 0..d.len() {
                for y in variants(&d[i]) {
                    let mut d2 = d.clone();
                    d2[i] = y;
                    out.push(Vector::from_coords(v.space(), &d2).expect("same dimension"));
                }
            }
        }
    }
    out.retain(is_positive);
    out
}

/// Greedily shrinks a failing input tuple while `fails` keeps holding.
/// Deterministic; bounded by `rounds` passes.
pub fn shrink(mut input: Vec<Vector>, fails: impl Fn(&[Vector]) -> bool, rounds: usize) -> Vec<Vector> {
    for _ in 0..rounds {
        let mut changed = false;
        for i in 0..input.len() {
            for cand in shrink_candidates(&input[i]) {
                let mut next = input.clone();
                next[i] = cand;
                if fails(&next) {
                    input = next;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    input
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::cone_leq;

    #[test]
    fn deterministic_and_positive() {
        for space in [Space::finite(5).unwrap(), Space::PeriodicZ] {
            let a: Vec<Vector> = {
                let mut s = Sampler::new(7);
                (0..50).map(|_| s.positive(&space)).collect()
            };
            let mut s = Sampler::new(7);
            let b: Vec<Vector> = (0..50).map(|_| s.positive(&space)).collect();
            assert_eq!(a, b);
            assert!(a.iter().all(is_positive));
            for w in &a {
                let u = s.below(w);
                assert!(is_positive(&u) && cone_leq(&u, w).unwrap());
            }
        }
    }

    #[test]
    fn shrinking_reaches_small_witness() {
        let x = Space::finite(3).unwrap();
        let v =
            Vector::from_coords(&x, &[Rational::from_integer(40.into()), Rational::zero(), Rational::one()]).unwrap();
        // "fails" whenever the first coordinate is non-zero
        let out = shrink(vec![v], |vs| !vs[0].value_at(&Element::Index(0)).is_zero(), 100);
        assert_eq!(out[0], Vector::from_coords(&x, &[Rational::one(), Rational::zero(), Rational::zero()]).unwrap());
    }
}
