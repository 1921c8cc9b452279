//! Membership in the ideal generated by positive vectors.
//!
//! For positive generators `A`, a vector `v` lies in the ideal `V_A` iff
//! `+-v <= sum_i c_i a_i` for some coefficients `c_i >= 0`. In pointwise
//! orders on step functions this happens iff `supp(v)` is covered by the
//! supports of the generators; cone spaces solve the linear feasibility
//! problem exactly.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cone::{cone_leq, is_positive};
use super::lp::nonneg_solution;
use super::space::Space;
use super::vector::{Data, Vector};
use crate::error::{Error, Result};
use crate::rational::{lcm_usize, Rational};

/// Witness that `+-v <= bound` with `bound = sum_i coefficients[i] * generators[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCertificate {
    pub generators: Vec<Vector>,
    #[serde(with = "crate::rational::serde_str_vec")]
    pub coefficients: Vec<Rational>,
    pub bound: Vector,
}

impl IdealCertificate {
    /// Recomputes the bound and both order comparisons.
    pub fn replay(&self, v: &Vector) -> bool {
        if self.generators.len() != self.coefficients.len() || self.coefficients.iter().any(Signed::is_negative) {
            return false;
        }
        let mut bound = Vector::zero(v.space());
        for (g, c) in self.generators.iter().zip(&self.coefficients) {
            match bound.try_add(&g.scale(c)) {
                Ok(b) => bound = b,
                Err(_) => return false,
            }
        }
        bound == self.bound && cone_leq(v, &bound).unwrap_or(false) && cone_leq(&-v, &bound).unwrap_or(false)
    }
}

/// Decides `v in V_A` and on success returns a replayable certificate.
pub fn ideal_contains(generators: &[Vector], v: &Vector) -> Result<(bool, Option<IdealCertificate>)> {
    for a in generators {
        a.space().check_same(v.space())?;
        if !is_positive(a) {
            return Err(Error::NonPositiveGenerator(a.to_string()));
        }
    }
    let coefficients = match v.data() {
        Data::Sparse(m) => {
            let mut coef = vec![Rational::zero(); generators.len()];
            for (p, x) in m {
                if !cover_point(generators, &mut coef, x, |a| a.value_at(p)) {
                    return Ok((false, None));
                }
            }
            Some(coef)
        }
        Data::Periodic(pv) => {
            let periodic: Vec<_> = generators.iter().map(|a| a.as_periodic().expect("same space")).collect();
            let period = periodic
                .iter()
                .chain(std::iter::once(&pv))
                .fold(1, |l, p| lcm_usize(lcm_usize(l, p.left().len()), p.right().len()))
                as i64;
            let lo = periodic.iter().map(|p| p.core_start()).chain([pv.core_start()]).min().unwrap() - period;
            let hi = periodic.iter().map(|p| p.core_end()).chain([pv.core_end()]).max().unwrap() + period;
            let mut coef = vec![Rational::zero(); generators.len()];
            for n in lo..hi {
                let x = pv.value_at(n);
                if !x.is_zero()
                    && !cover_point(generators, &mut coef, x, |a| {
                        a.as_periodic().expect("same space").value_at(n).clone()
                    })
                {
                    return Ok((false, None));
                }
            }
            Some(coef)
        }
        Data::Dense(x) => {
            let Space::PolyCone(cone) = v.space() else { unreachable!() };
            cone_ideal_coefficients(&cone.generators, generators, x)
        }
    };
    let Some(coefficients) = coefficients else {
        return Ok((false, None));
    };
    let bound = generators.iter().zip(&coefficients).fold(Vector::zero(v.space()), |acc, (g, c)| &acc + &g.scale(c));
    Ok((true, Some(IdealCertificate { generators: generators.to_vec(), coefficients, bound })))
}

/// Raises the coefficient of the first generator positive at the point so
/// that it dominates `|x|` there.
fn cover_point(
    generators: &[Vector],
    coef: &mut [Rational],
    x: &Rational,
    value: impl Fn(&Vector) -> Rational,
) -> bool {
    for (i, a) in generators.iter().enumerate() {
        let ai = value(a);
        if ai.is_positive() {
            let need = x.abs() / ai;
            if need > coef[i] {
                coef[i] = need;
            }
            return true;
        }
    }
    false
}

/// Unknowns `c` (one per ideal generator), `lam`, `mu` (one per cone
/// generator each):  `sum c_i a_i - G lam = v`,  `sum c_i a_i - G mu = -v`.
fn cone_ideal_coefficients(
    cone_gens: &[Vec<Rational>],
    ideal_gens: &[Vector],
    x: &[Rational],
) -> Option<Vec<Rational>> {
    let dim = x.len();
    let k = ideal_gens.len();
    let m = cone_gens.len();
    let dense: Vec<&[Rational]> = ideal_gens.iter().map(|a| a.as_dense().expect("same space")).collect();
    let mut rows = Vec::with_capacity(2 * dim);
    let mut rhs = Vec::with_capacity(2 * dim);
    for (block, sign) in [(0usize, 1i64), (1, -1)] {
        for i in 0..dim {
            let mut row = vec![Rational::zero(); k + 2 * m];
            for (j, a) in dense.iter().enumerate() {
                row[j] = a[i].clone();
            }
            for (j, g) in cone_gens.iter().enumerate() {
                row[k + block * m + j] = -&g[i];
            }
            rows.push(row);
            rhs.push(if sign > 0 { x[i].clone() } else { -&x[i] });
        }
    }
    nonneg_solution(&rows, &rhs).map(|sol| sol[..k].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Element;
    use crate::order::periodic::PeriodicZ;
    use crate::rational::{int, rat};

    #[test]
    fn coordinatewise_membership() {
        let x3 = Space::finite(3).unwrap();
        let ind12 = Vector::indicator(&x3, &[Element::Index(1), Element::Index(2)]).unwrap();
        let d1 = Vector::delta(&x3, Element::Index(1)).unwrap();
        let d2 = Vector::delta(&x3, Element::Index(2)).unwrap();
        let (ok, cert) = ideal_contains(std::slice::from_ref(&ind12), &d1).unwrap();
        assert!(ok);
        let cert = cert.unwrap();
        assert_eq!(cert.coefficients, vec![int(1)]);
        assert!(cert.replay(&d1));
        assert!(!ideal_contains(std::slice::from_ref(&d1), &d2).unwrap().0);
        assert!(matches!(ideal_contains(&[-&d1], &d2), Err(Error::NonPositiveGenerator(_))));
    }

    #[test]
    fn smallest_scaling_is_found() {
        let q2 = Space::finite(2).unwrap();
        let a = Vector::from_coords(&q2, &[int(1), int(2)]).unwrap();
        let v = Vector::from_coords(&q2, &[int(3), int(4)]).unwrap();
        let (ok, cert) = ideal_contains(&[a], &v).unwrap();
        assert!(ok);
        let cert = cert.unwrap();
        // Oracle: c must satisfy c >= 3/1 and c >= 4/2; the least is 3.
        assert_eq!(cert.coefficients, vec![int(3)]);
        assert_eq!(cert.bound, Vector::from_coords(&q2, &[int(3), int(6)]).unwrap());
        assert!(cert.replay(&v));
    }

    #[test]
    fn periodic_membership() {
        let even = Vector::periodic(PeriodicZ::periodic(vec![int(1), int(0)]));
        let odd = Vector::periodic(PeriodicZ::periodic(vec![int(0), int(1)]));
        let half_even =
            Vector::periodic(PeriodicZ::new(vec![rat(1, 2), int(0)], 0, vec![int(7)], vec![int(3), int(0)]));
        let (ok, cert) = ideal_contains(std::slice::from_ref(&even), &half_even).unwrap();
        assert!(ok);
        assert!(cert.unwrap().replay(&half_even));
        assert!(!ideal_contains(std::slice::from_ref(&even), &odd).unwrap().0);
        assert!(ideal_contains(&[even, odd.clone()], &Vector::periodic(PeriodicZ::constant(int(5)))).unwrap().0);
    }

    #[test]
    fn cone_membership() {
        let c = Space::poly_cone(2, vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        let a = Vector::from_coords(&c, &[int(1), int(0)]).unwrap();
        let v = Vector::from_coords(&c, &[int(-2), int(0)]).unwrap();
        let w = Vector::from_coords(&c, &[int(0), int(1)]).unwrap();
        let (ok, cert) = ideal_contains(std::slice::from_ref(&a), &v).unwrap();
        assert!(ok);
        assert!(cert.unwrap().replay(&v));
        assert!(!ideal_contains(&[a], &w).unwrap().0);
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let q2 = Space::finite(2).unwrap();
        let a = Vector::from_coords(&q2, &[int(1), int(2)]).unwrap();
        let v = Vector::from_coords(&q2, &[int(3), int(4)]).unwrap();
        let mut cert = ideal_contains(&[a], &v).unwrap().1.unwrap();
        cert.coefficients[0] = int(2);
        assert!(!cert.replay(&v));
    }
}
