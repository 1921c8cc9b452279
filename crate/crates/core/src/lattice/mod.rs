//! Lattice operations on step-function spaces, band projections and the
//! extension of a conditional mean `P(. | v)` to the whole positive cone.

mod cp;

pub use cp::{cp_to_cm, cp_validate, from_measure_chain, CpMean, CpTable, MAX_GROUND};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::order::{cone_leq, Space, Vector};
use crate::pricing::{ConditionalMean, SampleConfig};
use crate::rational::{ceil, format_rational, Rational};
use crate::report::{Check, Report};

fn require_lattice(space: &Space) -> Result<()> {
    if space.is_coordinatewise() {
        Ok(())
    } else {
        Err(Error::UnsupportedSpace(format!("{space} is not a vector lattice here")))
    }
}

/// Pointwise `(u ∧ v, u ∨ v)`.
pub fn lattice_meet_join(u: &Vector, v: &Vector) -> Result<(Vector, Vector)> {
    require_lattice(u.space())?;
    let meet = u.zip_with(v, |a, b| a.min(b).clone())?;
    let join = u.zip_with(v, |a, b| a.max(b).clone())?;
    Ok((meet, join))
}

/// `|u| = u ∨ (-u)`.
pub fn abs(u: &Vector) -> Result<Vector> {
    require_lattice(u.space())?;
    Ok(u.map_values(|x| x.abs()))
}

/// A non-zero positive step function is self-majorizing, with its smallest
/// positive value as lower bound. Zero, signed and non-lattice vectors
/// report `(false, None)`.
pub fn is_self_majorizing(v: &Vector) -> (bool, Option<Rational>) {
    if !v.space().is_coordinatewise() || !v.is_pointwise_nonneg() {
        return (false, None);
    }
    match v.min_positive_value() {
        Some(c) => (true, Some(c)),
        None => (false, None),
    }
}

/// `p_v(u) = sup_n u ∧ n v`, attained at `n = n_star`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandProjection {
    pub projected: Vector,
    pub n_star: u64,
    /// `u ∧ n v` for `n = n_star, n_star + 1, n_star + 2`.
    pub stages: [Vector; 3],
}

impl BandProjection {
    /// The stages agree and equal `u` restricted to `supp(v)`.
    pub fn is_stable(&self) -> bool {
        self.stages.iter().all(|s| *s == self.projected)
    }
}

pub fn band_projection(v: &Vector, u: &Vector) -> Result<BandProjection> {
    if v.is_zero() {
        return Err(Error::InvalidInput("band projection onto the zero vector".into()));
    }
    let (ok, c) = is_self_majorizing(v);
    let c = match (ok, c) {
        (true, Some(c)) => c,
        _ => return Err(Error::PreconditionFailed(format!("{v} is not self-majorizing"))),
    };
    if !u.is_pointwise_nonneg() {
        return Err(Error::InvalidInput(format!("{u} is not positive")));
    }
    let n_star = ceil(&(u.max_value() / &c))
        .to_u64()
        .ok_or_else(|| Error::InvalidInput("stabilization exponent out of range".into()))?;
    let meet_at =
        |n: u64| -> Result<Vector> { Ok(lattice_meet_join(u, &v.scale(&Rational::from_integer(n.into())))?.0) };
    let stages = [meet_at(n_star)?, meet_at(n_star + 1)?, meet_at(n_star + 2)?];
    let projected = u.zip_with(v, |a, b| if b.is_zero() { Rational::zero() } else { a.clone() })?;
    Ok(BandProjection { projected, n_star, stages })
}

/// `P(u | v)` for any positive `u`: `P(p_v(u) | v)`, evaluated through
/// positive homogeneity as `n P(p_v(u) / n | v)` with `p_v(u) <= n v`.
pub fn extend_cm_global(p: &dyn ConditionalMean, u: &Vector, v: &Vector) -> Result<Rational> {
    let bp = band_projection(v, u)?;
    if !bp.is_stable() {
        return Err(Error::PreconditionFailed(format!("u ∧ n v does not stabilize at n = {}", bp.n_star)));
    }
    if bp.projected.is_zero() {
        return Ok(Rational::zero());
    }
    let n = Rational::from_integer(bp.n_star.max(1).into());
    let scaled = bp.projected.scale(&n.recip());
    debug_assert!(cone_leq(&scaled, v)?);
    Ok(n * p.mean(&scaled, v)?)
}

/// Positive-linear-functional contract for `extend_cm_global(p, ., v)` on
/// random positive step functions, plus agreement with `p` below `v`.
pub fn check_extension(p: &dyn ConditionalMean, cfg: &SampleConfig) -> Result<Report> {
    let space = p.space().clone();
    let mut s = cfg.sampler();
    let mut additive = Check::new("additive");
    let mut homogeneous = Check::new("positively homogeneous");
    let mut monotone = Check::new("monotone");
    let mut normalized = Check::new("equals 1 at v");
    let mut agrees = Check::new("agrees with P(u | v) for u <= v");
    let mut stable = Check::new("u ∧ n v stable at n*, n*+1, n*+2");
    for _ in 0..cfg.samples {
        let v = s.nonzero(&space);
        let a = s.positive(&space);
        let b = s.positive(&space);
        let t = s.positive_rational();
        let ext = |x: &Vector| extend_cm_global(p, x, &v);
        let ea = ext(&a)?;
        let eb = ext(&b)?;
        let sum = a.try_add(&b)?;
        additive.record(ext(&sum)? == &ea + &eb, || format!("a = {a}, b = {b}, v = {v}"));
        homogeneous.record(ext(&a.scale(&t))? == &t * &ea, || format!("t = {}, a = {a}, v = {v}", format_rational(&t)));
        monotone.record(ext(&sum)? >= ea, || format!("a = {a}, b = {b}, v = {v}"));
        normalized.record(ext(&v)?.is_one(), || format!("v = {v}"));
        let below = s.below(&v);
        agrees.record(ext(&below)? == p.mean(&below, &v)?, || format!("u = {below}, v = {v}"));
        stable.record(band_projection(&v, &a)?.is_stable(), || format!("u = {a}, v = {v}"));
    }
    let mut report = Report::new(format!("global extension of {}", p.describe()));
    for c in [additive, homogeneous, monotone, normalized, agrees, stable] {
        report.push(c);
    }
    Ok(report)
}

/// Lattice identities on random vectors: `u∧v + u∨v = u+v`,
/// `(u+w)∧(v+w) = u∧v + w`, `|u| = u∨(-u)`.
pub fn check_lattice_identities(space: &Space, cfg: &SampleConfig) -> Result<Report> {
    require_lattice(space)?;
    let mut s = cfg.sampler();
    let mut sum = Check::new("u ∧ v + u ∨ v = u + v");
    let mut shift = Check::new("(u + w) ∧ (v + w) = u ∧ v + w");
    let mut absolute = Check::new("|u| = u ∨ (-u)");
    for _ in 0..cfg.samples {
        let signed = |s: &mut crate::sample::Sampler| -> Result<Vector> {
            let a = s.positive(space);
            let b = s.positive(space);
            a.try_sub(&b)
        };
        let u = signed(&mut s)?;
        let v = signed(&mut s)?;
        let w = signed(&mut s)?;
        let (m, j) = lattice_meet_join(&u, &v)?;
        sum.record(m.try_add(&j)? == u.try_add(&v)?, || format!("u = {u}, v = {v}"));
        let (m2, _) = lattice_meet_join(&u.try_add(&w)?, &v.try_add(&w)?)?;
        shift.record(m2 == m.try_add(&w)?, || format!("u = {u}, v = {v}, w = {w}"));
        absolute.record(abs(&u)? == lattice_meet_join(&u, &-&u)?.1, || format!("u = {u}"));
    }
    let mut report = Report::new(format!("lattice identities on {space}"));
    for c in [sum, shift, absolute] {
        report.push(c);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Element;
    use crate::order::PeriodicZ;
    use crate::rational::{int, rat};

    fn x(n: usize) -> Space {
        Space::finite(n).unwrap()
    }

    fn ind(space: &Space, pts: &[usize]) -> Vector {
        let pts: Vec<Element> = pts.iter().map(|&i| Element::Index(i)).collect();
        Vector::indicator(space, &pts).unwrap()
    }

    #[test]
    fn meet_join_examples() {
        let s = x(5);
        let (m, j) = lattice_meet_join(&ind(&s, &[0, 1, 2]), &ind(&s, &[1, 2, 3])).unwrap();
        assert_eq!(m, ind(&s, &[1, 2]));
        assert_eq!(j, ind(&s, &[0, 1, 2, 3]));
        let even = Vector::periodic(PeriodicZ::periodic(vec![int(1), int(0)]));
        let ones = Vector::periodic(PeriodicZ::constant(int(1)));
        assert_eq!(lattice_meet_join(&even, &ones).unwrap().0, even);
        let cone = Space::poly_cone(2, vec![vec![int(1), int(0)], vec![int(1), int(1)]]).unwrap();
        assert!(lattice_meet_join(&Vector::zero(&cone), &Vector::zero(&cone)).is_err());
    }

    #[test]
    fn self_majorizing_examples() {
        let s = x(4);
        assert_eq!(is_self_majorizing(&ind(&s, &[0])), (true, Some(int(1))));
        let v = Vector::from_coords(&s, &[rat(1, 3), int(2), int(2), int(0)]).unwrap();
        assert_eq!(is_self_majorizing(&v), (true, Some(rat(1, 3))));
        assert_eq!(is_self_majorizing(&Vector::zero(&s)), (false, None));
    }

    #[test]
    fn band_projection_examples() {
        let s = x(3);
        let bp = band_projection(&ind(&s, &[1, 2]), &ind(&s, &[0, 1])).unwrap();
        assert_eq!((bp.projected.clone(), bp.n_star), (ind(&s, &[1]), 1));
        assert!(bp.is_stable());
        let u = Vector::from_coords(&s, &[int(0), int(5), int(0)]).unwrap();
        let v = Vector::from_coords(&s, &[int(0), rat(1, 2), int(1)]).unwrap();
        let bp = band_projection(&v, &u).unwrap();
        assert_eq!((bp.projected.clone(), bp.n_star), (u, 10));
        assert!(bp.is_stable());
        // One step earlier the meet has not caught up yet.
        let early = lattice_meet_join(&bp.projected, &v.scale(&int(9))).unwrap().0;
        assert_ne!(early, bp.projected);
        assert!(band_projection(&Vector::zero(&s), &ind(&s, &[0])).is_err());
    }
}
