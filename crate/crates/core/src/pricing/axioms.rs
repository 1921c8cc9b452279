//! Sampled, exact checks of the pricing and conditional-mean axioms.

use num_traits::{One, Signed};

use super::backends::{ConditionalMean, DynMean, DynPricing, VectorPricing};
use super::value::VPValue;
use super::{cm_from_vp, vp_from_cm};
use crate::error::{Error, Result};
use crate::order::{is_positive, Space, Vector};
use crate::rational::Rational;
use crate::report::{Check, Report};
use crate::sample::{shrink, Sampler};

/// How inputs are drawn for the axiom checks.
#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Restricts supports of sparse vectors (e.g. to a pricing's window).
    pub pool: Option<Vec<crate::groups::Element>>,
    /// Extra triples always checked besides the random ones.
    pub extra: Vec<[Vector; 3]>,
}

impl SampleConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        SampleConfig { seed, samples, pool: None, extra: Vec::new() }
    }

    pub fn within(mut self, pool: Vec<crate::groups::Element>) -> Self {
        self.pool = Some(pool);
        self
    }

    pub(crate) fn sampler(&self) -> Sampler {
        let s = Sampler::new(self.seed);
        match &self.pool {
            Some(p) => s.within(p.clone()),
            None => s,
        }
    }

    fn triples(&self, space: &Space) -> Vec<[Vector; 3]> {
        let mut s = self.sampler();
        let mut out = self.extra.clone();
        for _ in 0..self.samples {
            out.push([s.positive(space), s.positive(space), s.positive(space)]);
        }
        out
    }
}

fn show(vs: &[Vector]) -> String {
    let names = ["u", "v", "w", "t"];
    vs.iter().zip(names).map(|(v, n)| format!("{n} = {v}")).collect::<Vec<_>>().join(", ")
}

/// Evaluates one axiom instance: `Some(true)` holds, `Some(false)` fails,
/// `None` skipped as undefined.
type Instance<'a> = Box<dyn Fn(&[Vector]) -> Result<Option<bool>> + 'a>;

fn run(check: &mut Check, inputs: &[Vector], inst: &Instance<'_>) -> Result<()> {
    match inst(inputs)? {
        Some(true) => check.pass(),
        None => check.skip(),
        Some(false) => {
            let small = shrink(inputs.to_vec(), |vs| matches!(inst(vs), Ok(Some(false))), 64);
            check.fail(|| show(&small));
        }
    }
    Ok(())
}

/// Checks (VP1)-(VP8) exactly on sampled triples of positive vectors.
/// Instances of (VP2) involving `0 * inf` are skipped and counted.
pub fn check_vp_axioms(r: &dyn VectorPricing, cfg: &SampleConfig) -> Result<Report> {
    let space = r.space().clone();
    let zero = Vector::zero(&space);
    let p = |a: &Vector, b: &Vector| r.price(a, b);
    let t_values =
        [Rational::new(1.into(), 3.into()), Rational::from_integer(2.into()), Rational::new(7.into(), 2.into())];

    let instances: Vec<(&str, Instance<'_>)> = vec![
        (
            "VP1 additivity",
            Box::new(|x: &[Vector]| {
                let (u, v, w) = (&x[0], &x[1], &x[2]);
                if w.is_zero() {
                    return Ok(None);
                }
                Ok(Some(p(&u.try_add(v)?, w)? == p(u, w)?.add(&p(v, w)?)))
            }),
        ),
        (
            "VP2 cocycle",
            Box::new(|x: &[Vector]| {
                let (u, v, w) = (&x[0], &x[1], &x[2]);
                match p(u, v)?.mul(&p(v, w)?) {
                    Ok(prod) => Ok(Some(p(u, w)? == prod)),
                    Err(Error::UndefinedProduct) => Ok(None),
                    Err(e) => Err(e),
                }
            }),
        ),
        ("VP3 normalization", Box::new(|x: &[Vector]| Ok(Some(p(&x[0], &x[0])? == VPValue::one())))),
        (
            "VP4 monotonicity",
            Box::new(|x: &[Vector]| {
                let (u, v, w) = (&x[0], &x[1], &x[2]);
                Ok(Some(p(u, w)? <= p(&u.try_add(v)?, w)?))
            }),
        ),
        (
            "VP5 positive functional on the ideal of v",
            Box::new(|x: &[Vector]| {
                let (u, v) = (&x[0], &x[1]);
                if v.is_zero() {
                    return Ok(None);
                }
                // u /\ v (or a multiple of v on cone spaces) lies in V_v: its
                // price is finite, at most 1, and additive with the rest.
                let below = if space.is_coordinatewise() {
                    u.zip_with(v, |a, b| a.min(b).clone())?
                } else {
                    v.scale(&Rational::new(1.into(), 2.into()))
                };
                let val = p(&below, v)?;
                let rest = v.try_sub(&below)?;
                Ok(Some(val <= VPValue::one() && val.add(&p(&rest, v)?) == VPValue::one() && is_positive(&rest)))
            }),
        ),
        (
            "VP6 reciprocity",
            Box::new(|x: &[Vector]| {
                let (u, v) = (&x[0], &x[1]);
                Ok(Some(p(u, v)? == p(v, u)?.recip()))
            }),
        ),
        (
            "VP7 zero and infinity",
            Box::new(|x: &[Vector]| {
                let v = &x[1];
                if v.is_zero() {
                    return Ok(Some(p(&zero, &zero)? == VPValue::one()));
                }
                Ok(Some(p(&zero, v)? == VPValue::zero() && p(v, &zero)? == VPValue::Infinite))
            }),
        ),
        (
            "VP8 homogeneity",
            Box::new(|x: &[Vector]| {
                let (u, v) = (&x[0], &x[1]);
                // r(0, 0) = 1 is fixed, so scaling only makes sense for v != 0.
                if v.is_zero() {
                    return Ok(None);
                }
                let base = p(u, v)?;
                for t in &t_values {
                    if p(&u.scale(t), v)? != base.scale(t)? {
                        return Ok(Some(false));
                    }
                }
                Ok(Some(true))
            }),
        ),
    ];

    let triples = cfg.triples(&space);
    let mut report = Report::new(format!("vector pricing axioms: {}", r.describe()));
    for (name, inst) in &instances {
        let mut check = Check::new(*name);
        for t in &triples {
            run(&mut check, t, inst)?;
        }
        report.push(check);
    }
    Ok(report)
}

/// Checks (CM1)-(CM3) and the range `[0, 1]` on sampled chains
/// `0 <= u <= v <= w`, `w != 0`.
pub fn check_cm_axioms(m: &dyn ConditionalMean, cfg: &SampleConfig) -> Result<Report> {
    let space = m.space().clone();
    let mut s = cfg.sampler();
    let mut inputs = Vec::new();
    for _ in 0..cfg.samples {
        let w = s.nonzero(&space);
        let v = s.nonzero_below(&w);
        let u = s.below(&v);
        let u1 = s.below(&w);
        let u2 = s.below(&w.try_sub(&u1)?);
        inputs.push([u, v, w, u1, u2]);
    }
    let mut report = Report::new(format!("conditional mean axioms: {}", m.describe()));
    let mut cm1 = Check::new("CM1 additivity");
    let mut cm2 = Check::new("CM2 transitivity");
    let mut cm3 = Check::new("CM3 normalization");
    let mut range = Check::new("values in [0, 1]");
    for [u, v, w, u1, u2] in &inputs {
        let lhs = m.mean(&u1.try_add(u2)?, w)?;
        let rhs = m.mean(u1, w)? + m.mean(u2, w)?;
        cm1.record(lhs == rhs, || format!("u1 = {u1}, u2 = {u2}, w = {w}"));
        let trans = m.mean(u, w)? == m.mean(u, v)? * m.mean(v, w)?;
        cm2.record(trans, || format!("u = {u}, v = {v}, w = {w}"));
        cm3.record(m.mean(w, w)?.is_one(), || format!("w = {w}"));
        let x = m.mean(u, w)?;
        range.record(!x.is_negative() && x <= Rational::one(), || format!("P = {x} at u = {u}, w = {w}"));
    }
    for c in [cm1, cm2, cm3, range] {
        report.push(c);
    }
    Ok(report)
}

/// Checks that the pricing/mean correspondence is a bijection on samples:
/// `vp_from_cm(cm_from_vp(r)) = r` on positive pairs and
/// `cm_from_vp(vp_from_cm(P)) = P` on pairs `0 <= u <= v != 0`, with
/// `P = cm_from_vp(r)`.
pub fn check_bijection(r: DynPricing, cfg: &SampleConfig) -> Result<Report> {
    let space = r.space().clone();
    let p: DynMean = cm_from_vp(r.clone());
    let r2 = vp_from_cm(p.clone());
    let p2 = cm_from_vp(r2.clone());
    let mut s = cfg.sampler();
    let mut forward = Check::new("vp_from_cm . cm_from_vp = id");
    let mut backward = Check::new("cm_from_vp . vp_from_cm = id");
    for _ in 0..cfg.samples {
        let (u, v) = (s.positive(&space), s.positive(&space));
        let (a, b) = (r.price(&u, &v)?, r2.price(&u, &v)?);
        forward.record(a == b, || format!("u = {u}, v = {v}: {a} vs {b}"));
        let w = s.nonzero(&space);
        let x = s.below(&w);
        let (a, b) = (p.mean(&x, &w)?, p2.mean(&x, &w)?);
        backward.record(a == b, || format!("u = {x}, v = {w}: {a} vs {b}"));
    }
    let mut report = Report::new(format!("pricing/mean bijection: {}", r.describe()));
    report.push(forward);
    report.push(backward);
    Ok(report)
}
