//! Elementary properties of pricings: invariance, equivariance,
//! stationarity, and explicit cylinder constraints.

use std::fmt;

use super::backends::{check_mean_pair, VectorPricing};
use super::value::VPValue;
use crate::error::{Error, Result};
use crate::groups::{mu_apply, Action, Element, Measure};
use crate::order::{is_positive, Vector};
use crate::rational::{format_rational, Rational};
use crate::report::{Check, Report};

/// Allowed values of `P(u | v)` in a constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Allowed {
    Interval(Rational, Rational),
    Set(Vec<Rational>),
}

impl Allowed {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Allowed::Interval(lo, hi) => lo <= x && x <= hi,
            Allowed::Set(s) => s.contains(x),
        }
    }
}

impl fmt::Display for Allowed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Allowed::Interval(lo, hi) => write!(f, "[{}, {}]", format_rational(lo), format_rational(hi)),
            Allowed::Set(s) => {
                let items: Vec<String> = s.iter().map(format_rational).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
        }
    }
}

/// `P(u | v)` must lie in `allowed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub u: Vector,
    pub v: Vector,
    pub allowed: Allowed,
}

/// Which property to build.
#[derive(Clone, Debug)]
pub enum PropertyKind {
    /// `r(gu, v) = r(u, v)` for the listed group elements.
    Invariance {
        action: Action,
        elements: Vec<Element>,
        probes: Vec<Vector>,
    },
    /// `r(gu, gv) = r(u, v)`.
    Equivariance {
        action: Action,
        elements: Vec<Element>,
        probes: Vec<Vector>,
    },
    /// `r(mu * u, v) = r(u, v)`.
    Stationarity {
        measure: Measure,
        probes: Vec<Vector>,
    },
    Custom(Vec<Constraint>),
}

/// Direct identities checked alongside the cylinder constraints.
#[derive(Clone, Debug)]
enum Direct {
    Invariance { action: Action, elements: Vec<Element>, probes: Vec<Vector> },
    Equivariance { action: Action, elements: Vec<Element>, probes: Vec<Vector> },
    Stationarity { measure: Measure, probes: Vec<Vector> },
}

/// A finite family of constraints `P(u | v) in C`, plus the identity checks
/// that are not of that form.
#[derive(Clone, Debug)]
pub struct ElementaryProperty {
    pub constraints: Vec<Constraint>,
    direct: Option<Direct>,
}

impl ElementaryProperty {
    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty() && self.direct.is_none()
    }
}

fn check_probes(probes: &[Vector]) -> Result<()> {
    match probes.iter().find(|p| !is_positive(p)) {
        Some(p) => Err(Error::InvalidInput(format!("probe {p} is not positive"))),
        None => Ok(()),
    }
}

pub fn make_property(kind: PropertyKind) -> Result<ElementaryProperty> {
    match kind {
        PropertyKind::Invariance { action, elements, probes } => {
            check_probes(&probes)?;
            let half = Rational::new(1.into(), 2.into());
            let mut constraints = Vec::new();
            for u in probes.iter().filter(|u| !u.is_zero()) {
                for g in &elements {
                    let gu = action.act(g, u)?;
                    constraints.push(Constraint {
                        u: u.clone(),
                        v: u.try_add(&gu)?,
                        allowed: Allowed::Set(vec![half.clone()]),
                    });
                }
            }
            Ok(ElementaryProperty { constraints, direct: Some(Direct::Invariance { action, elements, probes }) })
        }
        PropertyKind::Equivariance { action, elements, probes } => {
            check_probes(&probes)?;
            Ok(ElementaryProperty {
                constraints: Vec::new(),
                direct: Some(Direct::Equivariance { action, elements, probes }),
            })
        }
        PropertyKind::Stationarity { measure, probes } => {
            check_probes(&probes)?;
            Ok(ElementaryProperty { constraints: Vec::new(), direct: Some(Direct::Stationarity { measure, probes }) })
        }
        PropertyKind::Custom(constraints) => {
            for c in &constraints {
                check_mean_pair(c.v.space(), &c.u, &c.v)?;
            }
            Ok(ElementaryProperty { constraints, direct: None })
        }
    }
}

fn eq_check(check: &mut Check, a: Result<VPValue>, b: Result<VPValue>, ctx: impl FnOnce() -> String) {
    match (a, b) {
        (Ok(a), Ok(b)) => check.record(a == b, || format!("{}: {a} vs {b}", ctx())),
        (Err(e), _) | (_, Err(e)) => check.fail(|| format!("{}: {e}", ctx())),
    }
}

/// Checks every constraint and direct identity exactly. For invariance the
/// five equivalent formulations are checked separately and must agree.
pub fn check_property(r: &dyn VectorPricing, prop: &ElementaryProperty) -> Report {
    let mut report = Report::new(format!("elementary property: {}", r.describe()));
    let mut cyl = Check::new("cylinder constraints");
    for c in &prop.constraints {
        match r.price(&c.u, &c.v) {
            Ok(VPValue::Finite(x)) => cyl.record(c.allowed.contains(&x), || {
                format!("P({} | {}) = {} not in {}", c.u, c.v, format_rational(&x), c.allowed)
            }),
            Ok(VPValue::Infinite) => cyl.fail(|| format!("P({} | {}) = inf", c.u, c.v)),
            Err(e) => cyl.fail(|| format!("P({} | {}): {e}", c.u, c.v)),
        }
    }
    report.push(cyl);
    match &prop.direct {
        None => {}
        Some(Direct::Invariance { action, elements, probes }) => {
            report.extend(invariance_conditions(r, action, elements, probes))
        }
        Some(Direct::Equivariance { action, elements, probes }) => {
            let mut c = Check::new("equivariance r(gu, gv) = r(u, v)");
            for (i, u) in probes.iter().enumerate() {
                let v = &probes[(i + 1) % probes.len()];
                for g in elements {
                    let (gu, gv) = match (action.act(g, u), action.act(g, v)) {
                        (Ok(a), Ok(b)) => (a, b),
                        (Err(e), _) | (_, Err(e)) => {
                            c.fail(|| e.to_string());
                            continue;
                        }
                    };
                    eq_check(&mut c, r.price(&gu, &gv), r.price(u, v), || {
                        format!("g = {}, u = {u}, v = {v}", action.group().format_element(g))
                    });
                }
            }
            report.push(c);
        }
        Some(Direct::Stationarity { measure, probes }) => {
            let mut c = Check::new("stationarity r(mu * u, v) = r(u, v)");
            for (i, u) in probes.iter().enumerate() {
                let mu_u = match mu_apply(measure, u) {
                    Ok(x) => x,
                    Err(e) => {
                        c.fail(|| e.to_string());
                        continue;
                    }
                };
                for v in [u, &probes[(i + 1) % probes.len()]] {
                    eq_check(&mut c, r.price(&mu_u, v), r.price(u, v), || format!("u = {u}, v = {v}"));
                }
            }
            report.push(c);
        }
    }
    report
}

/// The five equivalent forms of invariance, each checked on the probes:
/// (i) `r(u,v) = r(gu,v)`, (ii) `r(u,v) = r(u,gv)`, (iii) `r(u,v) =
/// r(gu,hv)`, (iv) `r(u,gu) = 1`, (v) `r(u,u+gu) = 1/2`.
fn invariance_conditions(r: &dyn VectorPricing, action: &Action, elements: &[Element], probes: &[Vector]) -> Report {
    let mut checks = [
        Check::new("invariance (i) r(u, v) = r(gu, v)"),
        Check::new("invariance (ii) r(u, v) = r(u, gv)"),
        Check::new("invariance (iii) r(u, v) = r(gu, hv)"),
        Check::new("invariance (iv) r(u, gu) = 1"),
        Check::new("invariance (v) r(u, u + gu) = 1/2"),
    ];
    let half = VPValue::Finite(Rational::new(1.into(), 2.into()));
    let fmt_g = |g: &Element| action.group().format_element(g);
    for (i, u) in probes.iter().enumerate() {
        let v = &probes[(i + 1) % probes.len()];
        for (k, g) in elements.iter().enumerate() {
            let h = &elements[(k + 1) % elements.len()];
            let acted = action.act(g, u).and_then(|gu| Ok((gu, action.act(g, v)?, action.act(h, v)?)));
            let (gu, gv, hv) = match acted {
                Ok(x) => x,
                Err(e) => {
                    checks[0].fail(|| e.to_string());
                    continue;
                }
            };
            let ctx = || format!("g = {}, u = {u}, v = {v}", fmt_g(g));
            let base = r.price(u, v);
            eq_check(&mut checks[0], base.clone(), r.price(&gu, v), ctx);
            eq_check(&mut checks[1], base.clone(), r.price(u, &gv), ctx);
            eq_check(&mut checks[2], base, r.price(&gu, &hv), || format!("h = {}, {}", fmt_g(h), ctx()));
            eq_check(&mut checks[3], r.price(u, &gu), Ok(VPValue::one()), ctx);
            if !u.is_zero() {
                let sum = u.try_add(&gu).expect("same space");
                eq_check(&mut checks[4], r.price(u, &sum), Ok(half.clone()), ctx);
            }
        }
    }
    let verdicts: Vec<bool> = checks.iter().map(Check::passed).collect();
    let mut agree = Check::new("invariance conditions (i)-(v) agree");
    agree.record(verdicts.iter().all(|&b| b == verdicts[0]), || {
        format!("verdicts (i)-(v) = {verdicts:?}; the conditions are equivalent, so this indicates a bug")
    });
    let mut report = Report::new("invariance");
    for c in checks {
        report.push(c);
    }
    report.push(agree);
    report
}
