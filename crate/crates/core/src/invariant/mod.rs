//! Orbit ideals, invariant functional suppliers, and the inductive
//! construction of invariant chains.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::chains::{validate_chain, Chain, Domain, PartialFunctional};
use crate::error::{Error, Result};
use crate::groups::{mu_apply, Action, Element, Measure};
use crate::order::{cone_leq, functional_eval, ideal_contains, FunctionalSpec, Space, Vector};
use crate::rational::{format_rational, Rational};
use crate::report::{Check, Report};

/// Word-length radius of the probe ball used on infinite groups.
pub const PROBE_RADIUS: usize = 3;

/// Generators `g v` of the orbit ideal `V_{Gv}`, for `g` in the whole group
/// (finite groups) or in the ball of the given radius (a truncation).
pub fn orbit_ideal_generators(action: &Action, v: &Vector, radius: usize) -> Result<Vec<Vector>> {
    let mut out: Vec<Vector> = Vec::new();
    for g in action.probe_elements(radius) {
        let gv = action.act(&g, v)?;
        if !out.contains(&gv) {
            out.push(gv);
        }
    }
    Ok(out)
}

/// What the supplied functional must be invariant under.
#[derive(Clone, Debug)]
pub enum SupplierMode {
    Invariant,
    /// `J(mu * u) = J(u)`.
    Stationary(Measure),
}

/// Callback producing a partial functional on the orbit ideal of `w`.
pub type UserSupplier = Arc<dyn Fn(&Action, &Vector) -> Result<PartialFunctional> + Send + Sync>;

#[derive(Clone)]
pub enum SupplierSource {
    /// Counting over the orbit of the support on finite groups and on
    /// finitely supported functions; density or counting on `ep(Z)`.
    Builtin,
    User(UserSupplier),
}

/// Provides invariant partial functionals on orbit ideals. Every output,
/// including the builtin one, is checked against the contract.
#[derive(Clone)]
pub struct FunctionalSupplier {
    pub mode: SupplierMode,
    pub source: SupplierSource,
}

impl fmt::Debug for FunctionalSupplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = match self.source {
            SupplierSource::Builtin => "builtin",
            SupplierSource::User(_) => "user",
        };
        write!(f, "FunctionalSupplier({:?}, {src})", self.mode)
    }
}

impl FunctionalSupplier {
    pub fn builtin() -> Self {
        FunctionalSupplier { mode: SupplierMode::Invariant, source: SupplierSource::Builtin }
    }

    pub fn stationary(mu: Measure) -> Self {
        FunctionalSupplier { mode: SupplierMode::Stationary(mu), source: SupplierSource::Builtin }
    }

    pub fn user(mode: SupplierMode, f: UserSupplier) -> Self {
        FunctionalSupplier { mode, source: SupplierSource::User(f) }
    }
}

fn builtin_supply(action: &Action, w: &Vector) -> Result<PartialFunctional> {
    let space = action.space();
    match space {
        Space::PeriodicZ => {
            let p = w.as_periodic().expect("ep(Z) vector");
            let (left, right) = (!p.left_is_zero(), !p.right_is_zero());
            if left || right {
                PartialFunctional::new(space, Domain::Tails { left, right }, FunctionalSpec::DensityZ, "density")
            } else {
                PartialFunctional::new(space, Domain::finitely_supported(), FunctionalSpec::Counting, "counting")
            }
        }
        _ if action.group().is_finite() => {
            let gens = orbit_ideal_generators(action, w, 0)?;
            let points: BTreeSet<Element> = gens.iter().flat_map(Vector::support_points).collect();
            PartialFunctional::new(space, Domain::Ideal(gens), FunctionalSpec::uniform(points), "orbit counting")
        }
        // A non-zero finitely supported function generates every finitely
        // supported function under translations.
        Space::GroupFinSupp { .. } => {
            PartialFunctional::new(space, Domain::Whole, FunctionalSpec::Counting, "counting")
        }
        _ => Err(Error::UnsupportedSpace(format!("no builtin supplier for {} on {space}", action.group()))),
    }
}

/// Whether the domain of `pf` is the orbit ideal `V_{Gw}`.
fn is_orbit_ideal(action: &Action, pf: &PartialFunctional, w: &Vector) -> Result<bool> {
    let space = action.space();
    match (pf.domain(), space) {
        (Domain::Tails { left, right }, Space::PeriodicZ) => {
            let p = w.as_periodic().expect("ep(Z) vector");
            Ok(*left == !p.left_is_zero() && *right == !p.right_is_zero())
        }
        _ if action.group().is_finite() => {
            let orbit = orbit_ideal_generators(action, w, 0)?;
            let whole = match pf.domain() {
                Domain::Ideal(gens) => gens.clone(),
                Domain::Whole => match space {
                    Space::FiniteCoord { size } => {
                        vec![Vector::from_coords(space, &vec![Rational::one(); *size])?]
                    }
                    _ => {
                        let els = action.group().elements().expect("finite");
                        vec![Vector::indicator(space, &els)?]
                    }
                },
                Domain::Tails { .. } => return Ok(false),
            };
            for g in &whole {
                if !ideal_contains(&orbit, g)?.0 {
                    return Ok(false);
                }
            }
            for g in &orbit {
                if !pf.domain().contains(g)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Domain::Whole, Space::GroupFinSupp { .. }) => Ok(!w.is_zero()),
        _ => Ok(false),
    }
}

/// Obtains `(U, J)` for `w` and checks the contract: `U` is the orbit ideal
/// of `w`, `J(w) != 0`, and `J` is invariant (or stationary) on probes.
pub fn supply_functional(s: &FunctionalSupplier, action: &Action, w: &Vector) -> Result<PartialFunctional> {
    if w.is_zero() || !crate::order::is_positive(w) {
        return Err(Error::InvalidInput(format!("supplier needs a non-zero positive vector, got {w}")));
    }
    let pf = match &s.source {
        SupplierSource::Builtin => builtin_supply(action, w)?,
        SupplierSource::User(f) => f(action, w)?,
    };
    let violation = |msg: String| Err(Error::SupplierContractViolation(msg));
    if !is_orbit_ideal(action, &pf, w)? {
        return violation(format!("domain {} is not the orbit ideal of {w}", pf.domain()));
    }
    let jw = pf.eval(w)?;
    if !jw.is_positive() {
        return violation(format!("J(w) = {} for w = {w}", format_rational(&jw)));
    }
    let mut probes = vec![w.clone()];
    if let Domain::Ideal(gens) = pf.domain() {
        probes.extend(gens.iter().cloned());
    }
    for u in &probes {
        let ju = pf.eval(u)?;
        match &s.mode {
            SupplierMode::Invariant => {
                for g in action.probe_elements(PROBE_RADIUS) {
                    let gu = action.act(&g, u)?;
                    if pf.eval(&gu)? != ju {
                        return violation(format!(
                            "J(g u) != J(u) for g = {}, u = {u}",
                            action.group().format_element(&g)
                        ));
                    }
                }
            }
            SupplierMode::Stationary(mu) => {
                if pf.eval(&mu_apply(mu, u)?)? != ju {
                    return violation(format!("J(mu * u) != J(u) for u = {u}"));
                }
            }
        }
    }
    Ok(pf)
}

/// The output of [`build_invariant_chain`]: the chain and, for each element,
/// the sum of input vectors whose orbit ideal is its domain.
#[derive(Clone, Debug)]
pub struct InvariantChain {
    pub chain: Chain,
    pub sums: Vec<(String, Vector)>,
}

/// The inductive construction: with `w = sum F` take `(U, J)` from the
/// supplier, recurse on `F' = {v in F : J(v) = 0}`, and put `(U, J)` on top.
pub fn build_invariant_chain(action: &Action, f: &[Vector], s: &FunctionalSupplier) -> Result<InvariantChain> {
    if f.is_empty() {
        return Err(Error::InvalidInput("need at least one vector".into()));
    }
    let mut elements = Vec::new();
    let mut sums = Vec::new();
    let mut rest: Vec<Vector> = f.to_vec();
    while !rest.is_empty() {
        if rest.iter().any(|v| v.is_zero()) {
            return Err(Error::InvalidInput("input vectors must be non-zero".into()));
        }
        let w = Vector::sum(&rest).expect("non-empty");
        let pf = supply_functional(s, action, &w)?;
        let mut next = Vec::new();
        for v in rest {
            if pf.eval(&v)?.is_zero() {
                next.push(v);
            }
        }
        // J(w) != 0 guarantees progress.
        sums.push((pf.to_string(), w));
        elements.push(pf);
        rest = next;
    }
    Ok(InvariantChain { chain: validate_chain(elements)?, sums })
}

/// Re-checks the construction's guarantees independently: (a) every input
/// is handled by some element, (b) every domain is the orbit ideal of a sum
/// of inputs.
pub fn check_invariant_chain(action: &Action, f: &[Vector], built: &InvariantChain) -> Result<Report> {
    let mut report = Report::new("invariant chain construction");
    let mut a = Check::new("(a) every input is handled");
    for v in f {
        let handled = built.chain.elements().iter().map(|pf| pf.handles(v)).collect::<Result<Vec<_>>>()?;
        a.record(handled.iter().any(|&h| h), || format!("{v}"));
    }
    report.push(a);
    let mut b = Check::new("(b) domains are orbit ideals of input sums");
    for pf in built.chain.elements() {
        let found = built.sums.iter().find(|(label, _)| *label == pf.to_string());
        let ok = match found {
            Some((_, w)) => is_orbit_ideal(action, pf, w)? && is_sum_of_inputs(w, f),
            None => false,
        };
        b.record(ok, || pf.to_string());
    }
    report.push(b);
    let mut c = Check::new("result is a chain");
    c.record(validate_chain(built.chain.elements().to_vec()).is_ok(), || "validation failed".into());
    report.push(c);
    Ok(report)
}

fn is_sum_of_inputs(w: &Vector, f: &[Vector]) -> bool {
    // Subset sums; inputs are few.
    let n = f.len().min(20);
    (1u32..(1 << n)).any(|mask| {
        let mut acc = Vector::zero(w.space());
        for (i, v) in f.iter().enumerate().take(n) {
            if mask & (1 << i) != 0 {
                acc = &acc + v;
            }
        }
        acc == *w
    })
}

/// `P(u | v) = J(u) / J(v)` for the element `(U, J)` handling `v`.
pub fn chain_mean(chain: &Chain, u: &Vector, v: &Vector) -> Result<Rational> {
    let i = chain.handler(v)?.ok_or_else(|| Error::NotFullAt(v.to_string()))?;
    let pf = &chain.elements()[i];
    Ok(pf.eval(u)? / pf.eval(v)?)
}

/// Values of a chain's conditional mean on a finite window, with the
/// axioms and optional invariance checked exactly there.
#[derive(Clone, Debug)]
pub struct WindowMean {
    pub values: Vec<(Vector, Vector, Rational)>,
    pub report: Report,
}

/// Evaluates `P(u | v)` for all `u <= v`, `v != 0`, with `u, v` in `E` or
/// `E + E`, and verifies (CM1)-(CM3) there; with `invariance`, also
/// `P(gu | v) = P(u | v)` whenever `gu <= v`.
pub fn invariant_mean_on(chain: &Chain, e: &[Vector], invariance: Option<(&Action, &[Element])>) -> Result<WindowMean> {
    let mut window: Vec<Vector> = e.to_vec();
    for (i, a) in e.iter().enumerate() {
        for b in &e[i..] {
            window.push(a.try_add(b)?);
        }
    }
    window.dedup();
    for x in &window {
        if !x.is_zero() && chain.handler(x)?.is_none() {
            return Err(Error::NotFullAt(x.to_string()));
        }
    }
    let mut values = Vec::new();
    let mut range = Check::new("values in [0, 1]");
    for v in window.iter().filter(|v| !v.is_zero()) {
        for u in &window {
            if cone_leq(u, v)? {
                let p = chain_mean(chain, u, v)?;
                range.record(!p.is_negative() && p <= Rational::one(), || format!("P({u} | {v}) = {p}"));
                values.push((u.clone(), v.clone(), p));
            }
        }
    }
    let lookup = |u: &Vector, v: &Vector| chain_mean(chain, u, v);
    let mut cm1 = Check::new("CM1 additivity");
    let mut cm2 = Check::new("CM2 transitivity");
    let mut cm3 = Check::new("CM3 normalization");
    for w in window.iter().filter(|w| !w.is_zero()) {
        cm3.record(lookup(w, w)?.is_one(), || format!("{w}"));
        for a in &window {
            for b in &window {
                if cone_leq(&a.try_add(b)?, w)? {
                    let lhs = lookup(&a.try_add(b)?, w)?;
                    cm1.record(lhs == lookup(a, w)? + lookup(b, w)?, || format!("u1 = {a}, u2 = {b}, w = {w}"));
                }
                if !b.is_zero() && cone_leq(a, b)? && cone_leq(b, w)? {
                    let ok = lookup(a, w)? == lookup(a, b)? * lookup(b, w)?;
                    cm2.record(ok, || format!("u = {a}, v = {b}, w = {w}"));
                }
            }
        }
    }
    let mut report = Report::new("conditional mean on a finite window");
    for c in [range, cm1, cm2, cm3] {
        report.push(c);
    }
    if let Some((action, elements)) = invariance {
        let mut inv = Check::new("invariance P(gu | v) = P(u | v)");
        for (u, v, p) in &values {
            for g in elements {
                let gu = action.act(g, u)?;
                if cone_leq(&gu, v)? {
                    let q = chain_mean(chain, &gu, v)?;
                    inv.record(q == *p, || {
                        format!("g = {}, u = {u}, v = {v}: {q} vs {p}", action.group().format_element(g))
                    });
                }
            }
        }
        report.push(inv);
    }
    Ok(WindowMean { values, report })
}

/// Largest finite coordinate space for [`indicator_invariance`].
pub const MAX_INDICATOR_POINTS: usize = 12;

/// Exhaustive check on `Q^X`, `|X| <= 12`, acted on by a finite group: for
/// all nonempty `A ⊆ B`, `P(1_A | 1_B)` is computed from the chain element
/// handling `1_B`, then `P(1_{gA} | 1_B) = P(1_A | 1_B)` is checked for every
/// `g` with `gA ⊆ B`, along with `P(1_B | 1_B) = 1` and additivity.
pub fn indicator_invariance(chain: &Chain, action: &Action) -> Result<Report> {
    let n = match chain.space() {
        Space::FiniteCoord { size } if *size <= MAX_INDICATOR_POINTS => *size,
        other => return Err(Error::UnsupportedSpace(format!("indicator check needs Q^X with |X| <= 12, got {other}"))),
    };
    let elements = action
        .group()
        .elements()
        .ok_or_else(|| Error::UnsupportedSpace("indicator check needs a finite group".into()))?;
    let space = chain.space().clone();
    let delta = |i: usize| Vector::delta(&space, Element::Index(i));
    // perms[k][i] = j with g_k δ_i = δ_j.
    let mut perms = Vec::new();
    for g in &elements {
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            let image = action.act(g, &delta(i)?)?;
            match image.support_points().as_slice() {
                [Element::Index(j)] if image.value_at(&Element::Index(*j)).is_one() => row.push(*j),
                _ => return Err(Error::InvalidInput("action does not permute coordinates".into())),
            }
        }
        perms.push(row);
    }
    let apply =
        |perm: &[usize], a: u16| -> u16 { (0..n).filter(|i| a & (1 << i) != 0).fold(0u16, |m, i| m | (1 << perm[i])) };
    let indicator = |m: u16| -> Result<Vector> {
        let pts: Vec<Element> = (0..n).filter(|i| m & (1 << i) != 0).map(Element::Index).collect();
        Vector::indicator(&space, &pts)
    };
    let mut norm = Check::new("P(1_B | 1_B) = 1");
    let mut inv = Check::new("invariance P(1_gA | 1_B) = P(1_A | 1_B)");
    let mut direct = Check::new("agrees with the chain on singletons and B");
    let full: u16 = ((1u32 << n) - 1) as u16;
    // Per chain element: mass[a] = J(1_a) by additivity, and a small id per
    // distinct mass so the inner loop compares integers.
    let mut tables: BTreeMap<usize, (Vec<Rational>, Vec<u32>)> = BTreeMap::new();
    for b in 1..=full {
        let vb = indicator(b)?;
        let k = chain.handler(&vb)?.ok_or_else(|| Error::NotFullAt(vb.to_string()))?;
        let pf = &chain.elements()[k];
        if let std::collections::btree_map::Entry::Vacant(e) = tables.entry(k) {
            // Points outside the domain never occur below a handled B.
            let weights: Vec<Rational> = (0..n)
                .map(|i| {
                    let d = delta(i)?;
                    if pf.domain().contains(&d)? {
                        pf.eval(&d)
                    } else {
                        Ok(Rational::zero())
                    }
                })
                .collect::<Result<_>>()?;
            let mut mass = vec![Rational::zero(); 1 << n];
            for a in 1..(1usize << n) {
                mass[a] = &mass[a & (a - 1)] + &weights[a.trailing_zeros() as usize];
            }
            let mut ids = BTreeMap::new();
            let class = mass
                .iter()
                .map(|m| {
                    let next = ids.len() as u32;
                    *ids.entry(m).or_insert(next)
                })
                .collect();
            e.insert((mass, class));
        }
        let (mass, class) = &tables[&k];
        let jb = pf.eval(&vb)?;
        direct.record(jb == mass[b as usize], || format!("J(1_B) for B = {b:#b}"));
        norm.record((&mass[b as usize] / &jb).is_one(), || format!("B = {b:#b}"));
        let mut a = b;
        while a != 0 {
            for (perm, g) in perms.iter().zip(&elements) {
                let ga = apply(perm, a);
                if ga & !b == 0 {
                    inv.record(class[ga as usize] == class[a as usize], || {
                        format!("g = {}, A = {a:#b}, B = {b:#b}", action.group().format_element(g))
                    });
                }
            }
            a = (a - 1) & b;
        }
    }
    let mut report = Report::new("invariance on all indicator pairs");
    for c in [direct, norm, inv] {
        report.push(c);
    }
    Ok(report)
}

/// Checks `(mu * h)(g) = t h(g)` at the probes, where `h(g) = J(g v)` and
/// `(mu * h)(g) = sum_s mu(s) h(s^-1 g)`.
pub fn harmonic_from_functional(
    j: &PartialFunctional,
    v: &Vector,
    probes: &[Element],
    mu: &Measure,
    t: &Rational,
) -> Result<Report> {
    let action = Action::natural(mu.group(), j.space())?;
    let group = mu.group();
    let h = |g: &Element| -> Result<Rational> { j.eval(&action.act(g, v)?) };
    let mut check = Check::new(format!("(mu * h)(g) = {} h(g)", format_rational(t)));
    for g in probes {
        let mut lhs = Rational::zero();
        for (s, w) in mu.weights() {
            lhs += w * h(&group.mul(&group.inv(s), g))?;
        }
        let rhs = t * h(g)?;
        check.record(lhs == rhs, || {
            format!("g = {}: {} vs {}", group.format_element(g), format_rational(&lhs), format_rational(&rhs))
        });
    }
    // Same quantity through the functional: J(mu * (g v)) for symmetric mu.
    let mut via_j = Check::new("J(mu * (g v)) = t h(g)");
    if mu.is_symmetric() {
        for g in probes {
            let lhs = functional_eval(j.functional(), &mu_apply(mu, &action.act(g, v)?)?)?;
            via_j.record(lhs == t * h(g)?, || format!("g = {}", group.format_element(g)));
        }
    }
    let mut report = Report::new("harmonic function from a functional");
    report.push(check);
    report.push(via_j);
    Ok(report)
}
