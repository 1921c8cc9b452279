//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails or exceeds its time budget.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use conemeans::chains::{build_builtin_chain, eval_chain_pricing, BuiltinChain, Chain, ChainPricing, Domain};
use conemeans::groups::{
    kesten_rho_upper, obstruction_certificate, root_cmp, spectral_radius_bounds, strictly_increasing, Action, Element,
    GroupHandle, Measure, ObstructionCertificate, DEFAULT_SUPPORT_CAP,
};
use conemeans::invariant::{build_invariant_chain, check_invariant_chain, indicator_invariance, FunctionalSupplier};
use conemeans::lattice::{band_projection, cp_to_cm, cp_validate, extend_cm_global, from_measure_chain};
use conemeans::order::{Data, FunctionalSpec, PeriodicZ, Space, Vector};
use conemeans::pricing::{
    check_bijection, check_cm_axioms, check_property, check_vp_axioms, cm_from_vp, make_property,
    refute_signed_invariant, ConditionalMean, DynPricing, FaithfulQuotient, PropertyKind, SampleConfig, VPValue,
};
use conemeans::rational::{int, rat, Rational};
use conemeans::report::Report;
use conemeans::sample::Sampler;

type Outcome = Result<String, String>;

/// Name, time budget in seconds, and the check itself.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())),
    }
}

fn err(e: conemeans::Error) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- oracles

/// Three blocks of two coordinates, block 1 greatest, weights 1..6.
fn lex6_blocks() -> (Vec<Vec<usize>>, Vec<Rational>) {
    (vec![vec![0, 1], vec![2, 3], vec![4, 5]], (1..=6).map(int).collect())
}

fn lex_chain(size: usize, blocks: Vec<Vec<usize>>, weights: Option<Vec<Rational>>) -> Chain {
    build_builtin_chain(&BuiltinChain::Lexicographic { size, blocks, weights }).unwrap()
}

/// Lexicographic pricing from its definition: the first block where `u` or
/// `v` has weighted mass decides.
fn lex_oracle(blocks: &[Vec<usize>], weights: &[Rational], u: &Vector, v: &Vector) -> VPValue {
    let mass =
        |x: &Vector, b: &[usize]| -> Rational { b.iter().map(|&i| &weights[i] * x.value_at(&Element::Index(i))).sum() };
    for b in blocks {
        let (mu, mv) = (mass(u, b), mass(v, b));
        if mv.is_zero() && mu.is_zero() {
            continue;
        }
        return if mv.is_zero() { VPValue::Infinite } else { VPValue::Finite(mu / mv) };
    }
    if u.is_zero() && v.is_zero() {
        VPValue::one()
    } else {
        unreachable!("blocks cover the space")
    }
}

/// Value of a functional computed from its formula.
fn functional_oracle(j: &FunctionalSpec, v: &Vector) -> Rational {
    match (j, v.data()) {
        (FunctionalSpec::Weighted(w), _) => w.iter().map(|(p, c)| c * v.value_at(p)).sum(),
        (FunctionalSpec::Counting, Data::Sparse(m)) => m.values().sum(),
        (FunctionalSpec::Counting, Data::Periodic(p)) => p.core().iter().sum(),
        (FunctionalSpec::DensityZ, Data::Periodic(p)) => {
            let mean = |xs: &[Rational]| xs.iter().sum::<Rational>() / int(xs.len() as i64);
            (mean(p.left()) + mean(p.right())) / int(2)
        }
        other => panic!("no oracle for {other:?}"),
    }
}

/// Restricts `v` to the part lying in a domain of the form used by the
/// built-in chains.
fn restrict_to(domain: &Domain, v: &Vector) -> Vector {
    if domain.contains(v).unwrap() {
        return v.clone();
    }
    match v.data() {
        Data::Sparse(m) => {
            let keep =
                m.iter().filter(|(p, _)| domain.contains(&Vector::delta(v.space(), (*p).clone()).unwrap()).unwrap());
            Vector::from_entries(v.space(), keep.map(|(p, x)| (p.clone(), x.clone()))).unwrap()
        }
        Data::Periodic(p) => Vector::periodic(PeriodicZ::finite(p.core_start(), p.core().to_vec())),
        Data::Dense(_) => unreachable!(),
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Return probabilities `P(|X_n| = 0)` of simple random walk on the free
/// group of rank 2, through the distance process on the 4-regular tree.
fn free2_returns(steps: usize) -> Vec<Rational> {
    let mut dist = vec![Rational::one()];
    let mut out = vec![Rational::one()];
    for _ in 0..steps {
        let mut next = vec![Rational::zero(); dist.len() + 1];
        for (k, p) in dist.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if k == 0 {
                next[1] += p;
            } else {
                next[k + 1] += p * rat(3, 4);
                next[k - 1] += p * rat(1, 4);
            }
        }
        out.push(next[0].clone());
        dist = next;
    }
    out
}

fn z_ind(points: &[i64]) -> Vector {
    let space = Space::GroupFinSupp { group: GroupHandle::integers() };
    Vector::indicator(&space, &points.iter().map(|&n| Element::z(n)).collect::<Vec<_>>()).unwrap()
}

fn periodic(p: &[i64]) -> Vector {
    Vector::periodic(PeriodicZ::periodic(p.iter().map(|&x| int(x)).collect()))
}

fn x_ind(space: &Space, mask: u32) -> Vector {
    let n = match space {
        Space::FiniteCoord { size } => *size,
        _ => unreachable!(),
    };
    let pts: Vec<Element> = (0..n).filter(|i| mask & (1 << i) != 0).map(Element::Index).collect();
    Vector::indicator(space, &pts).unwrap()
}

// -------------------------------------------------------------- criteria

fn axiom_suite() -> Outcome {
    let (blocks, weights) = lex6_blocks();
    let r: DynPricing = Arc::new(ChainPricing::new(lex_chain(6, blocks.clone(), Some(weights.clone()))));
    let cfg = SampleConfig::new(2024, 1000);
    let vp = check_vp_axioms(&*r, &cfg).map_err(err)?;
    passed(&vp)?;
    let vp2 = vp.check("VP2 cocycle").unwrap();
    let total = vp2.evaluated + vp2.skipped;
    ensure(total == 1000, || format!("VP2 saw {total} instances"))?;
    ensure(vp2.skipped * 20 < total, || format!("VP2 skipped {} of {total}", vp2.skipped))?;
    let cm = check_cm_axioms(&*cm_from_vp(r.clone()), &cfg).map_err(err)?;
    passed(&cm)?;
    // Independent evaluation of the same pricing on fresh samples.
    let mut s = Sampler::new(99);
    let space = Space::finite(6).unwrap();
    for _ in 0..1000 {
        let (u, v) = (s.positive(&space), s.positive(&space));
        let got = r.price(&u, &v).map_err(err)?;
        let want = lex_oracle(&blocks, &weights, &u, &v);
        ensure(got == want, || format!("r({u}, {v}) = {got}, oracle {want}"))?;
    }
    Ok(format!("VP2 skipped {}/{total}", vp2.skipped))
}

fn bijection() -> Outcome {
    let (blocks, weights) = lex6_blocks();
    let z_pool: Vec<Element> = (-6..=6).map(Element::z).collect();
    let backends: Vec<(DynPricing, SampleConfig)> = vec![
        (Arc::new(ChainPricing::new(lex_chain(6, blocks, Some(weights)))), SampleConfig::new(1, 500)),
        (
            Arc::new(FaithfulQuotient::new(&Space::finite(5).unwrap(), FunctionalSpec::Counting).unwrap()),
            SampleConfig::new(2, 500),
        ),
        (Arc::new(ChainPricing::new(build_builtin_chain(&BuiltinChain::DensityZ).unwrap())), SampleConfig::new(3, 500)),
        (
            Arc::new(ChainPricing::new(build_builtin_chain(&BuiltinChain::RightmostZ { window: 6 }).unwrap())),
            SampleConfig::new(4, 500).within(z_pool),
        ),
    ];
    let n = backends.len();
    for (r, cfg) in backends {
        passed(&check_bijection(r, &cfg).map_err(err)?)?;
    }
    Ok(format!("{n} backends, 500 pairs each"))
}

fn chain_values() -> Outcome {
    let (blocks, weights) = lex6_blocks();
    let chains = [
        lex_chain(6, blocks, Some(weights)),
        build_builtin_chain(&BuiltinChain::DensityZ).unwrap(),
        build_builtin_chain(&BuiltinChain::RightmostZ { window: 6 }).unwrap(),
    ];
    // The rightmost chain only sees points inside its window.
    let mut samplers = [Sampler::new(7), Sampler::new(8), Sampler::new(9).within((-6..=6).map(Element::z).collect())];
    let mut checked = 0;
    while checked < 500 {
        let chain = &chains[checked % chains.len()];
        let s = &mut samplers[checked % chains.len()];
        let i = rand::Rng::gen_range(s.rng(), 0..chain.len());
        let pf = &chain.elements()[i];
        let u = restrict_to(pf.domain(), &s.positive(chain.space()));
        let v = restrict_to(pf.domain(), &s.positive(chain.space()));
        let jv = functional_oracle(pf.functional(), &v);
        if jv.is_zero() {
            continue;
        }
        let want = functional_oracle(pf.functional(), &u) / jv;
        let got = eval_chain_pricing(&ChainPricing::new(chain.clone()), &u, &v).map_err(err)?;
        ensure(got == VPValue::Finite(want.clone()), || {
            format!("{}: r({u}, {v}) = {got}, J ratio {want}", pf.label())
        })?;
        let handler = chain.handler(&u.try_add(&v).unwrap()).map_err(err)?;
        ensure(handler == Some(i), || format!("{}: u + v handled by {handler:?}", pf.label()))?;
        checked += 1;
    }
    Ok("500 samples across all chain elements".into())
}

fn density_pricing() -> DynPricing {
    Arc::new(ChainPricing::new(build_builtin_chain(&BuiltinChain::DensityZ).unwrap()))
}

fn invariance_on_z() -> Outcome {
    let r = density_pricing();
    let mut s = Sampler::new(11);
    let probes: Vec<Vector> = (0..200).map(|_| s.nonzero(&Space::PeriodicZ)).collect();
    let elements: Vec<Element> = (-10..=10).map(Element::z).collect();
    let prop = make_property(PropertyKind::Invariance { action: Action::shift_z(), elements, probes }).map_err(err)?;
    let report = check_property(&*r, &prop);
    passed(&report)?;
    for k in ["(i)", "(ii)", "(iii)", "(iv)", "(v)"] {
        ensure(report.checks.iter().any(|c| c.name.contains(k) && c.evaluated > 0), || format!("{k} not evaluated"))?;
    }
    let ones = periodic(&[1]);
    let d0 = Vector::periodic(PeriodicZ::delta(0, int(1)));
    let a = r.price(&d0, &ones).map_err(err)?;
    let b = r.price(&periodic(&[1, 0]), &ones).map_err(err)?;
    ensure(a == VPValue::zero() && b == VPValue::Finite(rat(1, 2)), || format!("witnesses {a}, {b}"))?;
    Ok("r(delta_0, 1) = 0, r(1_even, 1) = 1/2".into())
}

fn stationarity_on_z() -> Outcome {
    let r = density_pricing();
    let z = GroupHandle::integers();
    let mut s = Sampler::new(12);
    let probes: Vec<Vector> = (0..200).map(|_| s.nonzero(&Space::PeriodicZ)).collect();
    for mu in [Measure::simple_random_walk(&z).unwrap(), Measure::lazy_random_walk(&z).unwrap()] {
        let prop = make_property(PropertyKind::Stationarity { measure: mu, probes: probes.clone() }).map_err(err)?;
        passed(&check_property(&*r, &prop))?;
    }
    // The check has teeth: the rightmost-point pricing is not stationary.
    let rm: DynPricing =
        Arc::new(ChainPricing::new(build_builtin_chain(&BuiltinChain::RightmostZ { window: 6 }).unwrap()));
    let prop = make_property(PropertyKind::Stationarity {
        measure: Measure::simple_random_walk(&z).unwrap(),
        probes: vec![z_ind(&[0]), z_ind(&[0, 1])],
    })
    .map_err(err)?;
    ensure(!check_property(&*rm, &prop).passed(), || "rightmost pricing passed stationarity".into())?;
    Ok("SRW and lazy walk, 200 probes".into())
}

fn equivariance_not_invariance() -> Outcome {
    let r: DynPricing =
        Arc::new(ChainPricing::new(build_builtin_chain(&BuiltinChain::RightmostZ { window: 20 }).unwrap()));
    let action = Action::translation(GroupHandle::integers());
    let mut s = Sampler::new(13).within((-10..=10).map(Element::z).collect());
    let space = Space::GroupFinSupp { group: GroupHandle::integers() };
    let probes: Vec<Vector> = (0..200).map(|_| s.nonzero(&space)).collect();
    let elements: Vec<Element> = (-3..=3).map(Element::z).collect();
    let eq = make_property(PropertyKind::Equivariance {
        action: action.clone(),
        elements: elements.clone(),
        probes: probes.clone(),
    })
    .map_err(err)?;
    passed(&check_property(&*r, &eq))?;
    let inv = make_property(PropertyKind::Invariance { action, elements, probes }).map_err(err)?;
    ensure(!check_property(&*r, &inv).passed(), || "invariance unexpectedly passed".into())?;
    let a = r.price(&z_ind(&[0]), &z_ind(&[0, 1])).map_err(err)?;
    let b = r.price(&z_ind(&[1]), &z_ind(&[0, 1])).map_err(err)?;
    ensure(a == VPValue::zero() && b == VPValue::one(), || format!("witness values {a}, {b}"))?;
    Ok("r(1_{0}, 1_{0,1}) = 0 vs r(1_{1}, 1_{0,1}) = 1".into())
}

fn finite_group_builder() -> Outcome {
    let mut groups: Vec<GroupHandle> = (1..=12).map(GroupHandle::Cyclic).collect();
    groups.push(GroupHandle::Symmetric(3));
    let mut s = Sampler::new(17);
    for g in &groups {
        let action = Action::regular(g.clone()).map_err(err)?;
        let f: Vec<Vector> = (0..3).map(|_| s.nonzero(action.space())).collect();
        let built = build_invariant_chain(&action, &f, &FunctionalSupplier::builtin()).map_err(err)?;
        passed(&check_invariant_chain(&action, &f, &built).map_err(err)?)?;
        passed(&indicator_invariance(&built.chain, &action).map_err(err)?)?;
        // Transitive action: the mean of indicators is |A ∩ B| / |B|.
        let n = action.space().clone();
        let size = g.order().unwrap() as u32;
        if size <= 6 {
            let cp = ChainPricing::new(built.chain.clone());
            for b in 1..(1u32 << size) {
                for a in 1..(1u32 << size) {
                    let got = eval_chain_pricing(&cp, &x_ind(&n, a & b), &x_ind(&n, b)).map_err(err)?;
                    let want = rat((a & b).count_ones() as i64, b.count_ones() as i64);
                    ensure(got == VPValue::Finite(want), || format!("{g}: A = {a:#b}, B = {b:#b}"))?;
                }
            }
        }
    }
    Ok(format!("{} groups", groups.len()))
}

fn walk_numerics() -> Outcome {
    let z = GroupHandle::integers();
    let srw = Measure::simple_random_walk(&z).unwrap();
    let e = z.identity();
    for (n, want) in [(2usize, rat(1, 2)), (4, rat(3, 8))] {
        let got = srw.conv_power(n, DEFAULT_SUPPORT_CAP).map_err(err)?.weight(&e);
        ensure(got == want, || format!("mu^{n}(0) = {got}"))?;
    }
    let p24 = srw.conv_power(24, DEFAULT_SUPPORT_CAP).map_err(err)?.weight(&e);
    let want = Rational::new(binomial(24, 12), BigInt::one() << 24);
    ensure(p24 == want, || format!("mu^24(0) = {p24}, oracle {want}"))?;

    let bz = spectral_radius_bounds(&srw, 12, DEFAULT_SUPPORT_CAP).map_err(err)?;
    ensure(strictly_increasing(&bz), || "Z bounds not increasing".into())?;
    let last = bz.last().unwrap();
    ensure(root_cmp(&last.p2n, 2 * last.n, &rat(23, 25), 1).is_ge(), || format!("Z bound {} < 0.92", last.lower))?;

    let c6 = GroupHandle::Cyclic(6);
    let b6 =
        spectral_radius_bounds(&Measure::simple_random_walk(&c6).unwrap(), 30, DEFAULT_SUPPORT_CAP).map_err(err)?;
    ensure(strictly_increasing(&b6), || "Z/6 bounds not increasing".into())?;
    let last6 = b6.last().unwrap();
    ensure(root_cmp(&last6.p2n, 2 * last6.n, &rat(19, 20), 1).is_ge(), || format!("Z/6 bound {}", last6.lower))?;

    let f2 = GroupHandle::Free(2);
    let bf =
        spectral_radius_bounds(&Measure::simple_random_walk(&f2).unwrap(), 12, DEFAULT_SUPPORT_CAP).map_err(err)?;
    ensure(strictly_increasing(&bf), || "F_2 bounds not increasing".into())?;
    let kesten = kesten_rho_upper(2);
    ensure(kesten == rat(15589, 18000), || format!("closed-form cap {kesten}"))?;
    let radial = free2_returns(24);
    for b in &bf {
        ensure(b.p2n == radial[2 * b.n], || format!("F_2 p_{} = {}, oracle {}", 2 * b.n, b.p2n, radial[2 * b.n]))?;
        ensure(root_cmp(&b.p2n, 2 * b.n, &kesten, 1).is_le(), || format!("F_2 bound above cap at n = {}", b.n))?;
    }
    Ok(format!("Z {:.4}, Z/6 {:.4}, F_2 {:.4}", last.lower, last6.lower, bf.last().unwrap().lower))
}

fn obstruction() -> Outcome {
    let f2 = GroupHandle::Free(2);
    let mu = Measure::simple_random_walk(&f2).unwrap();
    let (z, rho) = (rat(9, 8), kesten_rho_upper(2));
    let cert = obstruction_certificate(&mu, &z, &rho, 10, DEFAULT_SUPPORT_CAP).map_err(err)?;
    ensure(cert.identity_holds && cert.geometric_bound_holds && cert.decay_holds, || format!("{cert:?}"))?;
    ensure(cert.geometric_bound == (Rational::one() - &z * &rho).recip(), || "geometric bound".into())?;
    // Green function at the identity from the distance process.
    let radial = free2_returns(10);
    let at_e: Rational = radial.iter().enumerate().map(|(n, p)| p * num_traits::Pow::pow(&z, n as u32)).sum();
    ensure(cert.max_green_at == "e" && cert.max_green == at_e, || {
        format!("max {} at {}, oracle {at_e}", cert.max_green, cert.max_green_at)
    })?;
    let json = serde_json::to_string(&cert).unwrap();
    let back: ObstructionCertificate = serde_json::from_str(&json).unwrap();
    passed(&back.replay(DEFAULT_SUPPORT_CAP))?;
    Ok(format!("{} identity points, G(e) = {:.6}", cert.identity_points, conemeans::rational::to_f64(&at_e)))
}

fn hyper_archimedean() -> Outcome {
    let space = Space::finite(8).unwrap();
    let mut s = Sampler::new(19);
    for _ in 0..300 {
        let v = s.nonzero(&space);
        let u = s.positive(&space);
        let bp = band_projection(&v, &u).map_err(err)?;
        let c = v.min_positive_value().unwrap();
        let q = u.max_value() / &c;
        let n_star = if q.is_integer() { q.to_integer() } else { q.floor().to_integer() + 1 };
        ensure(BigInt::from(bp.n_star) == n_star, || format!("n* = {} vs {n_star}", bp.n_star))?;
        for n in bp.n_star..bp.n_star + 3 {
            let nn = int(n as i64);
            for i in 0..8 {
                let p = Element::Index(i);
                let (ui, vi) = (u.value_at(&p), v.value_at(&p));
                let meet = ui.clone().min(&nn * &vi);
                let proj = if vi.is_zero() { Rational::zero() } else { ui };
                ensure(meet == proj && bp.projected.value_at(&p) == proj, || format!("u = {u}, v = {v}, n = {n}"))?;
            }
        }
        ensure(bp.is_stable(), || format!("unstable at u = {u}, v = {v}"))?;
    }
    let x5 = Space::finite(5).unwrap();
    let chain = lex_chain(5, vec![vec![0, 1], vec![2], vec![3, 4]], Some((1..=5).map(int).collect()));
    let p = cm_from_vp(Arc::new(ChainPricing::new(chain)));
    let mut pairs = 0;
    for a in 1u32..32 {
        for b in 1u32..32 {
            let ext = extend_cm_global(&*p, &x_ind(&x5, a), &x_ind(&x5, b)).map_err(err)?;
            let want = p.mean(&x_ind(&x5, a & b), &x_ind(&x5, b)).map_err(err)?;
            ensure(ext == want, || format!("A = {a:#b}, B = {b:#b}: {ext} vs {want}"))?;
            pairs += 1;
        }
    }
    Ok(format!("300 step-function pairs, {pairs} subset pairs"))
}

fn cp_lift() -> Outcome {
    let measures = vec![
        vec![int(1), int(1), int(0), int(0)],
        vec![int(0), int(0), int(2), int(0)],
        vec![int(0), int(0), int(0), int(1)],
    ];
    let table = from_measure_chain(4, &measures).map_err(err)?;
    passed(&cp_validate(&table))?;
    let mass =
        |m: &[Rational], set: u32| -> Rational { (0..4).filter(|i| set & (1 << i) != 0).map(|i| m[i].clone()).sum() };
    let lift = cp_to_cm(&table).map_err(err)?;
    let x4 = Space::finite(4).unwrap();
    let mut pairs = 0;
    for b in 1u32..16 {
        let m = measures.iter().find(|m| !mass(m, b).is_zero()).unwrap();
        for a in 1u32..16 {
            let oracle = mass(m, a & b) / mass(m, b);
            ensure(table.prob(a as u16, b as u16) == Some(oracle.clone()), || format!("table at {a:#b} | {b:#b}"))?;
            let got = if a & !b == 0 {
                lift.mean(&x_ind(&x4, a), &x_ind(&x4, b)).map_err(err)?
            } else {
                extend_cm_global(&lift, &x_ind(&x4, a), &x_ind(&x4, b)).map_err(err)?
            };
            ensure(got == oracle, || format!("lift at {a:#b} | {b:#b}: {got} vs {oracle}"))?;
            pairs += 1;
        }
    }
    passed(&check_cm_axioms(&lift, &SampleConfig::new(23, 300)).map_err(err)?)?;
    Ok(format!("{pairs} indicator pairs"))
}

fn no_signed_extension() -> Outcome {
    let mut cases: Vec<(GroupHandle, Element, String)> =
        [2, 3, 4, 6].into_iter().map(|q| (GroupHandle::Cyclic(q), Element::Index(1), format!("{q} = 0"))).collect();
    cases.push((GroupHandle::integers(), Element::z(1), "1 = -1".into()));
    cases.push((GroupHandle::integers(), Element::z(3), "1 = -1".into()));
    let mut corrupted = 0;
    for (g, x, statement) in cases {
        let cert = refute_signed_invariant(&g, &x).map_err(err)?;
        ensure(cert.statement == statement, || format!("{g}: statement {}", cert.statement))?;
        cert.replay().map_err(|e| format!("{g}: {e}"))?;
        for i in 0..cert.steps.len() {
            let mut bad = cert.clone();
            bad.steps[i].value += Rational::one();
            ensure(bad.replay().is_err(), || format!("{g}: corrupt step {i} accepted"))?;
            corrupted += 1;
        }
    }
    Ok(format!("{corrupted} corrupted certificates rejected"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("axiom suite", Some(10), axiom_suite),
        ("bijection", Some(5), bijection),
        ("chain values at handling elements", None, chain_values),
        ("invariance on Z", Some(10), invariance_on_z),
        ("stationarity on Z", None, stationarity_on_z),
        ("equivariance without invariance", None, equivariance_not_invariance),
        ("finite-group invariant builder", Some(10), finite_group_builder),
        ("random-walk numerics", Some(60), walk_numerics),
        ("obstruction certificate", Some(30), obstruction),
        ("hyper-Archimedean extension", None, hyper_archimedean),
        ("conditional probability lift", None, cp_lift),
        ("no signed invariant extension", None, no_signed_extension),
    ];
    let start = Instant::now();
    let mut failures = 0;
    let total = criteria.len();
    for (name, limit, run) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = t.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(s)) if took > Duration::from_secs(s) => Err(format!("took {took:.1?}, budget {s} s")),
            (o, _) => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => ("FAIL", e.as_str()),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!("{status} {name:<36} ({:.2} s) {detail}", took.as_secs_f64());
    }
    println!("acceptance: {} of {total} passed in {:.1} s", total - failures, start.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
