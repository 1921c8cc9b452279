//! One function per subcommand; each returns the artifact text and whether
//! every mathematical check passed.

use serde_json::{json, Value};

use conemeans::chains::{check_fullness, check_fullness_within, ChainWire};
use conemeans::chains::{Domain, PartialFunctional};
use conemeans::groups::{
    bounded_by, green_identity_check, green_truncated, kesten_rho_upper, obstruction_certificate,
    spectral_radius_bounds, strictly_increasing, Action, Element, GroupHandle, ObstructionCertificate,
};
use conemeans::invariant::{
    build_invariant_chain, check_invariant_chain, harmonic_from_functional, indicator_invariance, invariant_mean_on,
    FunctionalSupplier,
};
use conemeans::lattice::{check_extension, cp_to_cm, cp_validate, extend_cm_global, from_measure_chain, CpTable};
use conemeans::order::{FunctionalSpec, PeriodicZ, Space, Vector};
use conemeans::pricing::{
    check_bijection, check_cm_axioms, check_property, check_vp_axioms, cm_from_vp, make_property, ConditionalMean,
    PropertyKind, RefutationCertificate, SampleConfig,
};
use conemeans::rational::{format_rational, parse_rational, Rational};
use conemeans::report::{Check, Report};
use conemeans::sample::Sampler;
use conemeans::{Error, Result};

use crate::inputs::{
    from_json, parse_group, parse_measure, parse_measures, parse_vector, read_file, select, select_chain, to_json,
};
use crate::{
    Backend, BackendArgs, CertificateCmd, ChainCmd, Cli, CmCmd, Cmd, Common, CpCmd, Format, HarmonicCmd, InvariantCmd,
    Outcome, PropertyCmd, PropertyKindArg, TableArgs, VpCmd, WalkArgs, WalkCmd,
};

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Vp(VpCmd::Check(b)) => vp_check(c, b),
        Cmd::Vp(VpCmd::Eval { backend, u, v }) => vp_eval(c, backend, u, v),
        Cmd::Vp(VpCmd::Roundtrip(b)) => {
            let sel = select(b)?;
            report(c, check_bijection(sel.pricing.clone(), &sel.config(c))?)
        }
        Cmd::Chain(ChainCmd::Validate(b)) => {
            let chain = select_chain(b)?;
            json_only(c, json!({ "valid": true, "chain": ChainWire::from_chain(&chain) }), true)
        }
        Cmd::Chain(ChainCmd::Fullness(b)) => chain_fullness(c, b),
        Cmd::Invariant(InvariantCmd::Build { group, vectors }) => invariant_build(c, group, vectors.as_deref()),
        Cmd::Invariant(InvariantCmd::Zdemo) => invariant_zdemo(c),
        Cmd::Property(PropertyCmd::Check { kind, backend, shifts, mu }) => property(c, *kind, backend, *shifts, mu),
        Cmd::Walk(w) => walk(c, w),
        Cmd::Harmonic(HarmonicCmd::Check { group, mu, t, radius }) => harmonic(c, group, mu, t, *radius),
        Cmd::Cm(CmCmd::Extend { backend, u, v }) => cm_extend(c, backend, u.as_deref(), v.as_deref()),
        Cmd::Cp(CpCmd::Validate(t)) => report(c, cp_validate(&load_table(t)?)),
        Cmd::Cp(CpCmd::Lift(t)) => cp_lift(c, t),
        Cmd::Negate { group, g } => negate(c, group, g),
        Cmd::Certificate(CertificateCmd::Replay { input }) => replay(c, &read_file(input)?),
    }
}

fn report(c: &Common, r: Report) -> Result<Outcome> {
    let passed = r.passed();
    let body = match c.format {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
    };
    Ok(Outcome { body, passed })
}

fn json_only(c: &Common, v: Value, passed: bool) -> Result<Outcome> {
    if c.format == Format::Csv {
        return Err(Error::InvalidInput("this command only emits JSON".into()));
    }
    Ok(Outcome { body: to_json(&v), passed })
}

fn csv_rows(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

fn vp_check(c: &Common, b: &BackendArgs) -> Result<Outcome> {
    let sel = select(b)?;
    let cfg = sel.config(c);
    let mut r = check_vp_axioms(&*sel.pricing, &cfg)?;
    r.extend(check_cm_axioms(&*cm_from_vp(sel.pricing.clone()), &cfg)?);
    report(c, r)
}

fn vp_eval(c: &Common, b: &BackendArgs, u: &str, v: &str) -> Result<Outcome> {
    let sel = select(b)?;
    let (u, v) = (parse_vector(u, &sel.space)?, parse_vector(v, &sel.space)?);
    let r = sel.pricing.price(&u, &v)?;
    match c.format {
        Format::Json => json_only(c, json!({ "u": u, "v": v, "r": r.to_string() }), true),
        Format::Csv => Ok(Outcome { body: csv_rows("r", [r.to_string()]), passed: true }),
    }
}

fn chain_fullness(c: &Common, b: &BackendArgs) -> Result<Outcome> {
    let sel = select(b)?;
    let chain = sel.chain.as_ref().ok_or_else(|| Error::InvalidInput("fullness needs a chain backend".into()))?;
    let f = match &sel.pool {
        Some(pool) => check_fullness_within(chain, pool)?,
        None => check_fullness(chain)?,
    };
    json_only(c, json!({ "full": f.full, "witness": f.witness }), f.full)
}

fn invariant_build(c: &Common, group: &str, vectors: Option<&std::path::Path>) -> Result<Outcome> {
    let group = parse_group(group)?;
    let action = Action::regular(group)?;
    let f: Vec<Vector> = match vectors {
        Some(p) => from_json(&read_file(p)?)?,
        None => {
            (0..action_len(&action)).map(|i| Vector::delta(action.space(), Element::Index(i))).collect::<Result<_>>()?
        }
    };
    let built = build_invariant_chain(&action, &f, &FunctionalSupplier::builtin())?;
    let mut r = check_invariant_chain(&action, &f, &built)?;
    r.extend(indicator_invariance(&built.chain, &action)?);
    let passed = r.passed();
    json_only(c, json!({ "chain": ChainWire::from_chain(&built.chain), "report": r }), passed)
}

fn action_len(a: &Action) -> usize {
    match a.space() {
        Space::FiniteCoord { size } => *size,
        _ => 0,
    }
}

fn invariant_zdemo(c: &Common) -> Result<Outcome> {
    let action = Action::shift_z();
    let one = |p: Vec<i64>| {
        Vector::periodic(PeriodicZ::periodic(p.into_iter().map(|x| Rational::from_integer(x.into())).collect()))
    };
    let ones = one(vec![1]);
    let even = one(vec![1, 0]);
    let odd = one(vec![0, 1]);
    let d0 = Vector::delta(&Space::PeriodicZ, Element::z(0))?;
    let d1 = Vector::delta(&Space::PeriodicZ, Element::z(1))?;
    let f = vec![ones.clone(), even.clone(), d0.clone()];
    let built = build_invariant_chain(&action, &f, &FunctionalSupplier::builtin())?;
    let shifts: Vec<Element> = (-3..=3).map(Element::z).collect();
    let window = vec![ones.clone(), even.clone(), odd, d0.clone(), d1];
    let mean = invariant_mean_on(&built.chain, &window, Some((&action, &shifts)))?;
    let mut r = check_invariant_chain(&action, &f, &built)?;
    r.extend(mean.report);
    let lookup =
        |u: &Vector| mean.values.iter().find(|(a, b, _)| a == u && *b == ones).map(|(_, _, p)| format_rational(p));
    let passed = r.passed();
    json_only(
        c,
        json!({
            "chain": ChainWire::from_chain(&built.chain),
            "P(1_even | 1)": lookup(&even),
            "P(delta_0 | 1)": lookup(&d0),
            "report": r,
        }),
        passed,
    )
}

fn property(c: &Common, kind: PropertyKindArg, b: &BackendArgs, shifts: i64, mu: &str) -> Result<Outcome> {
    let sel = select(b)?;
    let (action, probe_pool) = match b.backend {
        Backend::Density => (Action::shift_z(), None),
        Backend::Rightmost => {
            let inner = b.window - shifts;
            if inner < 0 {
                return Err(Error::InvalidInput(format!("--window must be at least --shifts ({shifts})")));
            }
            (Action::translation(GroupHandle::integers()), Some((-inner..=inner).map(Element::z).collect::<Vec<_>>()))
        }
        _ => {
            return Err(Error::InvalidInput(
                "property checks act by shifts on Z: use the density or rightmost backend".into(),
            ))
        }
    };
    let mut sampler = Sampler::new(c.seed);
    if let Some(pool) = probe_pool {
        sampler = sampler.within(pool);
    }
    let probes: Vec<Vector> = (0..c.samples).map(|_| sampler.nonzero(&sel.space)).collect();
    let elements: Vec<Element> = (-shifts..=shifts).map(Element::z).collect();
    let pk = match kind {
        PropertyKindArg::Invariance => PropertyKind::Invariance { action, elements, probes },
        PropertyKindArg::Equivariance => PropertyKind::Equivariance { action, elements, probes },
        PropertyKindArg::Stationarity => {
            PropertyKind::Stationarity { measure: parse_measure(mu, &GroupHandle::integers())?, probes }
        }
    };
    report(c, check_property(&*sel.pricing, &make_property(pk)?))
}

fn walk(c: &Common, w: &WalkCmd) -> Result<Outcome> {
    let setup = |a: &WalkArgs| -> Result<_> {
        let g = parse_group(&a.group)?;
        let mu = parse_measure(&a.mu, &g)?;
        Ok((g, mu))
    };
    match w {
        WalkCmd::Power(a) => {
            let (g, mu) = setup(a)?;
            let p = mu.conv_power(a.n, c.cap())?;
            let ret = format_rational(&p.weight(&g.identity()));
            match c.format {
                Format::Json => json_only(c, json!({ "N": a.n, "return_probability": ret, "measure": p }), true),
                Format::Csv => {
                    let rows =
                        p.weights().iter().map(|(x, q)| format!("{},{}", g.format_element(x), format_rational(q)));
                    Ok(Outcome { body: csv_rows("element,weight", rows), passed: true })
                }
            }
        }
        WalkCmd::Rho(a) => {
            let (g, mu) = setup(a)?;
            let bounds = spectral_radius_bounds(&mu, a.n, c.cap())?;
            let kesten = match g {
                GroupHandle::Free(k) if k >= 1 => Some(kesten_rho_upper(k)),
                _ => None,
            };
            let below = kesten.as_ref().map(|k| bounded_by(&bounds, k));
            let passed = below.unwrap_or(true);
            match c.format {
                Format::Json => json_only(
                    c,
                    json!({
                        "bounds": bounds,
                        "strictly_increasing": strictly_increasing(&bounds),
                        "kesten_upper": kesten.as_ref().map(format_rational),
                        "below_kesten_upper": below,
                    }),
                    passed,
                ),
                Format::Csv => {
                    let rows = bounds.iter().map(|b| format!("{},{},{:.12}", b.n, format_rational(&b.p2n), b.lower));
                    Ok(Outcome { body: csv_rows("n,p2n,lower", rows), passed })
                }
            }
        }
        WalkCmd::Green { walk: a, z } => {
            let (g, mu) = setup(a)?;
            let z = parse_rational(z)?;
            let green = green_truncated(&mu, &z, a.n, c.cap())?;
            let id = green_identity_check(&mu, &z, a.n, c.cap())?;
            let mismatch = id.first_mismatch.as_ref().map(|x| g.format_element(x));
            match c.format {
                Format::Json => json_only(
                    c,
                    json!({
                        "N": a.n,
                        "z": format_rational(&z),
                        "green": green,
                        "identity": { "points": id.points, "holds": id.holds, "first_mismatch": mismatch },
                    }),
                    id.holds,
                ),
                Format::Csv => {
                    let rows = green
                        .as_sparse()
                        .expect("finitely supported")
                        .iter()
                        .map(|(x, q)| format!("{},{}", g.format_element(x), format_rational(q)));
                    Ok(Outcome { body: csv_rows("element,green", rows), passed: id.holds })
                }
            }
        }
        WalkCmd::Obstruct { walk: a, z, rho } => {
            let (g, mu) = setup(a)?;
            let z = parse_rational(z)?;
            let rho = match (rho, &g) {
                (Some(r), _) => parse_rational(r)?,
                (None, GroupHandle::Free(k)) if *k >= 1 => kesten_rho_upper(*k),
                _ => return Err(Error::InvalidInput(format!("--rho is required for {g}"))),
            };
            let cert = obstruction_certificate(&mu, &z, &rho, a.n, c.cap())?;
            let passed = cert.passed();
            json_only(c, serde_json::to_value(&cert).expect("certificate serializes"), passed)
        }
    }
}

fn harmonic(c: &Common, group: &str, mu: &str, t: &str, radius: usize) -> Result<Outcome> {
    let g = parse_group(group)?;
    let mu = parse_measure(mu, &g)?;
    let t = parse_rational(t)?;
    let (space, probes) = match g.elements() {
        Some(els) => (Space::finite(els.len())?, els),
        None => (Space::GroupFinSupp { group: g.clone() }, g.ball(radius)),
    };
    let action = Action::natural(&g, &space)?;
    let v = action.act(&g.identity(), &Vector::delta(&space, first_point(&space, &g))?)?;
    let j = PartialFunctional::new(&space, Domain::Whole, FunctionalSpec::Counting, "counting")?;
    report(c, harmonic_from_functional(&j, &v, &probes, &mu, &t)?)
}

fn first_point(space: &Space, g: &GroupHandle) -> Element {
    match space {
        Space::FiniteCoord { .. } => Element::Index(0),
        _ => g.identity(),
    }
}

fn cm_extend(c: &Common, b: &BackendArgs, u: Option<&str>, v: Option<&str>) -> Result<Outcome> {
    let sel = select(b)?;
    if !matches!(sel.space, Space::FiniteCoord { .. }) {
        return Err(Error::InvalidInput("cm extend works on Q^X backends".into()));
    }
    let mean = cm_from_vp(sel.pricing.clone());
    match (u, v) {
        (Some(u), Some(v)) => {
            let (u, v) = (parse_vector(u, &sel.space)?, parse_vector(v, &sel.space)?);
            let p = extend_cm_global(&*mean, &u, &v)?;
            json_only(c, json!({ "u": u, "v": v, "P": format_rational(&p) }), true)
        }
        _ => report(c, check_extension(&*mean, &sel.config(c))?),
    }
}

fn load_table(t: &TableArgs) -> Result<CpTable> {
    match (&t.table, &t.measures) {
        (Some(p), _) => CpTable::from_json(&read_file(p)?),
        (None, Some(m)) => {
            let rows = parse_measures(m)?;
            from_measure_chain(rows.first().map_or(0, Vec::len), &rows)
        }
        (None, None) => Err(Error::InvalidInput("need --table or --measures".into())),
    }
}

fn cp_lift(c: &Common, t: &TableArgs) -> Result<Outcome> {
    let table = load_table(t)?;
    let mean = cp_to_cm(&table)?;
    let space = mean.space().clone();
    let n = table.ground();
    let mut restrict = Check::new("restriction to indicators reproduces the table");
    let ind = |m: u16| -> Result<Vector> {
        let pts: Vec<Element> = (0..n).filter(|i| m & (1 << i) != 0).map(Element::Index).collect();
        Vector::indicator(&space, &pts)
    };
    for b in 1..=table.full_mask() {
        let mut a = b;
        while a != 0 {
            let p = mean.mean(&ind(a)?, &ind(b)?)?;
            restrict.record(Some(&p) == table.prob(a, b).as_ref(), || format!("A = {a:#b}, B = {b:#b}"));
            a = (a - 1) & b;
        }
    }
    let mut r = check_cm_axioms(&mean, &SampleConfig::new(c.seed, c.samples))?;
    r.push(restrict);
    report(c, r)
}

fn negate(c: &Common, group: &str, g: &str) -> Result<Outcome> {
    let group = parse_group(group)?;
    let g = group.parse_element(g)?;
    let cert = conemeans::pricing::refute_signed_invariant(&group, &g)?;
    let passed = cert.replay().is_ok();
    json_only(c, serde_json::to_value(&cert).expect("certificate serializes"), passed)
}

fn replay(c: &Common, text: &str) -> Result<Outcome> {
    let value: Value = from_json(text)?;
    if value.get("steps").is_some() {
        let cert: RefutationCertificate = from_json(text)?;
        let mut check = Check::new("refutation replays");
        let outcome = cert.replay();
        check.record(outcome.is_ok(), || outcome.clone().unwrap_err());
        let mut r = Report::new(format!("refutation certificate: {}", cert.statement));
        r.push(check);
        return report(c, r);
    }
    let cert: ObstructionCertificate = from_json(text)?;
    report(c, cert.replay(c.cap()))
}
