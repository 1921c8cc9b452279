//! Return probabilities, spectral-radius lower bounds, truncated Green
//! functions and the Green-function obstruction to stationary pricings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::measure::{mu_apply, Walk, WalkState};
use crate::groups::{Element, GroupHandle, Measure};
use crate::order::{Space, Vector};
use crate::rational::{format_rational, serde_str, to_f64, Rational};
use crate::report::{Check, Report};

/// One term of the spectral-radius lower-bound sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBound {
    pub n: usize,
    /// `mu^{*2n}(e)`, exact.
    #[serde(with = "serde_str")]
    pub p2n: Rational,
    /// `p2n^(1/2n)`, rendered only.
    pub lower: f64,
}

/// Compares `a^(1/i)` with `b^(1/j)` for positive rationals by comparing
/// `a^j` with `b^i`.
pub fn root_cmp(a: &Rational, i: usize, b: &Rational, j: usize) -> Ordering {
    let lhs: Rational = Pow::pow(a, j as u32);
    let rhs: Rational = Pow::pow(b, i as u32);
    lhs.cmp(&rhs)
}

fn walk_states(mu: &Measure, n_max: usize, cap: usize, mut visit: impl FnMut(&WalkState)) -> Result<()> {
    let walk = Walk::new(mu)?;
    let mut state = walk.start();
    visit(&state);
    for _ in 0..n_max {
        state = walk.step(&state, cap)?;
        visit(&state);
    }
    Ok(())
}

fn self_pairing(state: &WalkState) -> Rational {
    let sum = state.counts.values().fold(BigUint::zero(), |acc, c| acc + c * c);
    let d = &state.denom_pow * &state.denom_pow;
    Rational::new(BigInt::from(sum), BigInt::from(d))
}

/// `(p_{2n})^{1/2n}` for `1 <= n <= n_max`, with `p_{2n} = sum_x mu^{*n}(x)^2`
/// (which equals `mu^{*2n}(e)` for symmetric `mu`). Each term is a lower bound
/// for the spectral radius.
pub fn spectral_radius_bounds(mu: &Measure, n_max: usize, cap: usize) -> Result<Vec<SpectralBound>> {
    if !mu.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    let mut out = Vec::new();
    walk_states(mu, n_max, cap, |s| {
        if s.n > 0 {
            let p2n = self_pairing(s);
            let lower = to_f64(&p2n).powf(1.0 / (2 * s.n) as f64);
            out.push(SpectralBound { n: s.n, p2n, lower });
        }
    })?;
    Ok(out)
}

/// Whether the bound sequence strictly increases, decided exactly.
pub fn strictly_increasing(bounds: &[SpectralBound]) -> bool {
    bounds.windows(2).all(|w| root_cmp(&w[0].p2n, 2 * w[0].n, &w[1].p2n, 2 * w[1].n) == Ordering::Less)
}

/// Whether every bound stays at or below `rho`.
pub fn bounded_by(bounds: &[SpectralBound], rho: &Rational) -> bool {
    bounds.iter().all(|b| root_cmp(&b.p2n, 2 * b.n, rho, 1) != Ordering::Greater)
}

/// Kesten's spectral radius `sqrt(2k-1)/k` of the simple random walk on the
/// free group of rank `k`, rounded up to a multiple of `1/18000`.
pub fn kesten_rho_upper(k: usize) -> Rational {
    const SCALE: u64 = 18000;
    let t = BigUint::from(2 * k as u64 - 1) * BigUint::from(SCALE * SCALE);
    let mut s = t.sqrt();
    if &s * &s < t {
        s += 1u32;
    }
    let k = BigUint::from(k as u64);
    let m = (&s + &k - 1u32) / &k;
    Rational::new(BigInt::from(m), BigInt::from(SCALE))
}

fn green_numerators(
    mu: &Measure,
    z: &Rational,
    n: usize,
    cap: usize,
    mut visit: impl FnMut(&WalkState),
) -> Result<(HashMap<Element, BigUint>, BigUint)> {
    let (p, q) = positive_parts(z)?;
    let walk = Walk::new(mu)?;
    let qd = &q * &walk.denom;
    let mut acc: HashMap<Element, BigUint> = HashMap::new();
    let mut state = walk.start();
    for k in 0..=n {
        if k > 0 {
            state = walk.step(&state, cap)?;
        }
        visit(&state);
        let factor = Pow::pow(&p, k as u32) * Pow::pow(&qd, (n - k) as u32);
        for (x, c) in &state.counts {
            *acc.entry(x.clone()).or_insert_with(BigUint::zero) += c * &factor;
        }
    }
    Ok((acc, Pow::pow(&qd, n as u32)))
}

fn positive_parts(z: &Rational) -> Result<(BigUint, BigUint)> {
    match (z.numer().to_biguint(), z.denom().to_biguint()) {
        (Some(p), Some(q)) if !p.is_zero() => Ok((p, q)),
        _ => Err(Error::InvalidInput(format!("z must be positive, got {z}"))),
    }
}

fn numerators_to_vector(group: &GroupHandle, nums: HashMap<Element, BigUint>, denom: &BigUint) -> Vector {
    let d = BigInt::from(denom.clone());
    let entries: BTreeMap<Element, Rational> =
        nums.into_iter().map(|(x, c)| (x, Rational::new(BigInt::from(c), d.clone()))).collect();
    Vector::from_entries(&Space::GroupFinSupp { group: group.clone() }, entries).expect("walk stays in the group")
}

/// `G_z^{(N)}(x) = sum_{n <= N} z^n mu^{*n}(x)`.
pub fn green_truncated(mu: &Measure, z: &Rational, n: usize, cap: usize) -> Result<Vector> {
    let (nums, denom) = green_numerators(mu, z, n, cap, |_| {})?;
    Ok(numerators_to_vector(mu.group(), nums, &denom))
}

/// Outcome of the exact check `z (mu * G^{(N)}) + delta_e = G^{(N+1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub points: usize,
    pub holds: bool,
    pub first_mismatch: Option<Element>,
}

/// Checks the truncated Green identity for given `G^{(N)}` and `G^{(N+1)}`
/// at every point of the union of the supports involved.
pub fn verify_green_identity(mu: &Measure, z: &Rational, g_n: &Vector, g_next: &Vector) -> Result<IdentityCheck> {
    let group = mu.group();
    let space = Space::GroupFinSupp { group: group.clone() };
    let lhs = mu_apply(mu, g_n)?.scale(z).try_add(&Vector::delta(&space, group.identity())?)?;
    let mut points: Vec<Element> = lhs.support_points();
    points.extend(g_next.support_points());
    points.sort();
    points.dedup();
    let first_mismatch = points.iter().find(|x| lhs.value_at(x) != g_next.value_at(x)).cloned();
    Ok(IdentityCheck { points: points.len(), holds: first_mismatch.is_none(), first_mismatch })
}

/// Computes both truncations and verifies the identity between them.
pub fn green_identity_check(mu: &Measure, z: &Rational, n: usize, cap: usize) -> Result<IdentityCheck> {
    let g_n = green_truncated(mu, z, n, cap)?;
    let g_next = green_truncated(mu, z, n + 1, cap)?;
    verify_green_identity(mu, z, &g_n, &g_next)
}

/// Exact evidence that no `mu`-stationary vector pricing exists on the
/// finitely supported functions: with `z rho < 1` the Green function is
/// bounded, and stationarity would force `1 = r(G, G) = r(mu * G, G) <= 1/z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub measure: Measure,
    #[serde(with = "serde_str")]
    pub z: Rational,
    #[serde(with = "serde_str")]
    pub rho_upper: Rational,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "serde_str")]
    pub z_rho: Rational,
    /// `1 / (1 - z rho_upper)`.
    #[serde(with = "serde_str")]
    pub geometric_bound: Rational,
    #[serde(with = "serde_str")]
    pub max_green: Rational,
    pub max_green_at: String,
    pub green_support: usize,
    pub geometric_bound_holds: bool,
    /// `mu^{*n}(x) <= rho_upper^n` at every support point, `n <= N`.
    pub decay_holds: bool,
    pub identity_points: usize,
    pub identity_holds: bool,
    pub contradiction: String,
}

/// Builds and checks an [`ObstructionCertificate`].
///
/// `rho_upper` is trusted as an upper bound for the spectral radius, but it
/// is cross-checked against the exact lower bounds `p_{2n}^{1/2n}`, `n <= N`;
/// a value below any of them is rejected.
pub fn obstruction_certificate(
    mu: &Measure,
    z: &Rational,
    rho_upper: &Rational,
    n: usize,
    cap: usize,
) -> Result<ObstructionCertificate> {
    mu.require_probability()?;
    if !mu.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    if *z <= Rational::one() {
        return Err(Error::PreconditionFailed(format!("need z > 1, got {}", format_rational(z))));
    }
    let z_rho = z * rho_upper;
    if z_rho >= Rational::one() {
        return Err(Error::PreconditionFailed(format!("need z * rho_upper < 1, got {}", format_rational(&z_rho))));
    }
    let mut decay_holds = true;
    let mut inconsistent = None;
    let (nums, denom) = green_numerators(mu, z, n + 1, cap, |s| {
        if s.n > n {
            return;
        }
        // max count / d^n <= (a/b)^n  <=>  max count * b^n <= a^n d^n
        let rho_n: Rational = Pow::pow(rho_upper, s.n as u32);
        let lhs = BigInt::from(s.max_count()) * rho_n.denom();
        let rhs = rho_n.numer() * BigInt::from(s.denom_pow.clone());
        if lhs > rhs {
            decay_holds = false;
        }
        if s.n > 0 && inconsistent.is_none() {
            let p2n = self_pairing(s);
            if root_cmp(&p2n, 2 * s.n, rho_upper, 1) == Ordering::Greater {
                inconsistent = Some((s.n, to_f64(&p2n).powf(1.0 / (2 * s.n) as f64)));
            }
        }
    })?;
    if let Some((k, lb)) = inconsistent {
        return Err(Error::PreconditionFailed(format!(
            "rho_upper = {} is below the certified lower bound p_{}^(1/{}) ~ {lb:.10}",
            format_rational(rho_upper),
            2 * k,
            2 * k
        )));
    }
    let g_next = numerators_to_vector(mu.group(), nums, &denom);
    let g_n = green_truncated(mu, z, n, cap)?;
    let identity = verify_green_identity(mu, z, &g_n, &g_next)?;

    let geometric_bound = (Rational::one() - &z_rho).recip();
    let (max_at, max_green) = g_n
        .as_sparse()
        .expect("finitely supported")
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(x, v)| (x.clone(), v.clone()))
        .expect("G contains delta_e");
    let geometric_bound_holds = max_green <= geometric_bound;
    let contradiction = format!(
        "a {}-stationary vector pricing r would give 1 = r(G, G) = r(mu * G, G) <= 1/z = {} < 1",
        mu,
        format_rational(&z.recip())
    );
    Ok(ObstructionCertificate {
        measure: mu.clone(),
        z: z.clone(),
        rho_upper: rho_upper.clone(),
        n,
        z_rho,
        geometric_bound,
        max_green,
        max_green_at: mu.group().format_element(&max_at),
        green_support: g_n.support_points().len(),
        geometric_bound_holds,
        decay_holds,
        identity_points: identity.points,
        identity_holds: identity.holds,
        contradiction,
    })
}

impl ObstructionCertificate {
    pub fn passed(&self) -> bool {
        self.geometric_bound_holds && self.decay_holds && self.identity_holds
    }

    /// Recomputes everything from the measure, `z`, `rho_upper` and `N`.
    pub fn replay(&self, cap: usize) -> Report {
        let mut report = Report::new("obstruction certificate replay");
        let mut c = Check::new("z > 1 and z * rho_upper < 1");
        c.record(
            self.z > Rational::one()
                && &self.z * &self.rho_upper < Rational::one()
                && self.z_rho == &self.z * &self.rho_upper,
            || format!("z = {}, rho_upper = {}", self.z, self.rho_upper),
        );
        report.push(c);
        let mut c = Check::new("recomputed certificate matches");
        match obstruction_certificate(&self.measure, &self.z, &self.rho_upper, self.n, cap) {
            Ok(fresh) => c.record(fresh == *self, || "recomputed fields differ".into()),
            Err(e) => c.fail(|| e.to_string()),
        }
        report.push(c);
        for (name, ok) in [
            ("green identity", self.identity_holds),
            ("geometric bound", self.geometric_bound_holds),
            ("decay bound", self.decay_holds),
        ] {
            let mut c = Check::new(name);
            c.record(ok, || "recorded as failing".into());
            report.push(c);
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::measure::DEFAULT_SUPPORT_CAP as CAP;
    use crate::rational::{int, rat};

    fn binomial(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn z_return_probabilities_match_path_counts() {
        let mu = Measure::simple_random_walk(&GroupHandle::integers()).unwrap();
        let bounds = spectral_radius_bounds(&mu, 12, CAP).unwrap();
        for b in &bounds {
            let n = b.n as u64;
            let expected = Rational::new(binomial(2 * n, n), BigInt::from(2).pow(2 * n as u32));
            assert_eq!(b.p2n, expected);
        }
        assert!(strictly_increasing(&bounds));
        assert!(bounds[11].lower > 0.9267 && bounds[11].lower < 0.9268);
    }

    #[test]
    fn kesten_constants() {
        assert_eq!(kesten_rho_upper(2), rat(15589, 18000));
        assert_eq!(kesten_rho_upper(1), int(1));
        for k in 1..6usize {
            let r = kesten_rho_upper(k);
            let lhs = &r * &r * int(k as i64 * k as i64);
            assert!(lhs >= int(2 * k as i64 - 1));
            let below = &r - rat(1, 18000);
            assert!(&below * &below * int((k * k) as i64) < int(2 * k as i64 - 1));
        }
    }

    #[test]
    fn green_small_values() {
        let mu = Measure::simple_random_walk(&GroupHandle::integers()).unwrap();
        let g = green_truncated(&mu, &rat(9, 8), 2, CAP).unwrap();
        // 1 + (9/8)^2 * 1/2
        assert_eq!(g.value_at(&Element::z(0)), rat(209, 128));
        assert_eq!(g.value_at(&Element::z(3)), int(0));
        let g0 = green_truncated(&mu, &rat(9, 8), 0, CAP).unwrap();
        assert_eq!(g0.support_points(), vec![Element::z(0)]);
    }

    #[test]
    fn green_identity_and_mutation() {
        let mu = Measure::simple_random_walk(&GroupHandle::integers()).unwrap();
        let z = rat(9, 8);
        for n in 0..=12 {
            assert!(green_identity_check(&mu, &z, n, CAP).unwrap().holds);
        }
        let g = green_truncated(&mu, &z, 4, CAP).unwrap();
        let next = green_truncated(&mu, &z, 5, CAP).unwrap();
        let bump = Vector::delta(next.space(), Element::z(2)).unwrap().scale(&rat(1, 1000));
        assert!(!verify_green_identity(&mu, &z, &g, &(&next + &bump)).unwrap().holds);
    }

    #[test]
    fn obstruction_on_z_is_rejected() {
        let mu = Measure::simple_random_walk(&GroupHandle::integers()).unwrap();
        let err = obstruction_certificate(&mu, &rat(21, 20), &rat(9, 10), 12, CAP).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
        let err = obstruction_certificate(&mu, &int(1), &rat(1, 2), 3, CAP).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
    }

    #[test]
    fn small_free_group_certificate() {
        let mu = Measure::simple_random_walk(&GroupHandle::Free(2)).unwrap();
        let cert = obstruction_certificate(&mu, &rat(9, 8), &kesten_rho_upper(2), 4, CAP).unwrap();
        assert!(cert.passed());
        assert!(cert.replay(CAP).passed());
        let json = serde_json::to_string(&cert).unwrap();
        let back: ObstructionCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        let mut bad = cert.clone();
        bad.max_green += int(1);
        assert!(!bad.replay(CAP).passed());
    }
}
