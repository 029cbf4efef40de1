//! Machine checks of the inequalities used by the bound proofs.
//!
//! Each checker compares both sides in log space with certified radii and
//! returns a [`CheckRecord`]. `holds` is true only when the inequality is
//! certified at the working precision; the margin is the smallest
//! (rhs-vs-lhs) gap in log space over the links of the inequality.

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{Map, Value};

use super::{check_epsilon, check_k, ln_factorial, phi2, Ball};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Outcome of one inequality check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    pub params: Map<String, Value>,
    pub holds: bool,
    /// Smallest certified gap in log space (negative when violated).
    pub margin: f64,
    /// Error radius attached to `margin`.
    pub radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub(crate) fn new(check: &'static str, params: &[(&str, Value)]) -> Self {
        let params = params
            .iter()
            .map(|(k, v)| ((*k).to_string(), v.clone()))
            .collect();
        CheckRecord {
            check,
            params,
            holds: true,
            margin: f64::INFINITY,
            radius: 0.0,
            note: None,
        }
    }

    /// Adds a link `gap > 0` (strict) or `gap ≥ 0` (non-strict).
    pub(crate) fn link<R: Real>(&mut self, gap: &Ball<R>, strict: bool) {
        let ok = if strict {
            gap.certainly_positive()
        } else {
            gap.certainly_nonnegative()
        };
        self.holds &= ok;
        let m = gap.mid.to_f64();
        if m < self.margin {
            self.margin = m;
            self.radius = gap.rad;
        }
    }

    /// Adds a link decided exactly.
    pub(crate) fn exact_link(&mut self, ok: bool) {
        self.holds &= ok;
    }
}

fn ok_n(v: u64) -> Value {
    Value::from(v)
}

/// `√(2πn) nⁿ e⁻ⁿ < n! ≤ √n nⁿ e^{−n+1}`.
///
/// At `n = 1` the upper bound is an equality (`1 = 1`); that case is
/// decided exactly.
pub fn check_stirling_double<R: Real>(n: u64) -> Result<CheckRecord> {
    if n == 0 {
        return Err(Error::invalid("stirling check needs n >= 1"));
    }
    Ok(stirling_with(n, &ln_factorial::<R>(n)))
}

pub(crate) fn stirling_with<R: Real>(n: u64, ln_fact: &Ball<R>) -> CheckRecord {
    let mut rec = CheckRecord::new("stirling", &[("n", ok_n(n))]);
    let ln_n = Ball::<R>::ln_int(n);
    let n_ln_n_minus_n = ln_n.scale(n).sub(&Ball::int(n));
    let two_pi_n = Ball::<R>::pi().scale(2 * n);
    let lower = two_pi_n.ln().div(&Ball::int(2)).add(&n_ln_n_minus_n);
    rec.link(&ln_fact.sub(&lower), true);
    if n == 1 {
        // 1! = 1 and √1 · 1¹ · e⁰ = 1 exactly.
        rec.exact_link(true);
        rec.note = Some("upper bound is an equality at n = 1, decided exactly".into());
    } else {
        let upper = ln_n
            .div(&Ball::int(2))
            .add(&n_ln_n_minus_n)
            .add(&Ball::int(1));
        rec.link(&upper.sub(ln_fact), false);
    }
    rec
}

/// `C(n,m) < nᵐ/m! < exp(m ln(n/m) + m − ln√(2πm)) < exp(m ln(n/m) + m)`.
///
/// The first link is decided exactly through `n!/(n−m)!` versus `nᵐ`. At
/// `m = 1` both equal `n`, so that link holds with equality there and is
/// strict for every `m ≥ 2`; the record notes the equality case.
pub fn check_binomial_bound<R: Real>(n: u64, m: u64) -> Result<CheckRecord> {
    if m == 0 || n < m {
        return Err(Error::invalid("binomial check needs n >= m >= 1"));
    }
    let mut falling = BigUint::from(1u32);
    for i in 0..m {
        falling *= n - i;
    }
    let power = BigUint::from(n).pow(u32::try_from(m).map_err(|_| Error::invalid("m too large"))?);
    let logs = BinomialLogs {
        ln_n: Ball::ln_int(n),
        ln_m: Ball::ln_int(m),
        ln_m_fact: ln_factorial::<R>(m),
        half_ln_2pi_m: half_ln_2pi(m),
    };
    Ok(binomial_with(n, m, &falling, &power, &logs))
}

/// `ln √(2πm)`.
pub(crate) fn half_ln_2pi<R: Real>(m: u64) -> Ball<R> {
    Ball::<R>::pi().scale(2 * m).ln().div(&Ball::int(2))
}

pub(crate) struct BinomialLogs<R> {
    pub ln_n: Ball<R>,
    pub ln_m: Ball<R>,
    pub ln_m_fact: Ball<R>,
    pub half_ln_2pi_m: Ball<R>,
}

pub(crate) fn binomial_with<R: Real>(
    n: u64,
    m: u64,
    falling: &BigUint,
    power: &BigUint,
    logs: &BinomialLogs<R>,
) -> CheckRecord {
    let mut rec = CheckRecord::new("binomial", &[("n", ok_n(n)), ("m", ok_n(m))]);
    if m == 1 {
        rec.exact_link(falling == power);
        rec.note = Some("C(n,1) = n^1/1! holds with equality at m = 1".into());
    } else {
        rec.exact_link(falling < power);
    }
    let middle = logs.ln_n.scale(m).sub(&logs.ln_m_fact);
    let base = logs.ln_n.sub(&logs.ln_m).scale(m).add(&Ball::int(m));
    let third = base.sub(&logs.half_ln_2pi_m);
    rec.link(&third.sub(&middle), true);
    rec.link(&base.sub(&third), true);
    rec
}

/// `Φ₂(s) > Φ₂(s−j) · exp(j ln(ks/p_s) − j²/s − 1)` for `1 ≤ j < s`.
pub fn check_stirling2_lemma<R: Real>(k: u64, s: u64, epsilon: f64, j: u64) -> Result<CheckRecord> {
    check_k(k)?;
    check_epsilon(epsilon)?;
    if j == 0 || j >= s {
        return Err(Error::invalid("stirling2 lemma needs 1 <= j < s"));
    }
    if k < 2 {
        return Err(Error::invalid("stirling2 lemma needs k >= 2"));
    }
    let hi = phi2::<R>(k, s as i64, epsilon)?;
    let lo = phi2::<R>(k, (s - j) as i64, epsilon)?;
    let diff = hi.ln_ratio(&lo).expect("positive bounds");
    let ln_ps = Ball::<R>::from_f64(epsilon)
        .mul(&Ball::ln_int(k.min(s)))
        .ln();
    let ln_ks = Ball::<R>::ln_int(k).add(&Ball::ln_int(s));
    Ok(stirling2_with(k, s, epsilon, j, &diff, &ln_ks.sub(&ln_ps)))
}

pub(crate) fn stirling2_with<R: Real>(
    k: u64,
    s: u64,
    epsilon: f64,
    j: u64,
    ln_phi2_ratio: &Ball<R>,
    ln_ks_over_ps: &Ball<R>,
) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "stirling2",
        &[
            ("k", ok_n(k)),
            ("s", ok_n(s)),
            ("epsilon", Value::from(epsilon)),
            ("j", ok_n(j)),
        ],
    );
    let rhs = ln_ks_over_ps
        .scale(j)
        .sub(&Ball::ratio(j * j, s))
        .sub(&Ball::int(1));
    rec.link(&ln_phi2_ratio.sub(&rhs), true);
    rec
}

/// `Σ_{i=2}^{s} ln ln i ≥ s ln ln s − 2s`, i.e. `ln 2 ⋯ ln s ≥ (ln s / e²)^s`.
pub fn check_phi2bound_product<R: Real>(s: u64) -> Result<CheckRecord> {
    if s < 3 {
        return Err(Error::invalid("product inequality needs s >= 3"));
    }
    let mut sum = Ball::<R>::exact(R::zero());
    for i in 2..=s {
        sum = sum.add(&Ball::ln_int(i).ln());
    }
    Ok(product_with(s, &sum, &Ball::ln_int(s).ln()))
}

pub(crate) fn product_with<R: Real>(s: u64, sum_lnln: &Ball<R>, lnln_s: &Ball<R>) -> CheckRecord {
    let mut rec = CheckRecord::new("product", &[("s", ok_n(s))]);
    let rhs = lnln_s.scale(s).sub(&Ball::int(2 * s));
    rec.link(&sum_lnln.sub(&rhs), false);
    rec
}

/// `Φ₂(s) ≤ (c k / ln min(k,s))^s · s!`, compared in log space.
///
/// `c = 0` makes the right side 0, so the check is false; negative `c` is
/// rejected.
pub fn check_phi2_upper<R: Real>(k: u64, s: u64, epsilon: f64, c: &Ball<R>) -> Result<CheckRecord> {
    check_epsilon(epsilon)?;
    if k < 2 || s < 2 {
        return Err(Error::invalid("phi2 upper bound needs k >= 2 and s >= 2"));
    }
    if c.certainly_negative() {
        return Err(Error::invalid("c must be nonnegative"));
    }
    let lhs = phi2::<R>(k, s as i64, epsilon)?;
    let lhs = lhs.ball().expect("positive bound");
    if !c.certainly_positive() {
        let mut rec = upper_record(k, s, epsilon, c);
        rec.holds = false;
        rec.margin = f64::NEG_INFINITY;
        rec.note = Some("right side is zero".into());
        return Ok(rec);
    }
    let ln_min = Ball::<R>::ln_int(k.min(s));
    Ok(phi2_upper_with(
        k,
        s,
        epsilon,
        c,
        lhs,
        &c.ln(),
        &Ball::ln_int(k),
        &ln_min.ln(),
        &ln_factorial(s),
    ))
}

fn upper_record<R: Real>(k: u64, s: u64, epsilon: f64, c: &Ball<R>) -> CheckRecord {
    CheckRecord::new(
        "phi2-upper",
        &[
            ("k", ok_n(k)),
            ("s", ok_n(s)),
            ("epsilon", Value::from(epsilon)),
            ("c", Value::from(c.to_f64())),
        ],
    )
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn phi2_upper_with<R: Real>(
    k: u64,
    s: u64,
    epsilon: f64,
    c: &Ball<R>,
    ln_phi2: &Ball<R>,
    ln_c: &Ball<R>,
    ln_k: &Ball<R>,
    lnln_min: &Ball<R>,
    ln_s_fact: &Ball<R>,
) -> CheckRecord {
    let mut rec = upper_record(k, s, epsilon, c);
    let rhs = ln_c.add(ln_k).sub(lnln_min).scale(s).add(ln_s_fact);
    rec.link(&rhs.sub(ln_phi2), false);
    rec
}

/// Default tolerance for the Φ₂ recurrence residual.
pub const RECURRENCE_TOLERANCE: f64 = 1e-20;

/// `ln Φ₂(s) − ln Φ₂(s−1) = ln(ks/p_s)`, with each Φ₂ summed from its
/// definition.
///
/// Holds when the computed residual lies inside its certified radius and
/// that radius is at most `tolerance`.
pub fn check_phi2_recurrence<R: Real>(
    k: u64,
    s: u64,
    epsilon: f64,
    tolerance: f64,
) -> Result<CheckRecord> {
    if k < 2 || s < 2 {
        return Err(Error::invalid("phi2 recurrence needs k >= 2 and s >= 2"));
    }
    let hi = phi2::<R>(k, s as i64, epsilon)?;
    let lo = phi2::<R>(k, s as i64 - 1, epsilon)?;
    let diff = hi.ln_ratio(&lo).expect("positive bounds");
    let ps = Ball::<R>::from_f64(epsilon).mul(&Ball::ln_int(k.min(s)));
    let step = Ball::<R>::int(k * s).div(&ps).ln();
    Ok(recurrence_with(k, s, epsilon, tolerance, &diff, &step))
}

pub(crate) fn recurrence_with<R: Real>(
    k: u64,
    s: u64,
    epsilon: f64,
    tolerance: f64,
    ln_phi2_ratio: &Ball<R>,
    ln_step: &Ball<R>,
) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "phi2-recurrence",
        &[
            ("k", ok_n(k)),
            ("s", ok_n(s)),
            ("epsilon", Value::from(epsilon)),
        ],
    );
    let resid = ln_phi2_ratio.sub(ln_step);
    let r = resid.mid.to_f64().abs();
    rec.holds = resid.contains_zero() && resid.rad <= tolerance && r <= tolerance;
    // Margin is the slack against the tolerance.
    rec.margin = tolerance - r;
    rec.radius = resid.rad;
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::appendix_c;
    use crate::scalar::Hp;

    #[test]
    fn stirling_small() {
        let r = check_stirling_double::<Hp>(1).unwrap();
        assert!(r.holds);
        assert!(r.note.is_some());
        // 1 − 0.9221...
        assert!((r.margin - (1.0f64.ln() - 0.922_137_0_f64.ln())).abs() < 1e-6);
        assert!(check_stirling_double::<Hp>(10).unwrap().holds);
        assert!(check_stirling_double::<Hp>(0).is_err());
    }

    #[test]
    fn binomial_examples() {
        let r = check_binomial_bound::<Hp>(4, 2).unwrap();
        assert!(r.holds);
        for m in 1..=30 {
            assert!(check_binomial_bound::<Hp>(m, m).unwrap().holds);
        }
        assert!(check_binomial_bound::<Hp>(7, 1).unwrap().note.is_some());
        assert!(check_binomial_bound::<Hp>(2, 3).is_err());
    }

    #[test]
    fn stirling2_example() {
        assert!(check_stirling2_lemma::<Hp>(10, 10, 0.1, 1).unwrap().holds);
        assert!(check_stirling2_lemma::<Hp>(10, 10, 0.1, 10).is_err());
    }

    #[test]
    fn product_examples() {
        assert!(check_phi2bound_product::<Hp>(3).unwrap().holds);
        assert!(check_phi2bound_product::<Hp>(2).is_err());
    }

    #[test]
    fn phi2_upper_examples() {
        let c = appendix_c::<Hp>(0.1);
        assert!(check_phi2_upper::<Hp>(5, 7, 0.1, &c).unwrap().holds);
        let zero = Ball::<Hp>::exact(Hp::from_u64(0));
        assert!(!check_phi2_upper::<Hp>(5, 7, 0.1, &zero).unwrap().holds);
        let twice = c.scale(2);
        assert!(check_phi2_upper::<Hp>(5, 7, 0.1, &twice).unwrap().holds);
    }

    #[test]
    fn recurrence_examples() {
        for (k, s) in [(2, 2), (10, 3), (3, 50), (200, 200)] {
            let r = check_phi2_recurrence::<Hp>(k, s, 0.05, RECURRENCE_TOLERANCE).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
