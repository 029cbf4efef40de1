//! Evaluation of the sunflower bounds Φ₀, Φ₁, Φ₂ and the weights `p_j`.
//!
//! Φ₀ is an exact integer. Φ₁ and Φ₂ overflow fixed-width types quickly, so
//! they are carried as [`LogValue`]s: a natural log with a certified error
//! radius. Φ₁ additionally has an exact form in `Q(√10)`.
//!
//! Every evaluator is generic over the scalar [`Real`]; use
//! [`crate::Precise`] for certified work and `f64` for fast estimates.

pub mod checks;
pub mod constants;
pub mod sweep;

use num_bigint::BigUint;
use serde::Serialize;

use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::surd::QuadSurd;

/// Validated bound parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundParams {
    pub k: u64,
    pub s: u64,
    pub epsilon: f64,
}

impl BoundParams {
    pub fn new(k: u64, s: u64, epsilon: f64) -> Result<Self> {
        check_k(k)?;
        if s == 0 {
            return Err(Error::invalid("s must be at least 1"));
        }
        check_epsilon(epsilon)?;
        Ok(BoundParams { k, s, epsilon })
    }
}

pub(crate) fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    Ok(())
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.125) {
        return Err(Error::invalid(format!(
            "epsilon must lie strictly between 0 and 1/8, got {epsilon}"
        )));
    }
    Ok(())
}

/// A nonnegative quantity stored as its natural log.
///
/// `Zero` stands for the value 0 (log −∞); the bounds take this value at
/// non-positive arguments.
#[derive(Clone, Debug, PartialEq)]
pub enum LogValue<R> {
    Zero,
    Positive(Ball<R>),
}

impl<R: Real> LogValue<R> {
    pub fn is_zero(&self) -> bool {
        matches!(self, LogValue::Zero)
    }

    /// The log of the value, `None` for zero.
    pub fn log_value(&self) -> Option<&R> {
        match self {
            LogValue::Zero => None,
            LogValue::Positive(b) => Some(&b.mid),
        }
    }

    /// Certified bound on the error of [`LogValue::log_value`].
    pub fn error_radius(&self) -> f64 {
        match self {
            LogValue::Zero => 0.0,
            LogValue::Positive(b) => b.rad,
        }
    }

    pub fn ball(&self) -> Option<&Ball<R>> {
        match self {
            LogValue::Zero => None,
            LogValue::Positive(b) => Some(b),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (LogValue::Positive(a), LogValue::Positive(b)) => LogValue::Positive(a.add(b)),
            _ => LogValue::Zero,
        }
    }

    /// `ln(self / other)`; `None` when either side is zero.
    pub fn ln_ratio(&self, other: &Self) -> Option<Ball<R>> {
        Some(self.ball()?.sub(other.ball()?))
    }

    /// Log as `f64`; `-inf` for zero.
    pub fn ln_f64(&self) -> f64 {
        self.log_value().map_or(f64::NEG_INFINITY, Real::to_f64)
    }
}

/// `Φ₀(s) = (k−1)^s · s!`, exactly.
pub fn phi0(k: u64, s: u64) -> Result<BigUint> {
    check_k(k)?;
    let e = u32::try_from(s).map_err(|_| Error::invalid("s is too large"))?;
    Ok(BigUint::from(k - 1).pow(e) * factorial(s))
}

pub fn phi0_log<R: Real>(k: u64, s: u64) -> Result<LogValue<R>> {
    let v = phi0(k, s)?;
    if v.bits() == 0 {
        return Ok(LogValue::Zero);
    }
    Ok(LogValue::Positive(Ball::ln_big(&v)))
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// `ln n!` from the exact factorial.
pub fn ln_factorial<R: Real>(n: u64) -> Ball<R> {
    Ball::ln_big(&factorial(n))
}

/// `√10 − 2`, the base of Φ₁.
pub fn phi1_base<R: Real>() -> Ball<R> {
    Ball::int(10).sqrt().sub(&Ball::int(2))
}

/// `δ = √10 − 3`.
pub fn delta<R: Real>() -> Ball<R> {
    Ball::int(10).sqrt().sub(&Ball::int(3))
}

/// `Φ₁(s) = (√10−2)² · (k/(√10−2))^s · s!`; zero for `s ≤ 0`.
pub fn phi1<R: Real>(k: u64, s: i64) -> Result<LogValue<R>> {
    check_k(k)?;
    if s <= 0 {
        return Ok(LogValue::Zero);
    }
    let s = s as u64;
    let ln_a = phi1_base::<R>().ln();
    let per = Ball::ln_int(k).sub(&ln_a);
    let ln = ln_a.scale(2).add(&per.scale(s)).add(&ln_factorial(s));
    Ok(LogValue::Positive(ln))
}

/// Φ₁ as an exact element of `Q(√10)`; zero for `s ≤ 0`.
pub fn phi1_exact(k: u64, s: i64) -> Result<QuadSurd> {
    check_k(k)?;
    if s <= 0 {
        return Ok(QuadSurd::from_int(0));
    }
    let e = u32::try_from(s).map_err(|_| Error::invalid("s is too large"))?;
    let a = &QuadSurd::root() - &QuadSurd::from_int(2);
    // 1/(√10−2) = (√10+2)/6
    let inv = &(&QuadSurd::root() + &QuadSurd::from_int(2)) / &QuadSurd::from_int(6);
    let scaled = &QuadSurd::from(BigUint::from(k)) * &inv;
    let fact = QuadSurd::from(factorial(s as u64));
    Ok(&(&a.pow(2) * &scaled.pow(e)) * &fact)
}

/// `p_j = ε · ln min(j, k)` for `j ≥ 2`, and `p_1 = ε`.
pub fn p_value<R: Real>(j: u64, k: u64, epsilon: f64) -> Result<Ball<R>> {
    if j == 0 {
        return Err(Error::invalid("j must be at least 1"));
    }
    check_k(k)?;
    check_epsilon(epsilon)?;
    let eps = Ball::from_f64(epsilon);
    if j == 1 {
        return Ok(eps);
    }
    Ok(eps.mul(&Ball::ln_int(j.min(k))))
}

/// `Φ₂(s) = k^s · s! / (p_1 ⋯ p_s)`; zero for `s ≤ 0`.
///
/// For `k = 1` every `p_j` with `j ≥ 2` vanishes, so Φ₂ is undefined there
/// and `s ≥ 2` is rejected.
pub fn phi2<R: Real>(k: u64, s: i64, epsilon: f64) -> Result<LogValue<R>> {
    check_k(k)?;
    check_epsilon(epsilon)?;
    if s <= 0 {
        return Ok(LogValue::Zero);
    }
    let s = s as u64;
    if k == 1 && s >= 2 {
        return Err(Error::invalid("phi2 needs k >= 2 when s >= 2 (p_j = 0)"));
    }
    let eps = Ball::<R>::from_f64(epsilon);
    let mut ln_p = eps.ln();
    for m in 2..=s.min(k) {
        ln_p = ln_p.add(&eps.mul(&Ball::ln_int(m)).ln());
    }
    if s > k {
        let tail = eps.mul(&Ball::ln_int(k)).ln();
        ln_p = ln_p.add(&tail.scale(s - k));
    }
    let ln = Ball::ln_int(k).scale(s).add(&ln_factorial(s)).sub(&ln_p);
    Ok(LogValue::Positive(ln))
}

/// The constant `c = e²/ε` produced by the appendix argument for the
/// upper bound on Φ₂.
pub fn appendix_c<R: Real>(epsilon: f64) -> Ball<R> {
    Ball::int(2).exp().div(&Ball::from_f64(epsilon))
}

/// `ln` of the composite bound
/// `(√10−2)² · [k · min(1/(√10−2), c/ln min(k,s))]^s · s!`.
pub fn composite_log<R: Real>(k: u64, s: u64, c: &Ball<R>) -> Result<Ball<R>> {
    if k < 2 || s < 2 {
        return Err(Error::invalid("composite bound needs k >= 2 and s >= 2"));
    }
    if !c.certainly_positive() {
        return Err(Error::invalid("c must be positive"));
    }
    let ln_a = phi1_base::<R>().ln();
    let first = ln_a.neg();
    let second = c.ln().sub(&Ball::ln_int(k.min(s)).ln());
    let factor = if second.mid < first.mid {
        second
    } else {
        first
    };
    Ok(ln_a
        .scale(2)
        .add(&Ball::ln_int(k).add(&factor).scale(s))
        .add(&ln_factorial(s)))
}

/// One named log-ratio between two bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogRatio {
    pub numerator: &'static str,
    pub denominator: &'static str,
    pub ln: f64,
    pub radius: f64,
}

/// All bounds at one `(k, s, ε)`, as natural logs.
#[derive(Clone, Debug)]
pub struct BoundComparison<R> {
    pub params: BoundParams,
    pub phi0: BigUint,
    pub ln_phi0: LogValue<R>,
    pub ln_phi1: LogValue<R>,
    pub ln_phi2: LogValue<R>,
    pub c: Ball<R>,
    pub ln_composite: Ball<R>,
}

impl<R: Real> BoundComparison<R> {
    /// Pairwise log-ratios among Φ₀, Φ₁, Φ₂ and the composite bound.
    pub fn ratios(&self) -> Vec<LogRatio> {
        let comp = LogValue::Positive(self.ln_composite.clone());
        let named = [
            ("phi0", &self.ln_phi0),
            ("phi1", &self.ln_phi1),
            ("phi2", &self.ln_phi2),
            ("composite", &comp),
        ];
        let mut out = Vec::new();
        for (i, (na, a)) in named.iter().enumerate() {
            for (nb, b) in &named[..i] {
                if let Some(r) = a.ln_ratio(b) {
                    out.push(LogRatio {
                        numerator: na,
                        denominator: nb,
                        ln: r.mid.to_f64(),
                        radius: r.rad,
                    });
                }
            }
        }
        out
    }
}

/// Evaluates every bound at `(k, s, ε)` with `c = e²/ε`.
pub fn compare_bounds<R: Real>(k: u64, s: u64, epsilon: f64) -> Result<BoundComparison<R>> {
    compare_bounds_with_c(k, s, epsilon, appendix_c(epsilon))
}

pub fn compare_bounds_with_c<R: Real>(
    k: u64,
    s: u64,
    epsilon: f64,
    c: Ball<R>,
) -> Result<BoundComparison<R>> {
    let params = BoundParams::new(k, s, epsilon)?;
    if k < 2 || s < 2 {
        return Err(Error::invalid("compare_bounds needs k >= 2 and s >= 2"));
    }
    let phi0_v = phi0(k, s)?;
    let ln_phi0 = LogValue::Positive(Ball::ln_big(&phi0_v));
    let si = s as i64;
    Ok(BoundComparison {
        params,
        phi0: phi0_v,
        ln_phi0,
        ln_phi1: phi1(k, si)?,
        ln_phi2: phi2(k, si, epsilon)?,
        ln_composite: composite_log(k, s, &c)?,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Hp;

    #[test]
    fn phi0_examples() {
        assert_eq!(phi0(3, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(phi0(2, 6).unwrap(), BigUint::from(720u32));
        assert_eq!(phi0(7, 1).unwrap(), BigUint::from(6u32));
        assert_eq!(phi0(1, 0).unwrap(), BigUint::from(1u32));
        assert!(phi0_log::<f64>(1, 3).unwrap().is_zero());
        assert!(phi0(0, 2).is_err());
    }

    #[test]
    fn phi1_two_is_twice_k_squared() {
        for k in 1..=20u64 {
            let v = phi1_exact(k, 2).unwrap();
            assert_eq!(v, QuadSurd::from_int(2 * k * k));
        }
        let ln = phi1::<Hp>(3, 2).unwrap();
        let b = ln.ball().unwrap().sub(&Ball::ln_int(18));
        assert!(b.contains_zero());
        assert!(phi1::<Hp>(3, 0).unwrap().is_zero());
    }

    #[test]
    fn phi1_direct_and_log_sum_agree() {
        let exact: Hp = phi1_exact(3, 3).unwrap().to_real();
        let direct = Ball::<Hp>::rounded(exact).ln();
        let logsum = phi1::<Hp>(3, 3).unwrap();
        let diff = direct.sub(logsum.ball().unwrap());
        assert!(diff.contains_zero());
        assert!(diff.rad < 1e-60);
    }

    #[test]
    fn p_value_examples() {
        let p: Ball<Hp> = p_value(1, 10, 0.1).unwrap();
        assert_eq!(p.mid, Hp::from_f64(0.1));
        let p5: Ball<Hp> = p_value(5, 10, 0.1).unwrap();
        let want = Ball::from_f64(0.1).mul(&Ball::ln_int(5));
        assert!(p5.sub(&want).contains_zero());
        let capped: Ball<Hp> = p_value(100, 10, 0.1).unwrap();
        let want = Ball::from_f64(0.1).mul(&Ball::ln_int(10));
        assert!(capped.sub(&want).contains_zero());
        assert!(p_value::<f64>(0, 10, 0.1).is_err());
        assert!(p_value::<f64>(2, 10, 0.125).is_err());
    }

    #[test]
    fn phi2_single_factor_and_zero() {
        let v = phi2::<Hp>(7, 1, 0.1).unwrap();
        let want = Ball::<Hp>::int(7).div(&Ball::from_f64(0.1)).ln();
        assert!(v.ball().unwrap().sub(&want).contains_zero());
        assert!(phi2::<Hp>(7, 0, 0.1).unwrap().is_zero());
        assert!(phi2::<Hp>(7, -3, 0.1).unwrap().is_zero());
        assert!(phi2::<Hp>(1, 2, 0.1).is_err());
    }

    #[test]
    fn compare_small_cases() {
        let c = compare_bounds::<Hp>(10, 20, 0.1).unwrap();
        let r = c.ln_phi1.ln_ratio(&c.ln_phi0).unwrap();
        assert!(r.certainly_negative());
        let c = compare_bounds::<Hp>(3, 2, 0.1).unwrap();
        let r = c.ln_phi1.ln_ratio(&c.ln_phi0).unwrap();
        assert!(r.certainly_positive());
        assert_eq!(c.ratios().len(), 6);
        for (k, s) in [(2, 2), (5, 9), (40, 3), (300, 300)] {
            let c = compare_bounds::<Hp>(k, s, 0.05).unwrap();
            let d = c.ln_composite.sub(c.ln_phi1.ball().unwrap());
            assert!(!d.certainly_positive());
        }
    }
}
