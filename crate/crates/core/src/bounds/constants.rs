//! Constants of the two improved bounds: δ, the second bound's threshold c₁
//! and the matching ε*.

use std::sync::OnceLock;

use num_bigint::BigUint;

use super::{delta, phi1_base, Ball};
use crate::scalar::{Hp, Real};
use crate::surd::QuadSurd;

/// Derived quantities at a given `(k, s)`.
#[derive(Clone, Debug)]
pub struct DerivedConstants<R> {
    /// `δ = √10 − 3`.
    pub delta: Ball<R>,
    /// `x = k/(1+δ)`.
    pub x1: Ball<R>,
    /// `p = ln min(k,s) / 8`.
    pub p: Ball<R>,
    /// `k/p`; `None` when `p = 0` (`min(k,s) = 1`).
    pub x2: Option<Ball<R>>,
    /// `min(k,s)`.
    pub y: u64,
    pub thresholds: Thresholds,
}

/// The `(k,s)`-independent threshold constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds {
    /// Least real `p` above which all four fixed-coefficient inequalities hold.
    pub p_star: Hp,
    /// `8p³e^{−p} − 1/2` at `p = 9` and `p = 10` (sign change brackets p*).
    pub bracket: (Hp, Hp),
    /// Least admissible integer threshold on `min(k,s)`.
    pub c1: BigUint,
    /// `min(1/(2 ln c₁), 1/9)`.
    pub epsilon_star: Hp,
}

/// Computes δ, x, p, k/p and `min(k,s)`; thresholds are shared and cached.
pub fn derive_constants<R: Real>(k: u64, s: u64) -> DerivedConstants<R> {
    let d = delta::<R>();
    let kb = Ball::<R>::int(k);
    let x1 = kb.div(&Ball::int(1).add(&d));
    let y = k.min(s);
    let p = if y <= 1 {
        Ball::exact(R::zero())
    } else {
        Ball::ln_int(y).div(&Ball::int(8))
    };
    let x2 = (y > 1).then(|| kb.div(&p));
    DerivedConstants {
        delta: d,
        x1,
        p,
        x2,
        y,
        thresholds: thresholds().clone(),
    }
}

/// Shared threshold constants, computed once at 256-bit precision.
pub fn thresholds() -> &'static Thresholds {
    static CELL: OnceLock<Thresholds> = OnceLock::new();
    CELL.get_or_init(compute_thresholds)
}

fn hp(v: u64) -> Hp {
    Hp::from_u64(v)
}

/// `8p³e^{−p} − 1/2`, decreasing for `p > 3`.
pub fn cubic_gap(p: &Hp) -> Hp {
    hp(8) * p.clone() * p.clone() * p.clone() * (-p.clone()).exp() - Hp::ratio(1, 2)
}

/// `2p ln 2 − 1 − ln 8p`, increasing for `p > 1/(2 ln 2)`.
fn log_gap(p: &Hp) -> Hp {
    hp(2) * p.clone() * hp(2).ln() - hp(1) - (hp(8) * p.clone()).ln()
}

/// Bisects a sign change of `f` on `[lo, hi]`; `rising` says `f` goes from
/// negative to positive. Returns the upper end of the final bracket.
fn bisect(f: impl Fn(&Hp) -> Hp, mut lo: Hp, mut hi: Hp, rising: bool) -> Hp {
    for _ in 0..240 {
        let mid = (lo.clone() + hi.clone()) / hp(2);
        let v = f(&mid);
        if v.is_positive() == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn compute_thresholds() -> Thresholds {
    let bracket = (cubic_gap(&hp(9)), cubic_gap(&hp(10)));
    assert!(bracket.0.is_positive() && !bracket.1.is_positive());
    // 8p³e^{−p} < 1/2: falling through 1/2 inside (9, 10).
    let t_cubic = bisect(cubic_gap, hp(9), hp(10), false);
    // 2p ln 2 > 1 + ln 8p: rising through 0 inside (1, 10).
    let t_log = bisect(log_gap, hp(1), hp(10), true);
    // ln 2p < p holds for every p ≥ 1, as does p ≥ 1 itself.
    let p_star = t_cubic.max_of(t_log).max_of(hp(1));
    let mut c1 = (hp(8) * p_star.clone()).exp().to_biguint_floor() + 1u32;
    while !c1_k_condition(&c1) {
        c1 += 1u32;
    }
    let two_ln_c1 = hp(2) * Hp::ln_biguint(&c1);
    let epsilon_star = (hp(1) / two_ln_c1).min_with(Hp::ratio(1, 9));
    Thresholds {
        p_star,
        bracket,
        c1,
        epsilon_star,
    }
}

/// `ln k / (k/ln k − ln k + 1) < 1/2` at `k = c`.
pub fn c1_k_condition(c: &BigUint) -> bool {
    let ln_k = Hp::ln_biguint(c);
    let k = Hp::from_biguint(c);
    let denom = k / ln_k.clone() - ln_k.clone() + hp(1);
    denom.is_positive() && ln_k / denom < Hp::ratio(1, 2)
}

trait MinWith {
    fn min_with(self, other: Self) -> Self;
}

impl MinWith for Hp {
    fn min_with(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Residuals of the δ identities in the scalar `R`.
#[derive(Clone, Debug)]
pub struct DeltaIdentities<R> {
    /// `δ² + 6δ − 1`.
    pub polynomial: Ball<R>,
    /// `(1−δ)/(1+δ) − (1/3 + (1+δ)/3)`.
    pub chain: Ball<R>,
    /// Both identities hold exactly in `Q(√10)`.
    pub exact: bool,
}

pub fn delta_identities<R: Real>() -> DeltaIdentities<R> {
    let d = delta::<R>();
    let one = Ball::<R>::int(1);
    let polynomial = d.mul(&d).add(&d.scale(6)).sub(&one);
    let chain = one
        .sub(&d)
        .div(&one.add(&d))
        .sub(&Ball::ratio(1, 3).add(&one.add(&d).div(&Ball::int(3))));

    let de = &QuadSurd::root() - &QuadSurd::from_int(3);
    let onee = QuadSurd::from_int(1);
    let poly_exact = &(&(&de * &de) + &(&QuadSurd::from_int(6) * &de)) - &onee;
    let lhs = &(&onee - &de) / &(&onee + &de);
    let rhs = &QuadSurd::from_ratio(1, 3) + &(&(&onee + &de) / &QuadSurd::from_int(3));
    DeltaIdentities {
        polynomial,
        chain,
        exact: poly_exact.is_zero() && lhs == rhs,
    }
}

/// `1/(√10 − 2)`.
pub fn inverse_phi1_base<R: Real>() -> Ball<R> {
    Ball::int(1).div(&phi1_base())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_identities_hold() {
        let id = delta_identities::<Hp>();
        assert!(id.exact);
        let tol = Hp::from_f64(1e-30);
        assert!(id.polynomial.mid.abs() < tol && id.polynomial.contains_zero());
        assert!(id.chain.mid.abs() < tol && id.chain.contains_zero());
    }

    #[test]
    fn inverse_base_prints() {
        let v = inverse_phi1_base::<Hp>();
        assert!(v.mid.to_decimal(7).starts_with("8.603796e-1"));
    }

    #[test]
    fn thresholds_are_sane() {
        let t = thresholds();
        assert!(t.p_star > hp(9) && t.p_star < hp(10));
        assert!(t.bracket.0.is_positive() && !t.bracket.1.is_positive());
        assert!(cubic_gap(&(t.p_star.clone() + Hp::ratio(1, 1_000_000))) < Hp::zero());
        // c₁ exceeds e^72.
        assert!(Hp::from_biguint(&t.c1) > hp(72).exp());
        assert!(c1_k_condition(&t.c1));
        assert!(t.epsilon_star < Hp::ratio(1, 9));
    }

    #[test]
    fn derived_values() {
        let d = derive_constants::<Hp>(10, 3);
        assert_eq!(d.y, 3);
        let back = d.x1.mul(&Ball::int(1).add(&d.delta)).sub(&Ball::int(10));
        assert!(back.contains_zero());
        assert!(d.x2.is_some());
        assert!(derive_constants::<f64>(1, 5).x2.is_none());
    }
}
