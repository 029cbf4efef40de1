//! Midpoint-radius ("ball") arithmetic over a [`Real`] scalar.
//!
//! The midpoint lives in the scalar `R`; the radius is an `f64` upper bound
//! on `|true − mid|`. Every operation widens the radius by the propagated
//! input error plus one rounding of the result, and radius arithmetic is
//! itself inflated slightly so that its own `f64` rounding stays on the safe
//! side.

use num_bigint::BigUint;

use crate::scalar::Real;

/// Inflation applied to every radius computation.
const SLACK: f64 = 1.0 + 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct Ball<R> {
    pub mid: R,
    pub rad: f64,
}

/// `|x|` as `f64`, rounded up.
fn mag<R: Real>(x: &R) -> f64 {
    x.to_f64().abs() * SLACK
}

impl<R: Real> Ball<R> {
    /// An exactly represented value.
    pub fn exact(mid: R) -> Self {
        Ball { mid, rad: 0.0 }
    }

    /// A value produced by one rounded operation.
    pub fn rounded(mid: R) -> Self {
        let rad = mag(&mid) * R::unit_roundoff();
        Ball { mid, rad }
    }

    pub fn int(v: u64) -> Self {
        // f64 represents integers exactly only up to 2^53.
        if R::NAME == "f64" && v > 1 << 53 {
            Ball::rounded(R::from_u64(v))
        } else {
            Ball::exact(R::from_u64(v))
        }
    }

    pub fn big(v: &BigUint) -> Self {
        Ball::rounded(R::from_biguint(v))
    }

    pub fn from_f64(v: f64) -> Self {
        Ball::exact(R::from_f64(v))
    }

    pub fn pi() -> Self {
        Ball::rounded(R::pi())
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        Ball::int(num).div(&Ball::int(den))
    }

    /// `ln v` for an exact positive integer.
    pub fn ln_int(v: u64) -> Self {
        assert!(v > 0, "ln of zero");
        if v == 1 {
            return Ball::exact(R::zero());
        }
        Ball::int(v).ln()
    }

    /// `ln v` for an exact positive big integer.
    pub fn ln_big(v: &BigUint) -> Self {
        let mid = R::ln_biguint(v);
        // Truncation of v to working precision plus one rounding of the log.
        let rad = (mag(&mid) + 2.0) * R::unit_roundoff() * SLACK;
        Ball { mid, rad }
    }

    fn widen(mid: R, rad: f64) -> Self {
        let rad = (rad + mag(&mid) * R::unit_roundoff()) * SLACK;
        Ball { mid, rad }
    }

    pub fn add(&self, o: &Self) -> Self {
        Ball::widen(self.mid.clone() + o.mid.clone(), self.rad + o.rad)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Ball::widen(self.mid.clone() - o.mid.clone(), self.rad + o.rad)
    }

    pub fn neg(&self) -> Self {
        Ball {
            mid: -self.mid.clone(),
            rad: self.rad,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let rad = mag(&self.mid) * o.rad + mag(&o.mid) * self.rad + self.rad * o.rad;
        Ball::widen(self.mid.clone() * o.mid.clone(), rad)
    }

    pub fn scale(&self, c: u64) -> Self {
        self.mul(&Ball::int(c))
    }

    /// Lower bound of `|mid| − rad`, as `f64`.
    fn low(&self) -> f64 {
        self.mid.to_f64().abs() / SLACK - self.rad
    }

    /// Panics if the divisor ball contains zero.
    pub fn div(&self, o: &Self) -> Self {
        let denom = o.low();
        assert!(denom > 0.0, "division by a ball containing zero");
        let q = self.mid.clone() / o.mid.clone();
        let rad = (self.rad + mag(&q) * o.rad) / denom;
        Ball::widen(q, rad)
    }

    /// Panics unless the ball is strictly positive.
    pub fn ln(&self) -> Self {
        let low = self.low();
        assert!(
            self.mid.is_positive() && low > 0.0,
            "ln of a ball reaching zero"
        );
        Ball::widen(self.mid.ln(), self.rad / low)
    }

    pub fn exp(&self) -> Self {
        let mid = self.mid.exp();
        // e^r − 1 ≤ 2r for r ≤ 1.
        assert!(self.rad <= 1.0, "exp of a wide ball");
        let rad = mag(&mid) * 2.0 * self.rad;
        Ball::widen(mid, rad)
    }

    pub fn sqrt(&self) -> Self {
        let mid = self.mid.sqrt();
        let rad = if self.rad == 0.0 {
            0.0
        } else {
            let low = self.low();
            assert!(low > 0.0, "sqrt of a ball reaching zero");
            self.rad / low.sqrt()
        };
        Ball::widen(mid, rad)
    }

    /// True when every point of the ball is `> 0`.
    pub fn certainly_positive(&self) -> bool {
        self.mid.is_positive() && self.low() > 0.0
    }

    /// True when every point of the ball is `< 0`.
    pub fn certainly_negative(&self) -> bool {
        self.mid < R::zero() && self.low() > 0.0
    }

    /// True when every point of the ball is `≥ 0`.
    pub fn certainly_nonnegative(&self) -> bool {
        self.mid >= R::zero() && self.low() >= 0.0
    }

    pub fn contains_zero(&self) -> bool {
        !self.certainly_positive() && !self.certainly_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Hp;

    #[test]
    fn radius_encloses_truth_for_f64() {
        // ln(3) + ln(7) − ln(21) is exactly zero.
        let b = Ball::<f64>::ln_int(3)
            .add(&Ball::ln_int(7))
            .sub(&Ball::ln_int(21));
        assert!(b.mid.abs() <= b.rad);
        assert!(b.rad < 1e-14);
    }

    #[test]
    fn hp_radius_is_tiny() {
        let b = Ball::<Hp>::ln_int(3)
            .add(&Ball::ln_int(7))
            .sub(&Ball::ln_int(21));
        assert!(b.contains_zero());
        assert!(b.rad < 1e-70);
        let e = Ball::<Hp>::int(1).exp().ln();
        assert!(e.sub(&Ball::int(1)).contains_zero());
    }

    #[test]
    fn division_and_sqrt() {
        let third = Ball::<Hp>::ratio(1, 3);
        let back = third.scale(3).sub(&Ball::int(1));
        assert!(back.contains_zero());
        let r = Ball::<Hp>::int(10).sqrt();
        assert!(r.mul(&r).sub(&Ball::int(10)).contains_zero());
        assert!(Ball::<Hp>::ratio(1, 7).certainly_positive());
        assert!(Ball::<Hp>::ratio(1, 7).neg().certainly_negative());
    }
}
