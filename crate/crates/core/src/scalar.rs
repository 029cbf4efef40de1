//! Scalar types for bound evaluation.
//!
//! Bound arithmetic is generic over [`Real`]. Two implementations ship:
//! `f64` for quick estimates, and [`Hp`], a 256-bit binary float used for
//! every certified comparison. Each type reports a per-operation relative
//! error bound through [`Real::unit_roundoff`], which the log-space
//! accumulators use to carry error radii.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::BigUint;
use num_traits::{Float, ToPrimitive};

pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const NAME: &'static str;

    fn from_u64(v: u64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn pi() -> Self;
    fn abs(&self) -> Self;
    /// Relative error bound of one rounded elementary operation.
    fn unit_roundoff() -> f64;
    /// Nearest value to an exact integer.
    fn from_biguint(v: &BigUint) -> Self;
    /// Natural log of an exact integer (`v > 0`).
    fn ln_biguint(v: &BigUint) -> Self;

    fn zero() -> Self {
        Self::from_u64(0)
    }

    fn one() -> Self {
        Self::from_u64(1)
    }

    fn ratio(num: u64, den: u64) -> Self {
        Self::from_u64(num) / Self::from_u64(den)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const NAME: &'static str = "f64";

    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ln(&self) -> Self {
        Float::ln(*self)
    }

    fn exp(&self) -> Self {
        Float::exp(*self)
    }

    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }

    fn pi() -> Self {
        std::f64::consts::PI
    }

    fn abs(&self) -> Self {
        Float::abs(*self)
    }

    fn unit_roundoff() -> f64 {
        // libm transcendentals are within a couple of ulps.
        4.0 * f64::EPSILON
    }

    fn from_biguint(v: &BigUint) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }

    fn ln_biguint(v: &BigUint) -> Self {
        let bits = v.bits();
        if bits <= 1000 {
            return v.to_f64().unwrap_or(f64::INFINITY).ln();
        }
        let shift = bits - 64;
        let top = (v >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Working precision of [`Hp`], in bits.
pub const HP_PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// 256-bit binary floating-point number, round-to-nearest-even.
#[derive(Clone)]
pub struct Hp(BigFloat);

impl Hp {
    pub fn from_big(v: BigFloat) -> Self {
        Hp(v)
    }

    pub fn as_big(&self) -> &BigFloat {
        &self.0
    }

    /// Exact for integers below 2^128.
    pub fn from_u128(v: u128) -> Self {
        Hp(BigFloat::from_u128(v, HP_PRECISION))
    }

    pub fn powi(&self, n: usize) -> Self {
        Hp(self.0.powi(n, HP_PRECISION, RM))
    }

    pub fn ceil(&self) -> Self {
        Hp(self.0.ceil())
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let s = CONSTS.with(|c| {
            self.0
                .format(astro_float::Radix::Dec, RM, &mut c.borrow_mut())
                .unwrap_or_else(|_| "NaN".to_string())
        });
        truncate_mantissa(&s, digits)
    }

    /// Integer part as an exact big integer (`self ≥ 0`).
    pub fn to_biguint_floor(&self) -> BigUint {
        let (Some(words), Some(e)) = (self.0.mantissa_digits(), self.0.exponent()) else {
            return BigUint::default();
        };
        if self.0.is_zero() || !self.0.is_positive() {
            return BigUint::default();
        }
        // value = 0.M * 2^e, with M spread over little-endian 64-bit words.
        let limbs: Vec<u32> = words
            .iter()
            .flat_map(|&w| [w as u32, (w >> 32) as u32])
            .collect();
        let m = BigUint::new(limbs);
        let shift = i64::from(e) - 64 * words.len() as i64;
        if shift >= 0 {
            m << shift as u64
        } else {
            m >> (-shift) as u64
        }
    }

    fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }
}

/// Keeps `digits` significant digits of a `d.ddd...e±x` rendering.
fn truncate_mantissa(s: &str, digits: usize) -> String {
    let (mant, exp) = s.split_once('e').unwrap_or((s, "+0"));
    let (sign, body) = mant.strip_prefix('-').map_or(("", mant), |b| ("-", b));
    let mut out = String::from(sign);
    let mut count = 0;
    for ch in body.chars() {
        if ch == '.' {
            out.push(ch);
            continue;
        }
        if count == digits {
            break;
        }
        out.push(ch);
        count += 1;
    }
    format!("{}e{exp}", out.trim_end_matches('.'))
}

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hp({})", self.to_decimal(40))
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(f.precision().unwrap_or(30)))
    }
}

impl PartialEq for Hp {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Hp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for Hp {
    type Output = Hp;
    fn add(self, rhs: Hp) -> Hp {
        Hp(self.0.add(&rhs.0, HP_PRECISION, RM))
    }
}

impl Sub for Hp {
    type Output = Hp;
    fn sub(self, rhs: Hp) -> Hp {
        Hp(self.0.sub(&rhs.0, HP_PRECISION, RM))
    }
}

impl Mul for Hp {
    type Output = Hp;
    fn mul(self, rhs: Hp) -> Hp {
        Hp(self.0.mul(&rhs.0, HP_PRECISION, RM))
    }
}

impl Div for Hp {
    type Output = Hp;
    fn div(self, rhs: Hp) -> Hp {
        Hp(self.0.div(&rhs.0, HP_PRECISION, RM))
    }
}

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(self.0.neg())
    }
}

impl Real for Hp {
    const NAME: &'static str = "hp256";

    fn from_u64(v: u64) -> Self {
        Hp(BigFloat::from_u64(v, HP_PRECISION))
    }

    fn from_f64(v: f64) -> Self {
        Hp(BigFloat::from_f64(v, HP_PRECISION))
    }

    fn to_f64(&self) -> f64 {
        if !self.is_finite() {
            return if self.0.is_nan() {
                f64::NAN
            } else if self.0.is_positive() {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        let (Some(words), Some(e)) = (self.0.mantissa_digits(), self.0.exponent()) else {
            return 0.0;
        };
        let Some(&top) = words.last() else {
            return 0.0;
        };
        if top == 0 {
            return 0.0;
        }
        // value = 0.M · 2^e; the top word carries the leading 64 bits.
        let mag = top as f64 * 2f64.powi(e - 64);
        if self.0.is_negative() {
            -mag
        } else {
            mag
        }
    }

    fn ln(&self) -> Self {
        CONSTS.with(|c| Hp(self.0.ln(HP_PRECISION, RM, &mut c.borrow_mut())))
    }

    fn exp(&self) -> Self {
        CONSTS.with(|c| Hp(self.0.exp(HP_PRECISION, RM, &mut c.borrow_mut())))
    }

    fn sqrt(&self) -> Self {
        Hp(self.0.sqrt(HP_PRECISION, RM))
    }

    fn pi() -> Self {
        CONSTS.with(|c| Hp(c.borrow_mut().pi(HP_PRECISION, RM)))
    }

    fn abs(&self) -> Self {
        Hp(self.0.abs())
    }

    fn unit_roundoff() -> f64 {
        // Eight bits of slack over the working precision for the library's
        // transcendental routines.
        2f64.powi(8 - HP_PRECISION as i32)
    }

    fn from_biguint(v: &BigUint) -> Self {
        let (mant, shift) = top_bits(v);
        if shift == 0 {
            mant
        } else {
            mant * Hp::from_u64(2).powi(shift as usize)
        }
    }

    fn ln_biguint(v: &BigUint) -> Self {
        assert!(v.bits() > 0, "ln of zero");
        let (mant, shift) = top_bits(v);
        let ln = mant.ln();
        if shift == 0 {
            ln
        } else {
            ln + Hp::from_u64(shift) * Hp::from_u64(2).ln()
        }
    }
}

/// Splits `v` as `mant · 2^shift` with `mant` holding the top 256 bits
/// (exact at working precision; the discarded tail is below 2^-255 relative).
fn top_bits(v: &BigUint) -> (Hp, u64) {
    let bits = v.bits();
    let shift = bits.saturating_sub(HP_PRECISION as u64);
    let top = v >> shift;
    let hi = (&top >> 128u32).to_u128().expect("128 bits");
    let lo = (&top & BigUint::from(u128::MAX))
        .to_u128()
        .expect("128 bits");
    let mant = if hi == 0 {
        Hp::from_u128(lo)
    } else {
        Hp::from_u128(hi) * Hp::from_u128(1u128 << 127) * Hp::from_u64(2) + Hp::from_u128(lo)
    };
    (mant, shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hp_basic_constants() {
        let ten = Hp::from_u64(10);
        let r = ten.sqrt();
        let back = r.clone() * r;
        let err = (back - Hp::from_u64(10)).abs();
        assert!(err < Hp::from_f64(1e-70));
        assert!(Hp::pi().to_decimal(12).starts_with("3.14159265358"));
        assert_eq!(Hp::from_u64(1).exp().to_decimal(10), "2.718281828e+0");
    }

    #[test]
    fn ln_biguint_agrees_across_scalars() {
        let mut fact = BigUint::from(1u32);
        for i in 1..=300u32 {
            fact *= i;
        }
        let hp = Hp::ln_biguint(&fact);
        let sum = (2..=300u64).fold(Hp::zero(), |acc, i| acc + Hp::from_u64(i).ln());
        assert!((hp.clone() - sum).abs() < Hp::from_f64(1e-60));
        let fast = f64::ln_biguint(&fact);
        assert!((fast - hp.to_f64()).abs() < 1e-9 * fast);
    }

    #[test]
    fn floor_to_biguint() {
        let v = Hp::from_u64(10).powi(40) + Hp::ratio(1, 2);
        assert_eq!(v.to_biguint_floor(), BigUint::from(10u32).pow(40));
        assert_eq!(Hp::ratio(7, 2).to_biguint_floor(), BigUint::from(3u32));
    }
}
