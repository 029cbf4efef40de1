//! Exact arithmetic in the quadratic field `Q(√10)`.
//!
//! `√10 − 2` and `√10 − 3` are the constants behind the first improved bound,
//! so its values and the identities relating them can be evaluated and
//! compared with no rounding at all.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Real;

/// `a + b·√10` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: BigRational,
    b: BigRational,
}

impl QuadSurd {
    pub const RADICAND: u32 = 10;

    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadSurd { a, b }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        QuadSurd {
            a: BigRational::from_integer(v.into()),
            b: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        QuadSurd {
            a: BigRational::new(num.into(), den.into()),
            b: BigRational::zero(),
        }
    }

    /// `√10`.
    pub fn root() -> Self {
        QuadSurd {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 10 b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(Self::RADICAND.into()) * &self.b * &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(QuadSurd {
            a: c.a / &n,
            b: c.b / n,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadSurd::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // Opposite signs: compare a² with 10 b².
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(Self::RADICAND.into()) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Rounded value in the scalar type `R`.
    pub fn to_real<R: Real>(&self) -> R {
        let ten = R::from_u64(u64::from(Self::RADICAND));
        rational_to_real::<R>(&self.a) + rational_to_real::<R>(&self.b) * ten.sqrt()
    }
}

fn sign_of(q: &BigRational) -> Ordering {
    if q.is_positive() {
        Ordering::Greater
    } else if q.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

pub(crate) fn bigint_to_real<R: Real>(v: &BigInt) -> R {
    let mag = R::from_biguint(v.magnitude());
    if v.sign() == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub(crate) fn rational_to_real<R: Real>(q: &BigRational) -> R {
    bigint_to_real::<R>(q.numer()) / bigint_to_real::<R>(q.denom())
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<BigUint> for QuadSurd {
    fn from(v: BigUint) -> Self {
        QuadSurd::from_int(BigInt::from(v))
    }
}

impl<'a> Add<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &QuadSurd) -> QuadSurd {
        QuadSurd {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: &QuadSurd) -> QuadSurd {
        QuadSurd {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &QuadSurd) -> QuadSurd {
        let ten = BigRational::from_integer(QuadSurd::RADICAND.into());
        QuadSurd {
            a: &self.a * &rhs.a + ten * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl<'a> Div<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadSurd) -> QuadSurd {
        self * &rhs.recip().expect("division by zero in Q(√10)")
    }
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: QuadSurd) -> QuadSurd {
        &self + &rhs
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: QuadSurd) -> QuadSurd {
        &self - &rhs
    }
}

impl Mul for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: QuadSurd) -> QuadSurd {
        &self * &rhs
    }
}

impl Div for QuadSurd {
    type Output = QuadSurd;
    fn div(self, rhs: QuadSurd) -> QuadSurd {
        &self / &rhs
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})√10", self.a, self.b)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√10", self.a, self.b)
        }
    }
}
