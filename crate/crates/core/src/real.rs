//! Working-precision real types.
//!
//! Every numerical routine in the crate is generic over [`Real`], which is
//! implemented for `f64` and for [`DoubleDouble`], an unevaluated sum of two
//! `f64` values carrying roughly 32 significant decimal digits.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::decimal;

/// Arithmetic needed by the solver, the oracles and the quadrature code.
pub trait Real:
    Copy
    + Send
    + Sync
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + 'static
{
    /// Decimal digits carried by the type.
    const DIGITS: u32;
    /// Short name used in diagnostics.
    const NAME: &'static str;

    fn from_f64(v: f64) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Nearest representable value to an exact rational.
    fn from_rational(r: &BigRational) -> Self;
    fn from_bigint(v: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(v.clone()))
    }
    fn to_f64(self) -> f64;
    /// Exact value of `self` as a rational number.
    fn to_rational(self) -> BigRational;
    fn to_double_double(self) -> DoubleDouble;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn is_finite(self) -> bool;
    /// Adjacent representable values below and above, when the type has a
    /// fixed spacing worth searching.
    fn neighbours(self) -> Option<(Self, Self)> {
        None
    }

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn powi(self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const DIGITS: u32 = 16;
    const NAME: &'static str = "f64";

    fn from_f64(v: f64) -> Self {
        v
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn to_rational(self) -> BigRational {
        BigRational::from_float(self).unwrap_or_else(BigRational::zero)
    }

    fn to_double_double(self) -> DoubleDouble {
        DoubleDouble::from_f64(self)
    }

    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn neighbours(self) -> Option<(Self, Self)> {
        Some((self.next_down(), self.next_up()))
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Double-double number `hi + lo` with `|lo| <= ulp(hi) / 2`.
///
/// Arithmetic follows the error-free transformations of Dekker and Knuth
/// (the "accurate" variants from the QD library), giving about 106 bits of
/// significand.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Builds a normalized value from two components.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        Self { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Self { hi, lo }
    }

    fn square_f64(a: f64) -> Self {
        let (hi, lo) = two_prod(a, a);
        Self { hi, lo }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() {
            return write!(f, "{}", self.hi);
        }
        let digits = f.precision().unwrap_or(Self::DIGITS as usize);
        f.write_str(&decimal::format_significant(&self.to_rational(), digits))
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Self { hi: q1, lo: 0.0 };
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add_f64(q3)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $method:ident $op:tt),*) => {
        $(impl $tr for DoubleDouble {
            fn $method(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        })*
    };
}

assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, v| acc + v)
    }
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }
}

impl Real for DoubleDouble {
    const DIGITS: u32 = 32;
    const NAME: &'static str = "double-double";

    fn from_f64(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    fn from_i64(v: i64) -> Self {
        let hi = v as f64;
        let lo = (i128::from(v) - hi as i128) as f64;
        Self::new(hi, lo)
    }

    fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Self { hi, lo: 0.0 };
        }
        let rest = r - BigRational::from_float(hi).expect("finite");
        let lo = rest.to_f64().unwrap_or(0.0);
        Self::new(hi, lo)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn to_double_double(self) -> DoubleDouble {
        self
    }

    fn to_rational(self) -> BigRational {
        let hi = BigRational::from_float(self.hi).unwrap_or_else(BigRational::zero);
        let lo = BigRational::from_float(self.lo).unwrap_or_else(BigRational::zero);
        hi + lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let correction = (self - Self::square_f64(ax)).hi * (x * 0.5);
        Self::from_f64(ax).add_f64(correction)
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

/// Working precision selected from a requested number of decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    DoubleDouble,
}

impl Precision {
    /// Largest digit count any backend supports.
    pub const MAX_DIGITS: u32 = DoubleDouble::DIGITS;

    pub fn for_digits(digits: u32) -> Option<Self> {
        match digits {
            0..=16 => Some(Self::Double),
            17..=32 => Some(Self::DoubleDouble),
            _ => None,
        }
    }

    pub fn digits(self) -> u32 {
        match self {
            Self::Double => f64::DIGITS,
            Self::DoubleDouble => DoubleDouble::DIGITS,
        }
    }
}
