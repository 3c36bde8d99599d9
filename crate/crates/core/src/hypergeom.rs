//! Terminating Gauss hypergeometric functions attached to `R_n^m`.
//!
//! `R_n^m(x)` is proportional to `x^n F(a, b; c; 1/x^2)` with
//! `a = -(n-m)/2`, `b = -(n+m)/2`, `c = -n`. The Newton iteration only ever
//! needs the ratio `F / F'`, which follows from the finite continued fraction
//! for `F(a,b;c;z) / F(a+1,b+1;c+1;z)` evaluated tail first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polynomial::PolyIndex;
use crate::real::Real;

/// Parameters `(a, b, c, z)` of a terminating `F(a, b; c; z)` with `c = a + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams<T> {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub z: T,
}

impl<T: Real> HypParams<T> {
    pub fn new(a: i64, b: i64, c: i64, z: T) -> Result<Self> {
        if a > 0 {
            return Err(Error::NonTerminating(a));
        }
        if c != a + b || a < b {
            return Err(Error::Config(format!(
                "hypergeometric parameters need c = a + b and a >= b (a={a}, b={b}, c={c})"
            )));
        }
        Ok(Self { a, b, c, z })
    }

    /// Parameters for `R_n^m` at `x`, with `z = 1/x^2`.
    pub fn for_index(idx: PolyIndex, x: T) -> Result<Self> {
        if x == T::zero() {
            return Err(Error::SingularPoint { x: 0.0 });
        }
        Self::new(idx.a(), idx.b(), idx.c(), T::one() / (x * x))
    }
}

/// `F(a,b;c;z) / F(a+1,b+1;c+1;z)` from the terminating continued fraction.
///
/// Level `k` of the fraction has partial numerator
/// `(a+k)(c+k-1-b) z / ((c+k-1)(c+k))` and partial denominator
/// `(a+k-b) z / (c+k) + 1`; the numerator vanishes at `k = -a`, so the
/// deepest level is evaluated first and the loop runs `|a| - 1` times.
pub fn cf_ratio<T: Real>(p: &HypParams<T>) -> Result<T> {
    let (a, b, c, z) = (p.a, p.b, p.c, p.z);
    if a >= 0 {
        return Err(Error::NonTerminating(a));
    }
    let mut tail = T::zero();
    // `level` stands for a + k, running from -1 up the fraction to a + 1.
    for level in (a + 1..=-1).rev() {
        let shift = level + c - a;
        let denom = z * T::from_i64(level - b) + T::from_i64(shift) * (T::one() - tail);
        if denom == T::zero() {
            return Err(Error::Pole { level });
        }
        let numer = T::from_i64(level * (shift - b - 1)) * z;
        tail = numer / (T::from_i64(shift - 1) * denom);
        if !tail.is_finite() {
            return Err(Error::Pole { level });
        }
    }
    let ratio = T::one() - T::from_i64(b) * z / T::from_i64(c) - tail;
    if ratio.is_finite() {
        Ok(ratio)
    } else {
        Err(Error::Pole { level: a })
    }
}

/// `F / F'` using `F'(a,b;c;z) = (ab/c) F(a+1,b+1;c+1;z)`.
pub fn f_over_fprime<T: Real>(p: &HypParams<T>) -> Result<T> {
    let ratio = cf_ratio(p)?;
    Ok(T::from_i64(p.c) * ratio / T::from_i64(p.a * p.b))
}

fn check_series(a: i64, c: i64) -> Result<()> {
    if a > 0 {
        return Err(Error::NonTerminating(a));
    }
    if c <= 0 && c > a {
        return Err(Error::Config(format!(
            "series F({a}, .; {c}; z) hits a zero Pochhammer symbol in the denominator"
        )));
    }
    Ok(())
}

/// Termwise sum of the terminating series `F(a,b;c;z)` in working precision.
pub fn series_eval<T: Real>(a: i64, b: i64, c: i64, z: T) -> Result<T> {
    check_series(a, c)?;
    let mut term = T::one();
    let mut sum = T::one();
    for s in 0..-a {
        term = term * T::from_i64((a + s) * (b + s)) / T::from_i64((c + s) * (s + 1)) * z;
        sum += term;
    }
    Ok(sum)
}

/// Exact value of the terminating series `F(a,b;c;z)` for rational `z`.
pub fn series_eval_exact(a: i64, b: i64, c: i64, z: &BigRational) -> Result<BigRational> {
    check_series(a, c)?;
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for s in 0..-a {
        let factor = BigRational::new(
            BigInt::from((a + s) * (b + s)),
            BigInt::from((c + s) * (s + 1)),
        );
        term = term * factor * z;
        sum += &term;
    }
    Ok(sum)
}

impl<T: Real> HypParams<T> {
    /// `F(a,b;c;z)` summed termwise.
    pub fn series(&self) -> T {
        series_eval(self.a, self.b, self.c, self.z).expect("validated parameters")
    }
}

/// Exact `F(a,b;c;z) / F(a+1,b+1;c+1;z)`; `None` when the denominator vanishes.
pub fn ratio_exact(a: i64, b: i64, c: i64, z: &BigRational) -> Result<Option<BigRational>> {
    let num = series_eval_exact(a, b, c, z)?;
    let den = series_eval_exact(a + 1, b + 1, c + 1, z)?;
    Ok(if den.is_zero() { None } else { Some(num / den) })
}
