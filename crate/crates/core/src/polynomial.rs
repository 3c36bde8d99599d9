//! Exact coefficients and direct evaluation of the Zernike radial polynomials
//! `R_n^m`.
//!
//! Everything here works from the explicit power expansion
//!
//! ```text
//! R_n^m(x) = sum_{s=0}^{(n-m)/2} (-1)^s C(n-s, s) C(n-2s, (n-m)/2 - s) x^(n-2s)
//! ```
//!
//! in exact integer arithmetic. The Horner evaluation and the three-term
//! recurrence serve as independent references for the continued-fraction
//! machinery in [`crate::hypergeom`] and [`crate::ratios`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::real::Real;

/// Largest radial order exercised by the test-suite.
pub const MAX_TESTED_ORDER: u32 = 60;

/// A validated `(n, m)` pair identifying `R_n^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyIndex {
    n: u32,
    m: u32,
}

impl PolyIndex {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidIndex {
                n: n.into(),
                m: m.into(),
                reason: "m must not exceed n",
            });
        }
        if !(n - m).is_multiple_of(2) {
            return Err(Error::InvalidIndex {
                n: n.into(),
                m: m.into(),
                reason: "n - m must be even",
            });
        }
        Ok(Self { n, m })
    }

    /// Validates signed inputs, as they arrive from a command line.
    pub fn from_signed(n: i64, m: i64) -> Result<Self> {
        if n < 0 || m < 0 || n > i64::from(u32::MAX) || m > i64::from(u32::MAX) {
            return Err(Error::InvalidIndex {
                n,
                m,
                reason: "n and m must be non-negative",
            });
        }
        Self::new(n as u32, m as u32)
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn m(self) -> u32 {
        self.m
    }

    /// `(n - m) / 2`, the number of roots in `(0, 1)`.
    pub fn half_gap(self) -> u32 {
        (self.n - self.m) / 2
    }

    /// Hypergeometric parameter `a = -(n-m)/2`.
    pub fn a(self) -> i64 {
        -i64::from(self.half_gap())
    }

    /// Hypergeometric parameter `b = -(n+m)/2`.
    pub fn b(self) -> i64 {
        -(i64::from(self.n) + i64::from(self.m)) / 2
    }

    /// Hypergeometric parameter `c = -n`.
    pub fn c(self) -> i64 {
        -i64::from(self.n)
    }
}

impl std::fmt::Display for PolyIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "R_{}^{}", self.n, self.m)
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Exact integer coefficients of `R_n^m`; `coeffs[s]` multiplies `x^(n-2s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientList {
    pub index: PolyIndex,
    pub coeffs: Vec<BigInt>,
}

impl CoefficientList {
    pub fn power(&self, s: usize) -> u32 {
        self.index.n - 2 * s as u32
    }

    /// Sum of all coefficients, i.e. the value at `x = 1`.
    pub fn sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

pub fn coefficients(idx: PolyIndex) -> CoefficientList {
    let n = u64::from(idx.n);
    let k = u64::from(idx.half_gap());
    let coeffs = (0..=k)
        .map(|s| {
            let c = binomial(n - s, s) * binomial(n - 2 * s, k - s);
            if s % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    CoefficientList { index: idx, coeffs }
}

/// Value of the `order`-th derivative of `R_n^m` at `x` by Horner's scheme in
/// `x^2` on the exactly differentiated coefficients.
pub fn evaluate<T: Real>(idx: PolyIndex, x: T, order: u32) -> Result<T> {
    if order > 3 {
        return Err(Error::DerivativeOrder(order));
    }
    let list = coefficients(idx);
    let mut terms: Vec<(u32, BigInt)> = Vec::with_capacity(list.coeffs.len());
    for (s, c) in list.coeffs.iter().enumerate() {
        let p = list.power(s);
        if p < order {
            break;
        }
        let falling: u64 = (0..order).map(|j| u64::from(p - j)).product();
        terms.push((p - order, c * BigInt::from(falling)));
    }
    let Some(&(lowest, _)) = terms.last() else {
        return Ok(T::zero());
    };
    let x2 = x * x;
    let mut acc = T::zero();
    for (_, c) in &terms {
        acc = acc * x2 + T::from_bigint(c);
    }
    Ok(acc * x.powi(lowest))
}

/// Values `R_m^m(x), R_{m+2}^m(x), ..., R_n^m(x)` from the upward three-term
/// recurrence in `n` at fixed `m`.
pub fn recurrence_values<T: Real>(idx: PolyIndex, x: T) -> Vec<T> {
    let m = idx.m;
    let mut out = Vec::with_capacity(idx.half_gap() as usize + 1);
    let xm = x.powi(m);
    out.push(xm);
    if idx.n == m {
        return out;
    }
    // R_{m+2}^m = (m+2) x^{m+2} - (m+1) x^m
    let x2 = x * x;
    let mut prev = xm;
    let mut cur = (T::from_i64(i64::from(m) + 2) * x2 - T::from_i64(i64::from(m) + 1)) * xm;
    out.push(cur);
    let mi = i64::from(m);
    let mut k = i64::from(m) + 2;
    while k < i64::from(idx.n) {
        let a = -(k - mi) / 2;
        let b = -(k + mi) / 2;
        let lhs = T::from_i64(2 * k * (a - 1) * (b - 1));
        let kk = k * (k + 2);
        let mid = T::from_i64(k + 1) * (T::from_i64(2 * kk) * x2 - T::from_i64(mi * mi + kk));
        let tail = T::from_i64(2 * a * b * (k + 2));
        let next = (mid * cur - tail * prev) / lhs;
        prev = cur;
        cur = next;
        out.push(cur);
        k += 2;
    }
    out
}

/// `R_n^m(x)` from the three-term recurrence, seeded with `R_m^m = x^m`.
pub fn evaluate_recurrence<T: Real>(idx: PolyIndex, x: T) -> T {
    *recurrence_values(idx, x).last().expect("at least the seed")
}

/// Expansion of `x^i` in the basis `R_n^m`, `n = m, m+2, ..., i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDecomposition {
    pub i: u32,
    pub m: u32,
    pub terms: Vec<(u32, BigRational)>,
}

impl PowerDecomposition {
    /// `sum_n h_{i,n,m} R_n^m(x)`.
    pub fn evaluate<T: Real>(&self, x: T) -> T {
        self.terms
            .iter()
            .map(|(n, h)| {
                let idx = PolyIndex { n: *n, m: self.m };
                T::from_rational(h) * evaluate(idx, x, 0).expect("order 0")
            })
            .sum()
    }
}

pub fn decompose_power(i: u32, m: u32) -> Result<PowerDecomposition> {
    if i < m {
        return Err(Error::InvalidPower {
            i: i.into(),
            m: m.into(),
            reason: "power must be at least m",
        });
    }
    if !(i - m).is_multiple_of(2) {
        return Err(Error::InvalidPower {
            i: i.into(),
            m: m.into(),
            reason: "i - m must be even",
        });
    }
    let terms = (m..=i)
        .step_by(2)
        .map(|n| {
            let idx = PolyIndex { n, m };
            let list = coefficients(idx);
            let sum: BigRational = list
                .coeffs
                .iter()
                .enumerate()
                .map(|(s, c)| {
                    let denom = BigInt::from(list.power(s) + i + 2);
                    BigRational::new(c.clone(), denom)
                })
                .sum();
            (n, sum * BigRational::from_integer(BigInt::from(2 * (n + 1))))
        })
        .collect();
    Ok(PowerDecomposition { i, m, terms })
}
