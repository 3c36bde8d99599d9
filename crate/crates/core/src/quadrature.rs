//! Gauss rules for the weight `y^m` on `[0, 1]`.
//!
//! With `y = x^2`, the polynomials `R_{m+2j}^m(x) / x^m` are orthogonal in `y`
//! under that weight, so the squared roots of `R_{m+2s}^m` are the `s` Gauss
//! nodes. Weights are fitted to the first `s` moments.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::polynomial::{evaluate, PolyIndex};
use crate::real::Real;
use crate::solver::{all_roots, NewtonConfig};

/// Largest point count accepted at all.
pub const MAX_POINTS: u32 = 12;
/// Above this point count the moment solve needs extended precision.
pub const DOUBLE_POINTS: u32 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub m: u32,
    pub s: u32,
    /// Ascending nodes `y_i` in `(0, 1)`.
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    /// `sum w_i f(y_i)`, approximating the integral of `y^m f(y)` over `[0, 1]`.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&y, &w)| w * f(y)).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// `int_0^1 y^(m+k) dy` as an exact rational.
pub fn moment(m: u32, k: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(u64::from(m) + u64::from(k) + 1))
}

/// Gauss rule with `s` points for weight `y^m`.
pub fn gauss_rule<T: Real>(m: u32, s: u32, cfg: &NewtonConfig) -> Result<QuadratureRule<T>> {
    if s == 0 {
        return Err(Error::Config("a quadrature rule needs at least one point".into()));
    }
    if s > MAX_POINTS {
        return Err(Error::IllConditioned {
            m,
            s,
            detail: format!("at most {MAX_POINTS} points are supported"),
        });
    }
    if s > DOUBLE_POINTS && cfg.precision_digits < 30 {
        return Err(Error::IllConditioned {
            m,
            s,
            detail: format!(
                "more than {DOUBLE_POINTS} points needs precision_digits >= 30, got {}",
                cfg.precision_digits
            ),
        });
    }
    let idx = PolyIndex::new(m + 2 * s, m)?;
    let nodes: Vec<T> = all_roots::<T>(idx, cfg)?.into_iter().map(|r| r.x * r.x).collect();
    let weights = solve_moments(m, &nodes).ok_or_else(|| Error::IllConditioned {
        m,
        s,
        detail: "singular moment matrix".into(),
    })?;
    if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w > T::zero())) {
        return Err(Error::IllConditioned {
            m,
            s,
            detail: format!("non-positive weight {bad}"),
        });
    }
    Ok(QuadratureRule { m, s, nodes, weights })
}

/// Solves `sum_i w_i y_i^k = 1/(m+k+1)`, `k = 0..s-1`, by Gaussian elimination
/// with partial pivoting.
fn solve_moments<T: Real>(m: u32, nodes: &[T]) -> Option<Vec<T>> {
    let s = nodes.len();
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(s);
    let mut powers = vec![T::one(); s];
    for k in 0..s {
        let mut row = powers.clone();
        row.push(T::from_rational(&moment(m, k as u32)));
        rows.push(row);
        for (p, &y) in powers.iter_mut().zip(nodes) {
            *p *= y;
        }
    }
    for col in 0..s {
        let pivot = (col..s).max_by(|&i, &j| {
            rows[i][col]
                .abs()
                .partial_cmp(&rows[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if rows[pivot][col] == T::zero() {
            return None;
        }
        rows.swap(col, pivot);
        let (top, rest) = rows.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest {
            let factor = row[col] / pivot_row[col];
            for (v, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= factor * p;
            }
        }
    }
    let mut w = vec![T::zero(); s];
    for r in (0..s).rev() {
        let mut acc = rows[r][s];
        for c in r + 1..s {
            acc -= rows[r][c] * w[c];
        }
        w[r] = acc / rows[r][r];
    }
    Some(w)
}

/// `int_0^1 x R_{n1}^m R_{n2}^m dx` by the smallest Gauss rule that is exact
/// for the integrand.
pub fn zernike_inner_product<T: Real>(n1: u32, n2: u32, m: u32, cfg: &NewtonConfig) -> Result<T> {
    let i1 = PolyIndex::new(n1, m)?;
    let i2 = PolyIndex::new(n2, m)?;
    // in y the integrand is y^m times a polynomial of degree half_gap1 + half_gap2
    let degree = i1.half_gap() + i2.half_gap();
    let s = (degree / 2 + 1).max(1);
    let rule = gauss_rule::<T>(m, s, cfg)?;
    let reduced = |idx: PolyIndex, y: T| -> T {
        let x = y.sqrt();
        evaluate(idx, x, 0).expect("order 0") / x.powi(m)
    };
    // x dx = dy / 2
    let half = T::from_f64(0.5);
    Ok(half * rule.integrate(|y| reduced(i1, y) * reduced(i2, y)))
}
