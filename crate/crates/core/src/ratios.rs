//! Derivative ratios `R/R'`, `R''/R'` and `R'''/R'` of `R_n^m`.
//!
//! `R/R'` comes from the hypergeometric ratio `F/F'`; the higher ratios follow
//! from the second-order differential equation
//!
//! ```text
//! x^2 (x^2 - 1) R'' = [n(n+2) x^2 - m^2] R + x (1 - 3x^2) R'
//! ```
//!
//! and its derivative, so `R` itself is never evaluated.

use crate::error::{Error, Result};
use crate::hypergeom::{f_over_fprime, HypParams};
use crate::polynomial::PolyIndex;
use crate::real::Real;

/// Inputs closer than this to `x = 0` or `x = 1` are rejected.
pub const SINGULAR_GUARD: f64 = 1e-12;

fn guard<T: Real>(x: T) -> Result<()> {
    let xf = x.to_f64();
    if xf.abs() < SINGULAR_GUARD || (xf - 1.0).abs() < SINGULAR_GUARD || (xf + 1.0).abs() < SINGULAR_GUARD {
        return Err(Error::SingularPoint { x: xf });
    }
    Ok(())
}

/// Ratio chain at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBundle<T> {
    pub x: T,
    pub r_over_rp: T,
    pub r2_over_rp: T,
    pub r3_over_rp: Option<T>,
}

/// `R/R'` at `x` in the form `x (F/F') / (n (F/F') - 2z)`, which stays
/// well-behaved as `F/F'` goes to zero at a root.
pub fn r_over_rprime<T: Real>(idx: PolyIndex, x: T) -> Result<T> {
    if idx.n() == idx.m() {
        return Err(Error::NoPositiveRoots(idx.n()));
    }
    guard(x)?;
    let params = HypParams::for_index(idx, x)?;
    let ffp = f_over_fprime(&params)?;
    let denom = T::from_i64(i64::from(idx.n())) * ffp - (params.z + params.z);
    Ok(x * ffp / denom)
}

/// `R''/R'` from a known `R/R'` (pass zero at a root).
pub fn r2_over_rprime<T: Real>(idx: PolyIndex, x: T, rrp: T) -> Result<T> {
    guard(x)?;
    let n = i64::from(idx.n());
    let m = i64::from(idx.m());
    let x2 = x * x;
    let num = (T::from_i64(n * (n + 2)) * x2 - T::from_i64(m * m)) * rrp
        + x * (T::one() - T::from_f64(3.0) * x2);
    Ok(num / (x2 * (x2 - T::one())))
}

/// `R'''/R'` from a known `R/R'` (pass zero at a root).
pub fn r3_over_rprime<T: Real>(idx: PolyIndex, x: T, rrp: T) -> Result<T> {
    guard(x)?;
    let nn = T::from_i64(i64::from(idx.n()) * (i64::from(idx.n()) + 2));
    let m2 = T::from_i64(i64::from(idx.m()) * i64::from(idx.m()));
    let x2 = x * x;
    let x2m = x2 - T::one();
    let r_coeff = x2 * (nn + T::from_f64(7.0) * m2) - T::from_f64(5.0) * x2 * x2 * nn
        - T::from_f64(3.0) * m2;
    let rp_coeff = x * (T::from_f64(6.0) * x2 * (x2 + x2 - T::one()) - m2 * x2m
        + T::from_f64(2.0)
        + x2 * x2m * nn);
    Ok((r_coeff * rrp + rp_coeff) / (x * x2 * x2m * x2m))
}

pub fn ratio_bundle<T: Real>(idx: PolyIndex, x: T, with_third: bool) -> Result<RatioBundle<T>> {
    let rrp = r_over_rprime(idx, x)?;
    let r2 = r2_over_rprime(idx, x, rrp)?;
    let r3 = if with_third {
        Some(r3_over_rprime(idx, x, rrp)?)
    } else {
        None
    };
    Ok(RatioBundle {
        x,
        r_over_rp: rrp,
        r2_over_rp: r2,
        r3_over_rp: r3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial;
    use crate::real::DoubleDouble;

    // reference values in double-double, where Horner does not cancel
    fn evaluate(id: PolyIndex, x: f64, order: u32) -> Result<f64> {
        polynomial::evaluate(id, DoubleDouble::from_f64(x), order).map(DoubleDouble::to_f64)
    }

    fn idx(n: u32, m: u32) -> PolyIndex {
        PolyIndex::new(n, m).unwrap()
    }

    #[test]
    fn r_over_rprime_examples() {
        let x = std::f64::consts::FRAC_1_SQRT_2;
        assert!(r_over_rprime(idx(2, 0), x).unwrap().abs() < 1e-15);
        assert!((r_over_rprime(idx(2, 0), 0.5).unwrap() + 0.25).abs() < 1e-15);
        assert_eq!(r_over_rprime(idx(1, 1), 0.3), Err(Error::NoPositiveRoots(1)));
        // R_3^1 = 3x^3 - 2x has R/R' = x(3x^2-2)/(9x^2-2)
        let x = 0.3;
        let want = x * (3.0 * x * x - 2.0) / (9.0 * x * x - 2.0);
        assert!((r_over_rprime(idx(3, 1), x).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn r2_examples() {
        assert!((r2_over_rprime(idx(2, 0), 0.5, -0.25).unwrap() - 2.0).abs() < 1e-15);
        let x = std::f64::consts::FRAC_1_SQRT_2;
        let v = r2_over_rprime(idx(2, 0), x, 0.0).unwrap();
        assert!((v - std::f64::consts::SQRT_2).abs() < 1e-14);
        let rrp = -0.125 / -3.0;
        assert!((r2_over_rprime(idx(4, 0), 0.5, rrp).unwrap() + 2.0).abs() < 1e-14);
    }

    #[test]
    fn r3_examples() {
        let rrp = -0.125 / -3.0;
        assert!((r3_over_rprime(idx(4, 0), 0.5, rrp).unwrap() + 24.0).abs() < 1e-13);
        assert!(r3_over_rprime(idx(2, 0), 0.5, -0.25).unwrap().abs() < 1e-15);
        // at a root the R-term drops out
        let (n, m, x) = (6.0_f64, 2.0_f64, 0.675_165_280_497_134_8_f64);
        let x2 = x * x;
        let want = x * (6.0 * x2 * (2.0 * x2 - 1.0) - m * m * (x2 - 1.0) + 2.0 + x2 * (x2 - 1.0) * n * (n + 2.0))
            / (x * x2 * (x2 - 1.0) * (x2 - 1.0));
        let got = r3_over_rprime(idx(6, 2), x, 0.0).unwrap();
        assert!((got - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn singular_points_rejected() {
        assert!(matches!(r2_over_rprime(idx(4, 0), 1.0, 0.0), Err(Error::SingularPoint { .. })));
        assert!(matches!(r3_over_rprime(idx(4, 0), 0.0, 0.0), Err(Error::SingularPoint { .. })));
        assert!(matches!(r_over_rprime(idx(4, 0), 1.0 - 1e-13), Err(Error::SingularPoint { .. })));
        assert!(r2_over_rprime(idx(4, 0), 1.0 - 1e-9, 0.0).is_ok());
    }

    fn sweep() -> impl Iterator<Item = (PolyIndex, f64)> {
        (1..=20_u32)
            .flat_map(|n| (n % 2..n).step_by(2).map(move |m| idx(n, m)))
            .flat_map(|id| (1..10).map(move |k| (id, f64::from(k) / 10.0)))
    }

    #[test]
    fn second_order_identity_residual() {
        for (id, x) in sweep() {
            let (n, m) = (f64::from(id.n()), f64::from(id.m()));
            let r = evaluate(id, x, 0).unwrap();
            let r1 = evaluate(id, x, 1).unwrap();
            let r2 = evaluate(id, x, 2).unwrap();
            let lhs = x * x * (x * x - 1.0) * r2;
            let rhs = (n * (n + 2.0) * x * x - m * m) * r + x * (1.0 - 3.0 * x * x) * r1;
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!((lhs - rhs).abs() <= 1e-10 * scale, "{id} x={x}");
        }
    }

    #[test]
    fn third_order_identity_residual() {
        for (id, x) in sweep() {
            let (n, m) = (f64::from(id.n()), f64::from(id.m()));
            let (nn, m2, x2) = (n * (n + 2.0), m * m, x * x);
            let r = evaluate(id, x, 0).unwrap();
            let r1 = evaluate(id, x, 1).unwrap();
            let r3 = evaluate(id, x, 3).unwrap();
            let lhs = x * x2 * (x2 - 1.0).powi(2) * r3;
            let rhs = (x2 * (nn + 7.0 * m2) - 5.0 * x2 * x2 * nn - 3.0 * m2) * r
                + x * (6.0 * x2 * (2.0 * x2 - 1.0) - m2 * (x2 - 1.0) + 2.0 + x2 * (x2 - 1.0) * nn) * r1;
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            assert!((lhs - rhs).abs() <= 1e-10 * scale, "{id} x={x}");
        }
    }

    #[test]
    fn ratio_chain_matches_horner() {
        for (id, x) in sweep() {
            let r = evaluate(id, x, 0).unwrap();
            let r1 = evaluate(id, x, 1).unwrap();
            let r2 = evaluate(id, x, 2).unwrap();
            let r3 = evaluate(id, x, 3).unwrap();
            if r1.abs() <= 1e-6 {
                continue;
            }
            let Ok(bundle) = ratio_bundle(id, x, true) else {
                continue;
            };
            let close = |got: f64, want: f64| (got - want).abs() <= 1e-11 * want.abs().max(1.0);
            assert!(close(bundle.r_over_rp, r / r1), "{id} x={x} R/R'");
            assert!(close(bundle.r2_over_rp, r2 / r1), "{id} x={x} R''/R'");
            assert!(close(bundle.r3_over_rp.unwrap(), r3 / r1), "{id} x={x} R'''/R'");
        }
    }
}
