//! Positive roots of `R_n^m` by a third-order Newton (Halley) iteration.
//!
//! Each step needs only `R/R'` and `R''/R'`. The smallest root is found from a
//! closed-form or empirical starting point; every further root starts from a
//! cubic Taylor extrapolation ("shooting") off the previous one.
//!
//! A converged iterate is ranked with a Sturm count over the three-term
//! recurrence. When the rank is not the one being sought, the starting point
//! is bisected between the previous root and one and the iteration restarts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polynomial::{coefficients, evaluate, recurrence_values, PolyIndex};
use crate::ratios::{r2_over_rprime, r3_over_rprime, r_over_rprime, SINGULAR_GUARD};
use crate::real::{DoubleDouble, Precision, Real};

pub const DEFAULT_MAX_ITER: u32 = 20;
/// Starting-point bisections allowed per root before giving up.
pub const MAX_RESTARTS: u32 = 64;
const MAX_HALVINGS: u32 = 64;

/// Relative nudge applied when an iterate hits a pole of the continued
/// fraction: one part in `10^(digits/2)`, i.e. `1e-8` in double precision.
pub fn pole_nudge<T: Real>() -> f64 {
    10f64.powi(-((T::DIGITS / 2) as i32))
}
/// Grid points per unit of `n - m` used by [`oracle_roots`].
pub const ORACLE_GRID: u32 = 10_000;
pub const ORACLE_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Stop once a step is shorter than this.
    pub eps: f64,
    pub max_iter: u32,
    pub precision_digits: u32,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self::double()
    }
}

impl NewtonConfig {
    pub fn double() -> Self {
        Self {
            eps: 1e-15,
            max_iter: DEFAULT_MAX_ITER,
            precision_digits: f64::DIGITS,
        }
    }

    pub fn extended() -> Self {
        Self {
            eps: 1e-30,
            max_iter: DEFAULT_MAX_ITER,
            precision_digits: DoubleDouble::DIGITS,
        }
    }

    /// Defaults for a backend: `eps = max(10^-digits, 1e-30)` in extended
    /// precision, `1e-15` in double.
    pub fn for_precision(p: Precision) -> Self {
        match p {
            Precision::Double => Self::double(),
            Precision::DoubleDouble => Self::extended(),
        }
    }

    pub fn validate(&self) -> Result<Precision> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if self.precision_digits < 15 {
            return Err(Error::Config(format!(
                "precision_digits must be at least 15, got {}",
                self.precision_digits
            )));
        }
        Precision::for_digits(self.precision_digits).ok_or_else(|| {
            Error::Config(format!(
                "precision_digits {} exceeds the supported maximum {}",
                self.precision_digits,
                Precision::MAX_DIGITS
            ))
        })
    }

    /// Validates the configuration against the working type `T`.
    pub fn check<T: Real>(&self) -> Result<()> {
        self.validate()?;
        if self.precision_digits > T::DIGITS {
            return Err(Error::Config(format!(
                "{} digits requested but {} carries {}",
                self.precision_digits,
                T::NAME,
                T::DIGITS
            )));
        }
        let floor = 10f64.powi(-(T::DIGITS as i32));
        if self.eps < floor {
            return Err(Error::Config(format!(
                "eps {:e} is below what {} can resolve ({floor:e})",
                self.eps,
                T::NAME
            )));
        }
        Ok(())
    }
}

/// One root `x` of `R_n^m`, the `i`-th in ascending order (1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootRecord<T> {
    pub index: PolyIndex,
    pub i: u32,
    pub x: T,
    pub iterations_used: u32,
    /// `|R_n^m(x)|` evaluated in double-double arithmetic.
    pub residual: f64,
    /// Starting-point bisections needed before the right root was hit.
    pub restarts: u32,
}

impl<T> RootRecord<T> {
    pub fn n(&self) -> u32 {
        self.index.n()
    }

    pub fn m(&self) -> u32 {
        self.index.m()
    }
}

/// Every positive root of every `R_n^m` with `n <= nmax`, ordered by `m`, then
/// `n`, then root rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RootTable<T> {
    pub nmax: u32,
    pub records: Vec<RootRecord<T>>,
}

impl<T> RootTable<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RootRecord<T>> {
        self.records.iter()
    }
}

/// Starting point for the smallest root.
///
/// For `n - m = 2` and `4` this is the exact smallest root of the polynomial in
/// `x^2`; otherwise the empirical `(1.46m + 2.41) / (n + 0.46m + 1.06)`.
pub fn initial_guess<T: Real>(idx: PolyIndex) -> Result<T> {
    let (n, m) = (i64::from(idx.n()), i64::from(idx.m()));
    let (a, b) = (idx.a(), idx.b());
    match idx.half_gap() {
        0 => Err(Error::NoPositiveRoots(idx.n())),
        1 => Ok((T::from_i64(m + 1) / T::from_i64(a * (b - 1))).sqrt()),
        2 => {
            // 1 - A y + B y^2 = 0 in y = x^2, smaller root
            let big_a = T::from_i64(a * (b - 1)) / T::from_i64(m + 1);
            let big_b = T::from_i64(a * (a + 1) * (b - 1) * (b - 2)) / T::from_i64(2 * (m + 1) * (m + 2));
            let disc = big_a * big_a - T::from_i64(4) * big_b;
            let y = T::from_i64(2) / (big_a + disc.sqrt());
            Ok(y.sqrt())
        }
        _ => {
            let mf = m as f64;
            Ok(T::from_f64((1.46 * mf + 2.41) / (n as f64 + 0.46 * mf + 1.06)))
        }
    }
}

/// Next root estimate from the cubic Taylor model at a known root `x`,
/// clamped strictly inside `(x, 1)`.
pub fn shoot_next<T: Real>(idx: PolyIndex, x: T) -> Result<T> {
    let zero = T::zero();
    let p = r2_over_rprime(idx, x, zero)? / T::from_i64(2);
    let q = r3_over_rprime(idx, x, zero)? / T::from_i64(6);
    let step = if q == zero {
        -T::one() / p
    } else {
        let disc = T::one() - T::from_i64(4) * q / (p * p);
        let scale = p / (q + q);
        if disc > zero {
            if p / q > zero {
                scale * (disc.sqrt() - T::one())
            } else {
                scale * (-T::one() - disc.sqrt())
            }
        } else {
            -scale
        }
    };
    // twice the guard band: 1 - 1e-12 itself rounds to within 1e-12 of one
    let margin = T::from_f64(2.0 * SINGULAR_GUARD);
    let lo = x + margin;
    let hi = T::one() - margin;
    let next = x + step;
    if !next.is_finite() {
        return Err(Error::Pole { level: 0 });
    }
    Ok(if next <= lo {
        lo
    } else if next >= hi {
        hi
    } else {
        next
    })
}

/// How an iteration ended when it did not converge.
#[derive(Debug, Clone)]
struct Failure {
    last: f64,
    iterations: u32,
    gap: f64,
    cause: Option<Error>,
}

impl Failure {
    fn into_error(self, idx: PolyIndex) -> Error {
        self.cause.unwrap_or(Error::NoConvergence {
            n: idx.n(),
            m: idx.m(),
            iterations: self.iterations,
            last: self.last,
            gap: self.gap,
        })
    }
}

fn halley_step<T: Real>(idx: PolyIndex, x: T) -> Result<T> {
    let rrp = r_over_rprime(idx, x)?;
    let r2 = r2_over_rprime(idx, x, rrp)?;
    let denom = T::one() - T::from_f64(0.5) * rrp * r2;
    let step = -rrp / denom;
    if step.is_finite() {
        Ok(step)
    } else {
        Err(Error::Pole { level: 0 })
    }
}

fn iterate<T: Real>(
    idx: PolyIndex,
    x0: T,
    cfg: &NewtonConfig,
    mut trace: Option<&mut Vec<T>>,
) -> std::result::Result<(T, u32), Failure> {
    let eps = T::from_f64(cfg.eps);
    let lo = T::from_f64(2.0 * SINGULAR_GUARD);
    let hi = T::one() - lo;
    let mut x = x0;
    let mut gap = f64::INFINITY;
    let fail = |x: T, k: u32, gap: f64, cause: Option<Error>| Failure {
        last: x.to_f64(),
        iterations: k,
        gap,
        cause,
    };
    for k in 1..=cfg.max_iter {
        let prev = x;
        let mut step = match halley_step(idx, x) {
            Ok(s) => s,
            Err(Error::Pole { .. }) => {
                x += x * T::from_f64(pole_nudge::<T>());
                match halley_step(idx, x) {
                    Ok(s) => s,
                    Err(e) => return Err(fail(x, k, gap, Some(e))),
                }
            }
            Err(e) => return Err(fail(x, k, gap, Some(e))),
        };
        let mut next = x + step;
        let mut halvings = 0;
        while !(next > lo && next < hi) {
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(fail(x, k, gap, None));
            }
            step *= T::from_f64(0.5);
            next = x + step;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(next);
        }
        // measured from the iterate before any nudge
        let moved = (next - prev).abs();
        gap = moved.to_f64();
        x = next;
        if moved < eps {
            return Ok((x, k));
        }
    }
    Err(fail(x, cfg.max_iter, gap, None))
}

/// Rank (1-based, ascending) of a root `x` of `R_n^m` among its positive roots.
///
/// `R_m^m, R_{m+2}^m, ..., R_n^m` divided by `x^m` form a Sturm sequence in
/// `x^2` with positive leading coefficients, so the number of roots above `x`
/// equals the sign changes of `R_m^m(x), ..., R_{n-2}^m(x)`.
pub fn root_rank<T: Real>(idx: PolyIndex, x: T) -> u32 {
    let k = idx.half_gap();
    if k <= 1 {
        return k;
    }
    let below = PolyIndex::new(idx.n() - 2, idx.m()).expect("n - 2 >= m");
    let values = recurrence_values(below, x.to_double_double());
    let mut changes = 0;
    let mut prev: Option<bool> = None;
    for v in values {
        if v == DoubleDouble::ZERO {
            continue;
        }
        let negative = v < DoubleDouble::ZERO;
        if prev.is_some_and(|p| p != negative) {
            changes += 1;
        }
        prev = Some(negative);
    }
    k - changes
}

/// `|R_n^m(x)|` in double-double arithmetic.
pub fn residual<T: Real>(idx: PolyIndex, x: T) -> f64 {
    evaluate(idx, x.to_double_double(), 0)
        .map(|r| r.to_f64().abs())
        .unwrap_or(f64::NAN)
}

fn check_start<T: Real>(x0: T) -> Result<()> {
    if x0 > T::zero() && x0 < T::one() {
        Ok(())
    } else {
        Err(Error::StartOutOfRange { x0: x0.to_f64() })
    }
}

/// Moves a converged `f64` root to the neighbouring float with the smallest
/// double-double residual, which is the correctly rounded root.
fn polish<T: Real>(idx: PolyIndex, x: T) -> T {
    let mut best = x;
    let mut best_res = residual(idx, x);
    for _ in 0..8 {
        let Some((down, up)) = best.neighbours() else {
            return best;
        };
        let (rd, ru) = (residual(idx, down), residual(idx, up));
        let (cand, res) = if rd < ru { (down, rd) } else { (up, ru) };
        if res.partial_cmp(&best_res) != Some(std::cmp::Ordering::Less) {
            break;
        }
        best = cand;
        best_res = res;
    }
    best
}

/// Iterates from `x0` to a root and ranks it.
pub fn newton_root<T: Real>(idx: PolyIndex, x0: T, cfg: &NewtonConfig) -> Result<RootRecord<T>> {
    cfg.check::<T>()?;
    if idx.half_gap() == 0 {
        return Err(Error::NoPositiveRoots(idx.n()));
    }
    check_start(x0)?;
    let (x, iterations_used) = iterate(idx, x0, cfg, None).map_err(|f| f.into_error(idx))?;
    let x = polish(idx, x);
    Ok(RootRecord {
        index: idx,
        i: root_rank(idx, x),
        x,
        iterations_used,
        residual: residual(idx, x),
        restarts: 0,
    })
}

/// Iterates from `x0` and returns every iterate, `x0` first.
pub fn newton_trace<T: Real>(idx: PolyIndex, x0: T, cfg: &NewtonConfig) -> Result<Vec<T>> {
    cfg.check::<T>()?;
    check_start(x0)?;
    let mut trace = vec![x0];
    iterate(idx, x0, cfg, Some(&mut trace)).map_err(|f| f.into_error(idx))?;
    Ok(trace)
}

fn locate<T: Real>(idx: PolyIndex, rank: u32, x0: T, base: T, cfg: &NewtonConfig) -> Result<RootRecord<T>> {
    let mut lo = base;
    let mut hi = T::one();
    let mut start = x0;
    let mut last_problem = String::new();
    for attempt in 0..=MAX_RESTARTS {
        match iterate(idx, start, cfg, None) {
            Ok((x, iterations_used)) => {
                let x = polish(idx, x);
                let found = root_rank(idx, x);
                if found == rank && x > base {
                    return Ok(RootRecord {
                        index: idx,
                        i: rank,
                        x,
                        iterations_used,
                        residual: residual(idx, x),
                        restarts: attempt,
                    });
                }
                if found > rank {
                    hi = if start < hi { start } else { hi };
                } else {
                    lo = if start > lo { start } else { lo };
                }
                last_problem = format!("start {} converged to root {found} at {}", start.to_f64(), x.to_f64());
            }
            Err(f) => {
                if f.last < start.to_f64() {
                    lo = if start > lo { start } else { lo };
                } else {
                    hi = if start < hi { start } else { hi };
                }
                last_problem = format!("start {}: {}", start.to_f64(), f.into_error(idx));
            }
        }
        start = (lo + hi) * T::from_f64(0.5);
    }
    Err(Error::Bootstrap {
        n: idx.n(),
        m: idx.m(),
        rank,
        detail: last_problem,
    })
}

/// All positive roots of `R_n^m` in ascending order.
pub fn all_roots<T: Real>(idx: PolyIndex, cfg: &NewtonConfig) -> Result<Vec<RootRecord<T>>> {
    cfg.check::<T>()?;
    let count = idx.half_gap();
    let mut roots: Vec<RootRecord<T>> = Vec::with_capacity(count as usize);
    for rank in 1..=count {
        let (x0, base) = match roots.last() {
            None => (initial_guess(idx)?, T::zero()),
            Some(prev) => {
                let guess = shoot_next(idx, prev.x)
                    .unwrap_or_else(|_| (prev.x + T::one()) * T::from_f64(0.5));
                (guess, prev.x)
            }
        };
        roots.push(locate(idx, rank, x0, base, cfg)?);
    }
    let min_gap = T::from_f64(10.0 * cfg.eps);
    for pair in roots.windows(2) {
        if pair[1].x - pair[0].x <= min_gap {
            return Err(Error::Bootstrap {
                n: idx.n(),
                m: idx.m(),
                rank: pair[1].i,
                detail: format!("duplicate root near {}", pair[1].x.to_f64()),
            });
        }
    }
    Ok(roots)
}

/// Indices `(n, m)` with `m < n <= nmax`, `n - m` even, in table order.
pub fn table_indices(nmax: u32) -> Vec<PolyIndex> {
    (0..=nmax)
        .flat_map(|m| {
            (m + 2..=nmax)
                .step_by(2)
                .map(move |n| PolyIndex::new(n, m).expect("valid by construction"))
        })
        .collect()
}

/// The full root table up to `nmax`; groups are solved in parallel.
pub fn root_table<T: Real>(nmax: u32, cfg: &NewtonConfig) -> Result<RootTable<T>> {
    cfg.check::<T>()?;
    let groups = table_indices(nmax)
        .into_par_iter()
        .map(|idx| all_roots::<T>(idx, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(RootTable {
        nmax,
        records: groups.into_iter().flatten().collect(),
    })
}

/// Roots by sign-change scan and bisection on the polynomial in `y = x^2`,
/// independent of the continued fraction. The grid has `10^4 (n - m)` cells
/// and each bracket is bisected to width `1e-15` in `y`.
pub fn oracle_roots<T: Real>(idx: PolyIndex) -> Result<Vec<T>> {
    let k = idx.half_gap() as usize;
    if k == 0 {
        return Ok(Vec::new());
    }
    let coeffs: Vec<T> = coefficients(idx).coeffs.iter().map(T::from_bigint).collect();
    let poly = |y: T| coeffs.iter().fold(T::zero(), |acc, &c| acc * y + c);
    let cells = i64::from(ORACLE_GRID) * i64::from(idx.n() - idx.m());
    let width = T::from_f64(ORACLE_TOL);
    let half = T::from_f64(0.5);
    let mut roots = Vec::with_capacity(k);
    let mut y_prev = T::zero();
    let mut neg_prev = poly(y_prev) < T::zero();
    for j in 1..=cells {
        let y = T::from_i64(j) / T::from_i64(cells);
        let neg = poly(y) < T::zero();
        if neg != neg_prev {
            let (mut lo, mut hi) = (y_prev, y);
            for _ in 0..200 {
                if hi - lo <= width {
                    break;
                }
                let mid = (lo + hi) * half;
                if (poly(mid) < T::zero()) == neg_prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(((lo + hi) * half).sqrt());
        }
        y_prev = y;
        neg_prev = neg;
    }
    if roots.len() != k {
        return Err(Error::Oracle {
            n: idx.n(),
            m: idx.m(),
            found: roots.len(),
            expected: k,
        });
    }
    Ok(roots)
}
