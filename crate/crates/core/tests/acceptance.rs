//! Acceptance criteria, one line each.
//!
//! Runs without the libtest harness so every criterion is reported, pass or
//! fail, and the process exits non-zero if any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use zernike_roots::decimal::parse_decimal;
use zernike_roots::hypergeom::{cf_ratio, ratio_exact, HypParams};
use zernike_roots::output::render_table;
use zernike_roots::polynomial::{coefficients, evaluate};
use zernike_roots::quadrature::{gauss_rule, moment, zernike_inner_product};
use zernike_roots::solver::{newton_trace, oracle_roots, table_indices};
use zernike_roots::{
    all_roots, root_table, DoubleDouble, NewtonConfig, OutputFormat, PolyIndex, Real,
};

type Dd = DoubleDouble;

struct Outcome {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, title: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { id, title, pass, detail }
}

struct Entry {
    n: u32,
    m: u32,
    text: String,
    value: BigRational,
}

fn load(name: &str) -> Vec<Entry> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let body = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    body.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            Entry {
                n: f[0].parse().unwrap(),
                m: f[1].parse().unwrap(),
                text: f[2].to_string(),
                value: parse_decimal(f[2]).unwrap(),
            }
        })
        .collect()
}

fn rel_err(got: &BigRational, want: &BigRational) -> f64 {
    ((got - want).abs() / want.abs()).to_f64().unwrap()
}

fn idx(n: u32, m: u32) -> PolyIndex {
    PolyIndex::new(n, m).unwrap()
}

fn golden_double() -> Outcome {
    let reference = load("reference_roots.txt");
    let start = Instant::now();
    let table = root_table::<f64>(20, &NewtonConfig::double()).unwrap();
    let elapsed = start.elapsed();
    let same_keys = table.len() == reference.len()
        && table.iter().zip(&reference).all(|(r, e)| (r.n(), r.m()) == (e.n, e.m));
    let worst = table
        .iter()
        .zip(&reference)
        .map(|(r, e)| rel_err(&r.x.to_rational(), &e.value))
        .fold(0.0, f64::max);
    let text = render_table(&table, &OutputFormat::default());
    let identical = text.lines().zip(&reference).filter(|(l, e)| **l == format!("{} {} {}", e.n, e.m, e.text)).count();
    outcome(
        "AC1a",
        "golden table, double precision within 5e-15 in under 1 s",
        same_keys && worst <= 5e-15 && elapsed < Duration::from_secs(1),
        format!(
            "{} roots, worst rel err {worst:.2e}, {identical}/{} lines identical, {:.1} ms",
            table.len(),
            reference.len(),
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn golden_extended() -> (Outcome, Outcome) {
    let reference = load("reference_roots.txt");
    let truth = load("true_roots.txt");
    let cfg = NewtonConfig::extended();
    let table = root_table::<Dd>(20, &cfg).unwrap();
    let text = render_table(&table, &OutputFormat::default());
    let lines: Vec<&str> = text.lines().collect();
    let matched = lines
        .iter()
        .zip(&reference)
        .filter(|(l, e)| **l == format!("{} {} {}", e.n, e.m, e.text))
        .count();
    let first_miss = lines
        .iter()
        .zip(&reference)
        .find(|(l, e)| **l != format!("{} {} {}", e.n, e.m, e.text))
        .map(|(l, e)| format!("; first mismatch `{l}` vs `{} {} {}`", e.n, e.m, e.text))
        .unwrap_or_default();
    let digits = outcome(
        "AC1b",
        "golden table, precision 32 and eps 1e-30, all 19 printed digits identical",
        lines.len() == reference.len() && matched == reference.len(),
        format!("{matched}/{} lines identical{first_miss}", reference.len()),
    );
    let worst = table
        .iter()
        .zip(&truth)
        .map(|(r, e)| rel_err(&r.x.to_rational(), &e.value))
        .fold(0.0, f64::max);
    let truth_ok = table.len() == truth.len() && worst <= 1e-30;
    let extended = outcome(
        "AC1c",
        "golden table, precision 32 against 40-digit reference roots within 1e-30",
        truth_ok,
        format!("worst rel err {worst:.2e} over {} roots", table.len()),
    );
    (digits, extended)
}

fn spot_values() -> Outcome {
    let cases = [(2, 0, 1, 2), (4, 2, 3, 4), (6, 4, 5, 6), (20, 18, 19, 20)];
    let mut pass = true;
    let mut worst_dd = 0.0_f64;
    for (n, m, p, q) in cases {
        let exact = Dd::from_rational(&BigRational::new(p.into(), q.into())).sqrt();
        let r64 = all_roots::<f64>(idx(n, m), &NewtonConfig::double()).unwrap();
        let rdd = all_roots::<Dd>(idx(n, m), &NewtonConfig::extended()).unwrap();
        pass &= r64.len() == 1 && rdd.len() == 1;
        pass &= r64[0].x == exact.to_f64();
        let e = ((rdd[0].x - exact) / exact).abs().to_f64();
        worst_dd = worst_dd.max(e);
    }
    pass &= worst_dd <= 1e-31;
    outcome(
        "AC2",
        "closed-form roots sqrt(1/2), sqrt(3/4), sqrt(5/6), sqrt(19/20)",
        pass,
        format!("double results correctly rounded, extended rel err {worst_dd:.2e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let cfg = NewtonConfig::double();
    let mut worst = 0.0_f64;
    let mut counts_ok = true;
    let mut groups = 0;
    for id in table_indices(20) {
        let roots = all_roots::<f64>(id, &cfg).unwrap();
        let oracle: Vec<Dd> = oracle_roots(id).unwrap();
        counts_ok &= roots.len() == id.half_gap() as usize && oracle.len() == roots.len();
        for (r, o) in roots.iter().zip(&oracle) {
            worst = worst.max((r.x - o.to_f64()).abs());
        }
        groups += 1;
    }
    outcome(
        "AC3",
        "all_roots agrees with the bisection oracle within 1e-12",
        counts_ok && worst <= 1e-12,
        format!("{groups} groups, counts ok: {counts_ok}, worst abs diff {worst:.2e}"),
    )
}

fn cf_against_series() -> Outcome {
    let xs = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
    let mut worst = 0.0_f64;
    let mut checked = 0;
    let mut poles = 0;
    for n in 1..=20_u32 {
        for m in (n % 2..n).step_by(2) {
            for &x in &xs {
                let hp = HypParams::<f64>::for_index(idx(n, m), x).unwrap();
                let z = BigRational::from_float(hp.z).unwrap();
                let Some(want) = ratio_exact(hp.a, hp.b, hp.c, &z).unwrap() else {
                    poles += 1;
                    continue;
                };
                let got = BigRational::from_float(cf_ratio(&hp).unwrap()).unwrap();
                worst = worst.max(rel_err(&got, &want));
                checked += 1;
            }
        }
    }
    outcome(
        "AC4",
        "continued fraction matches the exact terminating series within 1e-13 relative",
        worst <= 1e-13,
        format!("{checked} evaluations at 8 abscissae, {poles} exact poles skipped, worst {worst:.2e}"),
    )
}

fn identity_residuals() -> Outcome {
    let mut worst2 = 0.0_f64;
    let mut worst3 = 0.0_f64;
    for n in 0..=20_u32 {
        for m in (n % 2..=n).step_by(2) {
            let id = idx(n, m);
            for k in 1..10 {
                let x = Dd::from_f64(f64::from(k) / 10.0);
                let d: Vec<Dd> = (0..4).map(|o| evaluate(id, x, o).unwrap()).collect();
                let nn = Dd::from_i64(i64::from(n) * i64::from(n + 2));
                let m2 = Dd::from_i64(i64::from(m * m));
                let one = Dd::ONE;
                let x2 = x * x;
                let lhs = x2 * (x2 - one) * d[2];
                let rhs = (nn * x2 - m2) * d[0] + x * (one - Dd::from_f64(3.0) * x2) * d[1];
                let scale = lhs.abs().max(rhs.abs()).max(one);
                worst2 = worst2.max(((lhs - rhs).abs() / scale).to_f64());
                let lhs = x * x2 * (x2 - one) * (x2 - one) * d[3];
                let rhs = (x2 * (nn + Dd::from_f64(7.0) * m2) - Dd::from_f64(5.0) * x2 * x2 * nn - Dd::from_f64(3.0) * m2)
                    * d[0]
                    + x * (Dd::from_f64(6.0) * x2 * (x2 + x2 - one) - m2 * (x2 - one)
                        + Dd::from_f64(2.0)
                        + x2 * (x2 - one) * nn)
                        * d[1];
                let scale = lhs.abs().max(rhs.abs()).max(one);
                worst3 = worst3.max(((lhs - rhs).abs() / scale).to_f64());
            }
        }
    }
    outcome(
        "AC5",
        "second- and third-order differential identities hold within 1e-10 (scaled)",
        worst2 <= 1e-10 && worst3 <= 1e-10,
        format!("worst scaled residuals {worst2:.2e} and {worst3:.2e}"),
    )
}

fn orthogonality() -> Outcome {
    let cfg = NewtonConfig::extended();
    let mut worst = 0.0_f64;
    let mut pairs = 0;
    for m in 0..=12_u32 {
        for n1 in (m..=12).step_by(2) {
            for n2 in (m..=12).step_by(2) {
                let got: Dd = zernike_inner_product(n1, n2, m, &cfg).unwrap();
                let want = if n1 == n2 { Dd::ONE / Dd::from_i64(2 * (i64::from(n1) + 1)) } else { Dd::ZERO };
                worst = worst.max((got - want).abs().to_f64());
                pairs += 1;
            }
        }
    }
    outcome(
        "AC6",
        "orthogonality integrals by Gauss quadrature within 1e-12",
        worst <= 1e-12,
        format!("{pairs} pairs, worst abs err {worst:.2e}"),
    )
}

/// `int_0^1 y^m p(y)^2 dy` for the monic `p` whose roots are the rule's nodes.
fn gauss_remainder(m: u32, s: u32) -> BigRational {
    let c = coefficients(idx(m + 2 * s, m)).coeffs;
    let lead = BigRational::from_integer(c[0].clone());
    let mut total = BigRational::zero();
    for (j, cj) in c.iter().enumerate() {
        for (l, cl) in c.iter().enumerate() {
            let power = 2 * s - j as u32 - l as u32;
            total += BigRational::from_integer(cj * cl) * moment(m, power);
        }
    }
    total / (&lead * &lead)
}

fn quadrature_exactness() -> Outcome {
    let cfg = NewtonConfig::extended();
    let mut worst_exact = 0.0_f64;
    let mut worst_gap_mismatch = 0.0_f64;
    let mut smallest_gap = f64::INFINITY;
    let mut worst_double = 0.0_f64;
    for m in 0..=6_u32 {
        for s in 1..=6_u32 {
            let rule = gauss_rule::<Dd>(m, s, &cfg).unwrap();
            let rule64 = gauss_rule::<f64>(m, s, &NewtonConfig::double()).unwrap();
            for k in 0..2 * s {
                let want = Dd::from_rational(&moment(m, k));
                let got = rule.integrate(|y| y.powi(k));
                worst_exact = worst_exact.max((got - want).abs().to_f64());
                let got64 = rule64.integrate(|y: f64| y.powi(k as i32));
                worst_double = worst_double.max((got64 - want.to_f64()).abs());
            }
            let deviation = Dd::from_rational(&moment(m, 2 * s)) - rule.integrate(|y| y.powi(2 * s));
            let gap = Dd::from_rational(&gauss_remainder(m, s));
            smallest_gap = smallest_gap.min(deviation.to_f64());
            worst_gap_mismatch = worst_gap_mismatch.max(((deviation - gap) / gap).abs().to_f64());
        }
    }
    let pass = worst_exact <= 1e-12 && worst_gap_mismatch <= 1e-6 && smallest_gap > 100.0 * 1e-12;
    outcome(
        "AC7",
        "Gauss rules m <= 6, s <= 6 exact to 1e-12 up to degree 2s-1, inexact at 2s",
        pass,
        format!(
            "worst error {worst_exact:.2e} (double-precision rules {worst_double:.2e}); \
             degree-2s deviation >= {smallest_gap:.2e}, matches remainder within {worst_gap_mismatch:.1e}"
        ),
    )
}

fn convergence() -> Outcome {
    let t64 = root_table::<f64>(20, &NewtonConfig::double()).unwrap();
    let tdd = root_table::<Dd>(20, &NewtonConfig::extended()).unwrap();
    let max64 = t64.iter().map(|r| r.iterations_used).max().unwrap();
    let maxdd = tdd.iter().map(|r| r.iterations_used).max().unwrap();
    let restarts: u32 = t64.iter().map(|r| r.restarts).sum::<u32>() + tdd.iter().map(|r| r.restarts).sum::<u32>();

    let truth = load("true_roots.txt");
    let id = idx(12, 0);
    let cfg = NewtonConfig::extended();
    let mut min_order = f64::INFINITY;
    for e in truth.iter().filter(|e| (e.n, e.m) == (12, 0)) {
        let root = Dd::from_rational(&e.value);
        for delta in [1e-3, -1e-3] {
            let trace = newton_trace(id, root + Dd::from_f64(delta), &cfg).unwrap();
            let errs: Vec<f64> = trace.iter().map(|&x| (x - root).abs().to_f64()).take_while(|&e| e > 1e-29).collect();
            if errs.len() >= 3 {
                let order = (errs[2] / errs[1]).ln() / (errs[1] / errs[0]).ln();
                min_order = min_order.min(order);
            }
        }
    }
    outcome(
        "AC8",
        "every root within 20 iterations, convergence order >= 2.5 at (12,0)",
        max64 <= 20 && maxdd <= 20 && restarts == 0 && min_order >= 2.5,
        format!(
            "max iterations {max64} (double) / {maxdd} (extended), {restarts} restarts, \
             smallest fitted order {min_order:.2}"
        ),
    )
}

fn main() -> ExitCode {
    let mut results = vec![golden_double()];
    let (b, c) = golden_extended();
    results.push(b);
    results.push(c);
    results.push(spot_values());
    results.push(oracle_equivalence());
    results.push(cf_against_series());
    results.push(identity_residuals());
    results.push(orthogonality());
    results.push(quadrature_exactness());
    results.push(convergence());

    for r in &results {
        println!("[{}] {} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.title, r.detail);
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
