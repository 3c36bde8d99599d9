//! Exact decimal formatting and parsing of rational values.
//!
//! Output values are rounded from their exact binary value, so the printed
//! digits do not depend on the working precision's own `Display` impl.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

fn scale_by_pow10(r: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        r * BigRational::from_integer(pow10(e as u32))
    } else {
        r / BigRational::from_integer(pow10((-e) as u32))
    }
}

/// floor(log10(a)) for a > 0.
fn decimal_exponent(a: &BigRational) -> i64 {
    let num_digits = a.numer().to_str_radix(10).len() as i64;
    let den_digits = a.denom().to_str_radix(10).len() as i64;
    let mut e = num_digits - den_digits;
    let one = BigRational::one();
    loop {
        let scaled = scale_by_pow10(a, -e);
        if scaled < one {
            e -= 1;
        } else if scaled >= BigRational::from_integer(BigInt::from(10)) {
            e += 1;
        } else {
            return e;
        }
    }
}

/// Rounds `r` to `digits` significant figures (ties to even). Trailing zeros
/// are dropped only when the printed value equals `r` exactly, so `0.5`
/// stays short while an inexact `0.4608042298407784010` keeps all its digits.
/// Fixed notation is used for decimal exponents in `-7..21`, scientific
/// notation otherwise.
pub fn format_significant(r: &BigRational, digits: usize) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let a = r.abs();
    let mut e = decimal_exponent(&a);
    let scaled = scale_by_pow10(&a, digits as i64 - 1 - e);
    let (mut q, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let exact = rem.is_zero();
    let twice = rem * 2u32;
    let den = scaled.denom();
    if twice > *den || (twice == *den && q.is_odd()) {
        q += 1u32;
    }
    if q == pow10(digits as u32) {
        q = pow10(digits as u32 - 1);
        e += 1;
    }
    let all = q.to_str_radix(10);
    let trimmed = if exact { all.trim_end_matches('0') } else { all.as_str() };
    let sig = if trimmed.is_empty() { "0" } else { trimmed };

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (0..21).contains(&e) {
        let int_len = e as usize + 1;
        if sig.len() <= int_len {
            out.push_str(sig);
            out.extend(std::iter::repeat_n('0', int_len - sig.len()));
        } else {
            out.push_str(&sig[..int_len]);
            out.push('.');
            out.push_str(&sig[int_len..]);
        }
    } else if (-7..0).contains(&e) {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
        out.push_str(sig);
    } else {
        out.push_str(&sig[..1]);
        if sig.len() > 1 {
            out.push('.');
            out.push_str(&sig[1..]);
        }
        out.push('e');
        out.push_str(&e.to_string());
    }
    out
}

/// Parses a decimal literal such as `-0.25`, `7`, `1.5e-3` into an exact
/// rational. Returns `None` for anything else.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(pos) => (&body[..pos], &body[pos + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let magnitude = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let value = scale_by_pow10(
        &BigRational::from_integer(magnitude),
        exponent - frac_part.len() as i64,
    );
    Some(if negative { -value } else { value })
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
