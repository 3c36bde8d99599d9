//! Text, CSV and JSON rendering of root tables and quadrature rules, and the
//! matching parsers.
//!
//! Values are printed from their exact binary value to a fixed number of
//! significant digits, so output never depends on thread scheduling or on the
//! working type's own `Display`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{Map, Number, Value};

use crate::decimal::{format_significant, parse_decimal};
use crate::error::{Error, Result};
use crate::polynomial::PolyIndex;
use crate::quadrature::QuadratureRule;
use crate::real::Real;
use crate::solver::{RootRecord, RootTable};

pub const DEFAULT_DIGITS: usize = 19;
pub const MIN_DIGITS: usize = 6;
pub const MAX_DIGITS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatKind {
    Text,
    Csv,
    Json,
}

impl FromStr for FormatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Self::Text),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Parse(format!("unknown format `{other}` (text, csv, json)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFormat {
    pub kind: FormatKind,
    pub digits: usize,
}

impl Default for OutputFormat {
    fn default() -> Self {
        Self {
            kind: FormatKind::Text,
            digits: DEFAULT_DIGITS,
        }
    }
}

impl OutputFormat {
    pub fn new(kind: FormatKind, digits: usize) -> Result<Self> {
        if !(MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
            return Err(Error::Config(format!(
                "digits must be between {MIN_DIGITS} and {MAX_DIGITS}, got {digits}"
            )));
        }
        Ok(Self { kind, digits })
    }

    pub fn number<T: Real>(&self, v: T) -> String {
        format_significant(&v.to_rational(), self.digits)
    }
}

fn json_number(text: &str) -> Value {
    Number::from_str(text).map(Value::Number).unwrap_or(Value::Null)
}

fn json_residual(r: f64) -> Value {
    Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
}

fn json_record<T: Real>(r: &RootRecord<T>, fmt: &OutputFormat) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), r.n().into());
    obj.insert("m".into(), r.m().into());
    obj.insert("i".into(), r.i.into());
    obj.insert("x".into(), json_number(&fmt.number(r.x)));
    obj.insert("iterations".into(), r.iterations_used.into());
    obj.insert("residual".into(), json_residual(r.residual));
    Value::Object(obj)
}

fn json_lines(values: Vec<Value>) -> String {
    let mut out = serde_json::to_string_pretty(&Value::Array(values)).expect("serializable");
    out.push('\n');
    out
}

fn csv_string<F>(header: &[&str], fill: F) -> String
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    fill(&mut w).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

fn residual_text(r: f64) -> String {
    format!("{r:.3e}")
}

/// One line per root in table order: `n m x` as text, `n,m,i,x` as CSV, or a
/// JSON array of `{n, m, i, x, iterations, residual}`.
pub fn render_table<T: Real>(table: &RootTable<T>, fmt: &OutputFormat) -> String {
    match fmt.kind {
        FormatKind::Text => {
            let mut out = String::new();
            for r in table.iter() {
                let _ = writeln!(out, "{} {} {}", r.n(), r.m(), fmt.number(r.x));
            }
            out
        }
        FormatKind::Csv => csv_string(&["n", "m", "i", "x"], |w| {
            for r in table.iter() {
                w.write_record([r.n().to_string(), r.m().to_string(), r.i.to_string(), fmt.number(r.x)])?;
            }
            Ok(())
        }),
        FormatKind::Json => json_lines(table.iter().map(|r| json_record(r, fmt)).collect()),
    }
}

/// Roots of one polynomial with diagnostics: `n m i x iterations residual`.
pub fn render_roots<T: Real>(roots: &[RootRecord<T>], fmt: &OutputFormat) -> String {
    match fmt.kind {
        FormatKind::Text => {
            let mut out = String::new();
            for r in roots {
                let _ = writeln!(
                    out,
                    "{} {} {} {} {} {}",
                    r.n(),
                    r.m(),
                    r.i,
                    fmt.number(r.x),
                    r.iterations_used,
                    residual_text(r.residual)
                );
            }
            out
        }
        FormatKind::Csv => csv_string(&["n", "m", "i", "x", "iterations", "residual"], |w| {
            for r in roots {
                w.write_record([
                    r.n().to_string(),
                    r.m().to_string(),
                    r.i.to_string(),
                    fmt.number(r.x),
                    r.iterations_used.to_string(),
                    residual_text(r.residual),
                ])?;
            }
            Ok(())
        }),
        FormatKind::Json => json_lines(roots.iter().map(|r| json_record(r, fmt)).collect()),
    }
}

/// `node weight` pairs of a quadrature rule.
pub fn render_rule<T: Real>(rule: &QuadratureRule<T>, fmt: &OutputFormat) -> String {
    match fmt.kind {
        FormatKind::Text => {
            let mut out = String::new();
            for (y, w) in rule.points() {
                let _ = writeln!(out, "{} {}", fmt.number(y), fmt.number(w));
            }
            out
        }
        FormatKind::Csv => csv_string(&["node", "weight"], |w| {
            for (y, wt) in rule.points() {
                w.write_record([fmt.number(y), fmt.number(wt)])?;
            }
            Ok(())
        }),
        FormatKind::Json => {
            let values = rule
                .points()
                .map(|(y, w)| {
                    let mut obj = Map::new();
                    obj.insert("node".into(), json_number(&fmt.number(y)));
                    obj.insert("weight".into(), json_number(&fmt.number(w)));
                    Value::Object(obj)
                })
                .collect();
            json_lines(values)
        }
    }
}

/// A root read back from rendered output, with its exact printed value.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRoot {
    pub n: u32,
    pub m: u32,
    pub i: u32,
    pub x: BigRational,
    /// Present in JSON output only.
    pub iterations: Option<u32>,
    pub residual: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    n: u32,
    m: u32,
    i: u32,
    x: String,
}

fn parse_x(s: &str) -> Result<BigRational> {
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a decimal number: `{s}`")))
}

fn parse_u32(v: Option<&Value>, key: &str) -> Result<u32> {
    v.and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| Error::Parse(format!("missing or invalid `{key}`")))
}

/// Parses the output of [`render_table`]. Text lines carry no rank, so it is
/// recovered from the position within each `(n, m)` group.
pub fn parse_table(input: &str, kind: FormatKind) -> Result<Vec<ParsedRoot>> {
    match kind {
        FormatKind::Text => {
            let mut out: Vec<ParsedRoot> = Vec::new();
            for (lineno, line) in input.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split(' ').collect();
                let [n, m, x] = fields[..] else {
                    return Err(Error::Parse(format!("line {}: expected `n m x`", lineno + 1)));
                };
                let n: u32 = n.parse().map_err(|_| Error::Parse(format!("line {}: bad n", lineno + 1)))?;
                let m: u32 = m.parse().map_err(|_| Error::Parse(format!("line {}: bad m", lineno + 1)))?;
                let i = match out.last() {
                    Some(prev) if prev.n == n && prev.m == m => prev.i + 1,
                    _ => 1,
                };
                out.push(ParsedRoot {
                    n,
                    m,
                    i,
                    x: parse_x(x)?,
                    iterations: None,
                    residual: None,
                });
            }
            Ok(out)
        }
        FormatKind::Csv => {
            let mut reader = csv::Reader::from_reader(input.as_bytes());
            let mut out = Vec::new();
            for row in reader.deserialize::<CsvRow>() {
                let row = row.map_err(|e| Error::Parse(e.to_string()))?;
                out.push(ParsedRoot {
                    n: row.n,
                    m: row.m,
                    i: row.i,
                    x: parse_x(&row.x)?,
                    iterations: None,
                    residual: None,
                });
            }
            Ok(out)
        }
        FormatKind::Json => {
            let value: Value = serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
            let items = value
                .as_array()
                .ok_or_else(|| Error::Parse("expected a JSON array".into()))?;
            items
                .iter()
                .map(|item| {
                    let x = match item.get("x") {
                        Some(Value::Number(num)) => parse_x(&num.to_string())?,
                        _ => return Err(Error::Parse("missing or invalid `x`".into())),
                    };
                    Ok(ParsedRoot {
                        n: parse_u32(item.get("n"), "n")?,
                        m: parse_u32(item.get("m"), "m")?,
                        i: parse_u32(item.get("i"), "i")?,
                        x,
                        iterations: item.get("iterations").and_then(Value::as_u64).map(|v| v as u32),
                        residual: item.get("residual").and_then(Value::as_f64),
                    })
                })
                .collect()
        }
    }
}

/// Rebuilds a [`RootTable`] from parsed rows. Missing iteration counts and
/// residuals become zero.
pub fn into_table<T: Real>(rows: &[ParsedRoot], nmax: u32) -> Result<RootTable<T>> {
    let records = rows
        .iter()
        .map(|r| {
            Ok(RootRecord {
                index: PolyIndex::new(r.n, r.m)?,
                i: r.i,
                x: T::from_rational(&r.x),
                iterations_used: r.iterations.unwrap_or(0),
                residual: r.residual.unwrap_or(0.0),
                restarts: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RootTable { nmax, records })
}
