//! Command-line front end: root tables, single-polynomial roots and Gauss
//! rules.

use std::fmt;

use clap::{Parser, Subcommand, ValueEnum};

use zernike_roots::output::{render_roots, render_rule, render_table};
use zernike_roots::{
    all_roots, gauss_rule, root_table, DoubleDouble, Error, FormatKind, NewtonConfig, OutputFormat,
    PolyIndex, Precision, Real,
};

/// Largest `nmax` accepted by `table`.
pub const MAX_NMAX: u32 = 60;
/// Largest point count accepted by `quad`.
pub const MAX_POINTS: u32 = 12;

#[derive(Debug, Parser)]
#[command(name = "zernroots", version, about = "Roots of Zernike radial polynomials and Gauss rules built from them")]
pub struct Cli {
    /// Stop when a Newton step is shorter than this [default: 1e-15, or
    /// max(10^-precision, 1e-30) in extended precision]
    #[arg(long, global = true)]
    pub eps: Option<f64>,

    /// Significant digits printed
    #[arg(long, global = true, default_value_t = 19)]
    pub digits: usize,

    /// Working precision in decimal digits (15-16: double, 17-32: double-double)
    #[arg(long, global = true, default_value_t = 16)]
    pub precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl From<Format> for FormatKind {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => FormatKind::Text,
            Format::Csv => FormatKind::Csv,
            Format::Json => FormatKind::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All positive roots for every (n, m) with n <= nmax
    Table {
        #[arg(long)]
        nmax: u32,
    },
    /// Roots of one R_n^m with iteration counts and residuals
    Roots {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Gauss rule with s points for the weight y^m on [0, 1]
    Quad {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Failed(_) => 1,
            Self::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(msg) | Self::Failed(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidIndex { .. }
            | Error::InvalidPower { .. }
            | Error::DerivativeOrder(_)
            | Error::NonTerminating(_)
            | Error::StartOutOfRange { .. }
            | Error::Config(_)
            | Error::Parse(_) => Self::Usage(e.to_string()),
            _ => Self::Failed(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Solver settings from the global flags.
pub fn config(cli: &Cli) -> Result<(NewtonConfig, Precision), CliError> {
    let precision = Precision::for_digits(cli.precision)
        .filter(|_| cli.precision >= 15)
        .ok_or_else(|| usage(format!("--precision must be between 15 and {}, got {}", Precision::MAX_DIGITS, cli.precision)))?;
    let mut cfg = NewtonConfig::for_precision(precision);
    cfg.precision_digits = cli.precision;
    if precision == Precision::DoubleDouble {
        cfg.eps = 10f64.powi(-(cli.precision as i32)).max(1e-30);
    }
    if let Some(eps) = cli.eps {
        cfg.eps = eps;
    }
    match precision {
        Precision::Double => cfg.check::<f64>()?,
        Precision::DoubleDouble => cfg.check::<DoubleDouble>()?,
    }
    Ok((cfg, precision))
}

fn table<T: Real>(nmax: u32, cfg: &NewtonConfig, fmt: &OutputFormat) -> Result<String, CliError> {
    Ok(render_table(&root_table::<T>(nmax, cfg)?, fmt))
}

fn roots<T: Real>(idx: PolyIndex, cfg: &NewtonConfig, fmt: &OutputFormat) -> Result<String, CliError> {
    Ok(render_roots(&all_roots::<T>(idx, cfg)?, fmt))
}

/// Runs one command and returns what goes to standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let fmt = OutputFormat::new(cli.format.into(), cli.digits)?;
    let (cfg, precision) = config(cli)?;
    match cli.command {
        Command::Table { nmax } => {
            if nmax > MAX_NMAX {
                return Err(usage(format!("--nmax must be at most {MAX_NMAX}, got {nmax}")));
            }
            match precision {
                Precision::Double => table::<f64>(nmax, &cfg, &fmt),
                Precision::DoubleDouble => table::<DoubleDouble>(nmax, &cfg, &fmt),
            }
        }
        Command::Roots { n, m } => {
            let idx = PolyIndex::from_signed(n, m)?;
            match precision {
                Precision::Double => roots::<f64>(idx, &cfg, &fmt),
                Precision::DoubleDouble => roots::<DoubleDouble>(idx, &cfg, &fmt),
            }
        }
        Command::Quad { m, s } => {
            if !(1..=MAX_POINTS).contains(&s) {
                return Err(usage(format!("--s must be between 1 and {MAX_POINTS}, got {s}")));
            }
            // rules are always built in double-double; the moment solve needs it
            let mut qcfg = NewtonConfig::extended();
            if let Some(eps) = cli.eps {
                qcfg.eps = eps;
                qcfg.check::<DoubleDouble>()?;
            }
            let rule = gauss_rule::<DoubleDouble>(m, s, &qcfg)?;
            Ok(render_rule(&rule, &fmt))
        }
    }
}
