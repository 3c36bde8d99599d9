use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid index (n={n}, m={m}): {reason}")]
    InvalidIndex { n: i64, m: i64, reason: &'static str },

    #[error("invalid power decomposition x^{i} with m={m}: {reason}")]
    InvalidPower { i: i64, m: i64, reason: &'static str },

    #[error("derivative order {0} not supported (0..=3)")]
    DerivativeOrder(u32),

    #[error("hypergeometric parameter a={0} must be a negative integer")]
    NonTerminating(i64),

    #[error("continued fraction hit a pole at level {level}")]
    Pole { level: i64 },

    #[error("x={x} is too close to a singular point of the derivative identities")]
    SingularPoint { x: f64 },

    #[error("no positive roots for n = m = {0}")]
    NoPositiveRoots(u32),

    #[error("starting point x0={x0} outside (0, 1)")]
    StartOutOfRange { x0: f64 },

    #[error("R_{n}^{m}: no convergence after {iterations} iterations (last x={last}, gap={gap:e})")]
    NoConvergence { n: u32, m: u32, iterations: u32, last: f64, gap: f64 },

    #[error("R_{n}^{m}: bootstrap failed at root {rank}: {detail}")]
    Bootstrap { n: u32, m: u32, rank: u32, detail: String },

    #[error("oracle for R_{n}^{m} found {found} sign changes, expected {expected}")]
    Oracle { n: u32, m: u32, found: usize, expected: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("moment system for m={m}, s={s} is ill-conditioned: {detail}")]
    IllConditioned { m: u32, s: u32, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}
