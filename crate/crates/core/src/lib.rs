//! Roots of Zernike radial polynomials `R_n^m` and the Gauss quadrature rules
//! built from them.
//!
//! The roots are found by a third-order Newton iteration whose only input is
//! the ratio `F/F'` of a terminating Gauss hypergeometric function, computed
//! from a finite continued fraction. All numerics are generic over [`Real`],
//! with `f64` and [`DoubleDouble`] backends.

pub mod decimal;
pub mod error;
pub mod hypergeom;
pub mod output;
pub mod polynomial;
pub mod quadrature;
pub mod ratios;
pub mod real;
pub mod solver;

pub use error::{Error, Result};
pub use output::{FormatKind, OutputFormat};
pub use polynomial::PolyIndex;
pub use quadrature::{gauss_rule, QuadratureRule};
pub use real::{DoubleDouble, Precision, Real};
pub use solver::{all_roots, newton_root, root_table, NewtonConfig, RootRecord, RootTable};
