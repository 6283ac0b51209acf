//! Scalars, sparse polynomials, formal power series and dense linear algebra.

mod matrix;
mod poly;
mod scalar;
mod series;

pub use matrix::{Matrix, SolveError};
pub use poly::{MultiPoly, Vars};
pub use scalar::{fmt_rational, parse_rational, rat, rint, serde_rational, Scalar};
pub use series::{SeriesError, SeriesExpr, SeriesSpec};
