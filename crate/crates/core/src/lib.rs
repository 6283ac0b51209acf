//! Exact spectral engine for the quantum KdV hierarchy.
//!
//! The crate builds the commuting Hamiltonians of the hierarchy from a
//! commutator recursion, realizes them as exact matrices on the graded
//! bosonic Fock space, checks them against closed fermionic formulas and
//! diagonalizes the family order by order in the dispersion parameter.
//!
//! Arithmetic in [`exact`] is generic over a [`exact::Scalar`]; everything
//! downstream works with the concrete aliases defined here.

pub mod boson;
pub mod exact;
pub mod fermion;
pub mod hierarchy;
pub mod lab;
pub mod partitions;
pub mod shifted;
pub mod spectral;

/// Exact rational number used throughout the engine.
pub type Rational = num_rational::BigRational;
/// Sparse multivariate polynomial with rational coefficients.
pub type RatPoly = exact::MultiPoly<Rational>;
/// Dense rational matrix.
pub type RatMatrix = exact::Matrix<Rational>;

pub use exact::{rat, rint};
pub use partitions::Partition;
