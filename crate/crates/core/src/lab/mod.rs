//! Evidence for the structure of the eigenvalues: exact fits into shifted
//! symmetric functions, the level dependence of their coefficients, and
//! quasimodularity of q-brackets.

mod appendix;
mod conjecture;
mod fit;
mod qseries;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::SolveError;
use crate::hierarchy::Hierarchy;
use crate::partitions::Partition;
use crate::shifted::{monomial_basis_c0, QExpr, QMonomial};
use crate::spectral::{perturb_with, PerturbConfig, SpectralError};
use crate::Rational;

pub use appendix::{compare_with_reference, reference_table, ReferenceRow, RowComparison, RowStatus};
pub use conjecture::{
    conjectural_second_order, designated_monomial, fit_f_dnu, poly_degree, poly_eval, records_to_csv, shapes,
    FitRecord, FitStatus, OrderReport,
};
pub use fit::{evaluate_on, fit_in_basis, fit_shifted_symmetric, FitOutcome};
pub use qseries::{
    eisenstein, q_bracket, q_bracket_values, q_brackets, quasimodular_basis, quasimodular_check, QSeries,
    QuasimodularResult, QUASIMODULAR_MARGIN,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("evaluation matrix on partitions of size <= {n_max} has rank {rank} < {dim}; increase N")]
    RankDeficient { n_max: u32, rank: usize, dim: usize },
    #[error("{values} values do not exceed {unknowns} unknowns")]
    TooFewValues { values: usize, unknowns: usize },
    #[error("truncation q^{truncation} too short; need more than {needed} coefficients")]
    TruncationTooShort { truncation: usize, needed: usize },
    #[error("no value for partition {0}")]
    MissingValue(Partition),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Computed eigenvalues `E_k^[m](λ; 0)` for `|λ| ≤ n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenTables {
    pub n_max: u32,
    pub m_max: u32,
    pub levels: Vec<i64>,
    pub values: BTreeMap<(i64, u32), BTreeMap<Partition, Rational>>,
}

/// Runs the perturbative solve on every degree up to `n_max`, separating with
/// the default level set and reporting levels `0..=k_max`.
pub fn eigen_tables(hier: &Hierarchy, n_max: u32, k_max: i64, m_max: u32) -> Result<EigenTables, LabError> {
    let levels: Vec<i64> = (0..=k_max).collect();
    let per_n = (0..=n_max)
        .into_par_iter()
        .map(|n| perturb_with(hier, &PerturbConfig::new(n, m_max).with_extra_levels(levels.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut values: BTreeMap<(i64, u32), BTreeMap<Partition, Rational>> = BTreeMap::new();
    for d in per_n {
        for e in d.entries {
            for ((k, m), v) in e.e {
                if k >= 0 && k <= k_max {
                    values.entry((k, m)).or_default().insert(e.lambda.clone(), v);
                }
            }
        }
    }
    Ok(EigenTables { n_max, m_max, levels, values })
}

/// Which ansatz a per-level fit used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitBasis {
    /// All monomials of the homogeneous weight.
    Homogeneous,
    /// Only the monomials of the conjectured shape; used when the available
    /// partitions cannot separate the full weight space.
    ConjectureShaped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenFit {
    pub k: i64,
    pub m: u32,
    pub weight: u32,
    pub basis: FitBasis,
    pub outcome: FitOutcome,
}

/// The distinct nonzero monomials of the conjectured shape at level `k`.
pub fn conjecture_shaped_basis(k: i64, m: u32) -> Vec<QMonomial> {
    let mut b: Vec<QMonomial> = shapes(m).iter().filter_map(|(d, nu)| designated_monomial(k, *d, nu)).collect();
    b.sort();
    b.dedup();
    b
}

/// Fits every tabulated `E_k^[m]` in weight `k + 2 + m`, falling back to the
/// conjecture-shaped ansatz only when the homogeneous basis is rank deficient
/// on the available partitions.
pub fn fit_eigenvalues(t: &EigenTables) -> Result<BTreeMap<(i64, u32), EigenFit>, LabError> {
    t.values
        .par_iter()
        .map(|(&(k, m), vals)| {
            let weight = (k + 2) as u32 + m;
            let (basis, outcome) = match fit_in_basis(vals, &monomial_basis_c0(weight)) {
                Ok(o) => (FitBasis::Homogeneous, o),
                Err(LabError::RankDeficient { .. } | LabError::TooFewValues { .. }) => {
                    (FitBasis::ConjectureShaped, fit_in_basis(vals, &conjecture_shaped_basis(k, m))?)
                }
                Err(e) => return Err(e),
            };
            Ok(((k, m), EigenFit { k, m, weight, basis, outcome }))
        })
        .collect()
}

/// Level-dependence reports for every order, from the per-level fits that
/// succeeded. Levels whose fit was falsified are left out of the report and
/// surface as a failed fit instead.
pub fn order_reports(fits: &BTreeMap<(i64, u32), EigenFit>, m_max: u32) -> Vec<OrderReport> {
    (0..=m_max)
        .map(|m| {
            let per_k: BTreeMap<i64, QExpr> = fits
                .values()
                .filter(|f| f.m == m)
                .filter_map(|f| f.outcome.expr().map(|e| (f.k, e.clone())))
                .collect();
            fit_f_dnu(&per_k, m)
        })
        .collect()
}
