//! Exact fits of functions on partitions into `Λ*`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::LabError;
use crate::exact::{Matrix, SolveError};
use crate::partitions::Partition;
use crate::shifted::{monomial_basis_c0, QExpr, QMonomial, QValues};
use crate::{RatMatrix, Rational};

/// Result of a fit that may be contradicted by surplus data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitOutcome {
    Fit(QExpr),
    Falsified { witness: Partition },
}

impl FitOutcome {
    pub fn expr(&self) -> Option<&QExpr> {
        match self {
            FitOutcome::Fit(e) => Some(e),
            FitOutcome::Falsified { .. } => None,
        }
    }
}

/// Fits `values` (at `c = 0`) by a combination of `basis`, using every value
/// and requiring strictly more values than unknowns.
pub fn fit_in_basis(values: &BTreeMap<Partition, Rational>, basis: &[QMonomial]) -> Result<FitOutcome, LabError> {
    let rows: Vec<(&Partition, &Rational)> = values.iter().collect();
    let dim = basis.len();
    let n_max = rows.iter().map(|(l, _)| l.size()).max().unwrap_or(0);
    if dim == 0 {
        return Ok(match rows.iter().find(|(_, v)| !v.is_zero()) {
            Some((l, _)) => FitOutcome::Falsified { witness: (*l).clone() },
            None => FitOutcome::Fit(QExpr::zero()),
        });
    }
    if rows.len() <= dim {
        return Err(LabError::TooFewValues { values: rows.len(), unknowns: dim });
    }
    let kmax = basis.iter().flat_map(|m| m.q.first().copied()).max().unwrap_or(0);
    let c0 = Rational::zero();
    let qvs: Vec<QValues> = rows.iter().map(|(l, _)| QValues::new(l, kmax)).collect();
    let a: RatMatrix = Matrix::from_fn(rows.len(), dim, |r, c| basis[c].eval(&qvs[r], &c0));
    let b: Vec<Rational> = rows.iter().map(|(_, v)| (*v).clone()).collect();
    match a.solve(&b) {
        Ok(x) => {
            let mut e = QExpr::zero();
            for (m, c) in basis.iter().zip(x) {
                e.add_term(m.clone(), c);
            }
            Ok(FitOutcome::Fit(e))
        }
        Err(SolveError::Inconsistent { rows: bad }) => Ok(FitOutcome::Falsified { witness: rows[bad[0]].0.clone() }),
        Err(SolveError::RankDeficient { rank, cols }) => Err(LabError::RankDeficient { n_max, rank, dim: cols }),
        Err(e @ SolveError::Shape(_)) => Err(LabError::Solve(e)),
    }
}

/// The unique element of `Λ*` of homogeneous weight `weight` matching every
/// value.
pub fn fit_shifted_symmetric(values: &BTreeMap<Partition, Rational>, weight: u32) -> Result<FitOutcome, LabError> {
    fit_in_basis(values, &monomial_basis_c0(weight))
}

/// `values` of `f` at every partition in `parts`.
pub fn evaluate_on<'a>(f: &QExpr, parts: impl IntoIterator<Item = &'a Partition>) -> BTreeMap<Partition, Rational> {
    parts.into_iter().map(|l| (l.clone(), f.eval(l, &Rational::zero()))).collect()
}
