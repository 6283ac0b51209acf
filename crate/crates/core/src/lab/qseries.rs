//! q-brackets of functions on partitions and a test for membership in the
//! ring of level-one quasimodular forms `Q[E_2, E_4, E_6]`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::LabError;
use crate::exact::{serde_rational, Matrix, SolveError};
use crate::partitions::{enumerate_partitions, Partition};
use crate::shifted::{bernoulli, QExpr, QMonomial, QValues};
use crate::{rint, RatMatrix, Rational};

/// Coefficients of `q^0..=q^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QSeries {
    #[serde(with = "serde_rational::vec")]
    pub coeffs: Vec<Rational>,
    pub weight: Option<u32>,
}

impl QSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        QSeries { coeffs, weight: None }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        QSeries::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut one = vec![Rational::zero(); self.coeffs.len()];
        one[0] = Rational::one();
        (0..e).fold(QSeries::new(one), |acc, _| acc.mul(self))
    }

    /// `self / d` for `d` with constant term one.
    fn div_unit(&self, d: &[Rational]) -> Self {
        assert!(d[0].is_one());
        let n = self.coeffs.len();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = self.coeffs[i].clone();
            for j in 1..=i.min(d.len() - 1) {
                s -= &d[j] * &out[i - j];
            }
            out.push(s);
        }
        QSeries::new(out)
    }
}

/// `q`-brackets (at `c = 0`) of several functions at once, to order `q^N`.
/// Each distinct monomial is bracketed once, in a single pass over all
/// partitions of size at most `N`, and the results are combined linearly.
pub fn q_brackets(fs: &[QExpr], n: u32) -> Vec<QSeries> {
    let monos: Vec<QMonomial> = fs
        .iter()
        .flat_map(|f| f.terms().map(|(m, _)| m.clone()))
        .filter(|m| m.c_exp == 0)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let kmax = monos.iter().flat_map(|m| m.q.first().copied()).max().unwrap_or(0);
    let c0 = Rational::zero();
    // sums[size][monomial]
    let sums: Vec<Vec<Rational>> = (0..=n)
        .into_par_iter()
        .map(|s| {
            let mut acc = vec![Rational::zero(); monos.len()];
            for l in enumerate_partitions(s) {
                let qv = QValues::new(&l, kmax);
                for (a, m) in acc.iter_mut().zip(&monos) {
                    *a += m.eval(&qv, &c0);
                }
            }
            acc
        })
        .collect();
    let counts: Vec<Rational> = (0..=n).map(|s| rint(enumerate_partitions(s).len() as i64)).collect();
    let per_mono: BTreeMap<&QMonomial, QSeries> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m, QSeries::new(sums.iter().map(|row| row[i].clone()).collect()).div_unit(&counts)))
        .collect();
    fs.iter()
        .map(|f| {
            let mut c = vec![Rational::zero(); n as usize + 1];
            for (m, k) in f.terms().filter(|(m, _)| m.c_exp == 0) {
                for (x, y) in c.iter_mut().zip(&per_mono[m].coeffs) {
                    *x += k * y;
                }
            }
            QSeries { coeffs: c, weight: f.weight() }
        })
        .collect()
}

pub fn q_bracket(f: &QExpr, n: u32) -> QSeries {
    q_brackets(std::slice::from_ref(f), n).pop().unwrap()
}

/// `q`-bracket of tabulated values, which must cover every partition of size
/// at most `n`.
pub fn q_bracket_values(f: impl Fn(&Partition) -> Option<Rational>, n: u32) -> Result<QSeries, LabError> {
    let mut num = Vec::with_capacity(n as usize + 1);
    let mut counts = Vec::with_capacity(n as usize + 1);
    for s in 0..=n {
        let parts = enumerate_partitions(s);
        let mut acc = Rational::zero();
        for l in &parts {
            acc += f(l).ok_or_else(|| LabError::MissingValue(l.clone()))?;
        }
        num.push(acc);
        counts.push(rint(parts.len() as i64));
    }
    Ok(QSeries::new(num).div_unit(&counts))
}

fn divisor_power_sum(n: u64, p: u32) -> BigInt {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(p)).sum()
}

/// `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) q^n` to order `q^N`, `k ≥ 2` even.
pub fn eisenstein(k: u32, n: u32) -> QSeries {
    assert!(k >= 2 && k.is_multiple_of(2));
    let f = -rint(2 * k as i64) / bernoulli(k as usize);
    let mut c = vec![Rational::one()];
    c.extend((1..=n as u64).map(|m| &f * Rational::from_integer(divisor_power_sum(m, k - 1))));
    QSeries { coeffs: c, weight: Some(k) }
}

/// Exponents `(a, b, c)` of `E_2^a E_4^b E_6^c` with `2a + 4b + 6c = w`.
pub fn quasimodular_basis(w: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    if w % 2 == 1 {
        return out;
    }
    for c in 0..=w / 6 {
        for b in 0..=(w - 6 * c) / 4 {
            let r = w - 6 * c - 4 * b;
            out.push((r / 2, b, c));
        }
    }
    out
}

/// Safety margin of coefficients beyond the dimension.
pub const QUASIMODULAR_MARGIN: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasimodularResult {
    pub weight: u32,
    pub truncation: usize,
    pub passed: bool,
    /// `((a, b, c), coefficient)` when the check passes.
    pub decomposition: Vec<((u32, u32, u32), String)>,
    /// First coefficient index contradicting the fit, when it fails.
    pub witness: Option<usize>,
}

/// Fits `s` in the basis of weight-`w` quasimodular forms using all available
/// coefficients and reports whether the fit is exact.
pub fn quasimodular_check(s: &QSeries, w: u32) -> Result<QuasimodularResult, LabError> {
    let basis = quasimodular_basis(w);
    let n = s.truncation();
    let dim = basis.len();
    if n <= dim + QUASIMODULAR_MARGIN {
        return Err(LabError::TruncationTooShort { truncation: n, needed: dim + QUASIMODULAR_MARGIN + 1 });
    }
    let nn = n as u32;
    let (e2, e4, e6) = (eisenstein(2, nn), eisenstein(4, nn), eisenstein(6, nn));
    let cols: Vec<QSeries> =
        basis.iter().map(|&(a, b, c)| e2.pow(a).mul(&e4.pow(b)).mul(&e6.pow(c))).collect();
    let zero = |witness| QuasimodularResult { weight: w, truncation: n, passed: false, decomposition: vec![], witness };
    if dim == 0 {
        return Ok(match s.coeffs.iter().position(|c| !c.is_zero()) {
            None => QuasimodularResult { passed: true, ..zero(None) },
            Some(i) => zero(Some(i)),
        });
    }
    let a: RatMatrix = Matrix::from_fn(n + 1, dim, |r, c| cols[c].coeffs[r].clone());
    match a.solve(&s.coeffs) {
        Ok(x) => Ok(QuasimodularResult {
            weight: w,
            truncation: n,
            passed: true,
            decomposition: basis.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, crate::exact::fmt_rational(&c))).collect(),
            witness: None,
        }),
        Err(SolveError::Inconsistent { rows }) => Ok(zero(rows.first().copied())),
        Err(SolveError::RankDeficient { .. }) => {
            Err(LabError::TruncationTooShort { truncation: n, needed: n + 1 })
        }
        Err(e) => Err(LabError::Solve(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn bracket_of_constants_and_q2() {
        let one = q_bracket(&QExpr::one(), 10);
        assert_eq!(one.coeffs[0], rint(1));
        assert!(one.coeffs[1..].iter().all(Zero::is_zero));

        let q2 = q_bracket(&QExpr::q(2), 10);
        let want = [rat(-1, 24), rint(1), rint(3), rint(4), rint(7), rint(6), rint(12)];
        assert_eq!(&q2.coeffs[..7], &want);
        assert!(q_bracket(&QExpr::q(1), 5).coeffs.iter().all(Zero::is_zero));
    }

    #[test]
    fn eisenstein_coefficients() {
        assert_eq!(eisenstein(2, 3).coeffs, vec![rint(1), rint(-24), rint(-72), rint(-96)]);
        assert_eq!(eisenstein(4, 2).coeffs, vec![rint(1), rint(240), rint(2160)]);
        assert_eq!(eisenstein(6, 1).coeffs, vec![rint(1), rint(-504)]);
        // E_4^2 = E_8
        let e8 = eisenstein(8, 20);
        assert_eq!(eisenstein(4, 20).pow(2), QSeries { weight: None, ..e8 });
    }

    #[test]
    fn q2_decomposes_as_minus_e2_over_24() {
        let r = quasimodular_check(&q_bracket(&QExpr::q(2), 30), 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.decomposition, vec![((1, 0, 0), "-1/24".to_string())]);
        let r = quasimodular_check(&q_bracket(&QExpr::q(1), 30), 2).unwrap();
        assert!(r.passed && r.decomposition.is_empty());
    }

    #[test]
    fn wrong_weight_fails_and_short_truncation_errors() {
        let s = q_bracket(&QExpr::q(4), 30);
        assert!(!quasimodular_check(&s, 2).unwrap().passed);
        assert!(quasimodular_check(&q_bracket(&QExpr::q(2), 8), 2).is_err());
    }

    #[test]
    fn values_and_expressions_agree() {
        let f = QExpr::q(3).mul(&QExpr::q(2));
        let a = q_bracket(&f, 12);
        let b = q_bracket_values(|l| Some(f.eval(l, &rint(0))), 12).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
    }
}
