//! Polynomial dependence on the level of the coefficients of computed
//! eigenvalues, in the monomial shape
//! `E_k^[m] = Σ_{D+|ν|=m} f_{D,ν}(k) Q_{k+D+2−ℓ(ν)} Π Q_{ν_i+1}`.
//!
//! Generators with negative index are taken to vanish, like `Q_1`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{fmt_rational, serde_rational, Matrix};
use crate::partitions::{enumerate_partitions, Partition};
use crate::shifted::{QExpr, QMonomial};
use crate::{rat, rint, RatMatrix, Rational};

/// Pairs `(D, ν)` with `D + |ν| = m`, ordered by `|ν|`.
pub fn shapes(m: u32) -> Vec<(u32, Partition)> {
    (0..=m).flat_map(|s| enumerate_partitions(s).into_iter().map(move |nu| (m - s, nu))).collect()
}

/// `Q_{k+D+2−ℓ(ν)} Π Q_{ν_i+1}`, or `None` when it vanishes.
pub fn designated_monomial(k: i64, d: u32, nu: &Partition) -> Option<QMonomial> {
    let main = k + d as i64 + 2 - nu.len() as i64;
    if main < 0 {
        return None;
    }
    let mut q: Vec<u32> = nu.parts().iter().map(|&x| x + 1).collect();
    q.push(main as u32);
    QMonomial::new(0, q)
}

/// The conjectured second-order eigenvalue at `c = 0`.
pub fn conjectural_second_order(k: u32) -> QExpr {
    let ki = k as i64;
    let q = QExpr::q;
    let lin = |i: i64| if i < 0 { QExpr::zero() } else { q(i as u32) };
    let mut e = q(3).mul(&lin(ki + 1)).scale(&rint(2));
    e = e.add(&q(2).mul(&q(2)).mul(&lin(ki)).scale(&rint(2)));
    e = e.add(&q(2).mul(&lin(ki + 2)).scale(&rint(2 * (ki * ki + 2 * ki - 1))));
    e = e.add(&lin(ki + 4).scale(&rat(ki * (ki + 4) * (3 * ki * ki + 16 * ki + 17), 6)));
    e.scale(&rat(1, 576))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FitStatus {
    /// Exact interpolation confirmed on surplus levels, degree within `2D`.
    /// `degree` is `None` for the zero polynomial.
    Fitted { degree: Option<usize> },
    Falsified { reason: String },
    /// Too few unobstructed levels to confirm the degree bound.
    Insufficient { points: usize },
}

/// One `f_{D,ν}` with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitRecord {
    #[serde(with = "partition_string")]
    pub nu: Partition,
    #[serde(rename = "D")]
    pub d: u32,
    /// Coefficients ascending in `k`.
    #[serde(with = "serde_rational::vec")]
    pub poly: Vec<Rational>,
    /// Levels used.
    pub ks: Vec<i64>,
    pub status: FitStatus,
}

mod partition_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::partitions::Partition;

    pub fn serialize<S: Serializer>(p: &Partition, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Partition, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FitRecord {
    pub fn eval(&self, k: i64) -> Rational {
        poly_eval(&self.poly, k)
    }

    pub fn degree(&self) -> Option<usize> {
        poly_degree(&self.poly)
    }

    pub fn is_fitted(&self) -> bool {
        matches!(self.status, FitStatus::Fitted { .. })
    }
}

pub fn poly_eval(p: &[Rational], k: i64) -> Rational {
    let x = rint(k);
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
}

pub fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Interpolates through all points but the last with degree at most
/// `len − 2` and checks the last one.
fn interpolate_with_check(points: &[(i64, Rational)]) -> Option<Vec<Rational>> {
    let n = points.len() - 1;
    let a: RatMatrix = Matrix::from_fn(n, n, |r, c| num_traits::pow(rint(points[r].0), c));
    let b: Vec<Rational> = points[..n].iter().map(|(_, v)| v.clone()).collect();
    let x = a.solve(&b).expect("Vandermonde on distinct nodes");
    let (kl, vl) = &points[n];
    (poly_eval(&x, *kl) == *vl).then(|| trim(x))
}

/// Everything learned about one order `m` from per-level fits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub m: u32,
    pub records: Vec<FitRecord>,
    /// `(k, monomial)` present in a fit but outside the conjectured shape.
    pub shape_violations: Vec<(i64, String)>,
    /// Levels where `Σ f_{D,ν}(k) · monomial` differs from the fit.
    pub reconstruction_failures: Vec<i64>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.shape_violations.is_empty()
            && self.reconstruction_failures.is_empty()
            && self.records.iter().all(FitRecord::is_fitted)
    }

    pub fn record(&self, d: u32, nu: &Partition) -> Option<&FitRecord> {
        self.records.iter().find(|r| r.d == d && &r.nu == nu)
    }
}

/// Recovers every `f_{D,ν}` with `D + |ν| = m` from the per-level fits of
/// `E_k^[m]`. A coefficient is read only at levels where its monomial is
/// nonzero and not shared with another shape; the remaining levels are
/// checked by reconstruction.
pub fn fit_f_dnu(fits: &BTreeMap<i64, QExpr>, m: u32) -> OrderReport {
    let sh = shapes(m);
    let mut shape_violations = Vec::new();
    let mut per_shape: Vec<Vec<(i64, Rational)>> = vec![Vec::new(); sh.len()];
    for (&k, e) in fits {
        let mons: Vec<Option<QMonomial>> = sh.iter().map(|(d, nu)| designated_monomial(k, *d, nu)).collect();
        for (mono, _) in e.terms() {
            if !mons.iter().any(|x| x.as_ref() == Some(mono)) {
                shape_violations.push((k, mono.to_string()));
            }
        }
        for (i, mono) in mons.iter().enumerate() {
            let Some(mono) = mono else { continue };
            if mons.iter().filter(|x| x.as_ref() == Some(mono)).count() == 1 {
                per_shape[i].push((k, e.coeff(mono)));
            }
        }
    }
    let records: Vec<FitRecord> = sh
        .iter()
        .zip(per_shape)
        .map(|((d, nu), pts)| {
            let ks: Vec<i64> = pts.iter().map(|(k, _)| *k).collect();
            let bound = 2 * *d as usize;
            if pts.len() < bound + 2 {
                let poly = if pts.len() >= 2 { interpolate_with_check(&pts).unwrap_or_default() } else { vec![] };
                return FitRecord { nu: nu.clone(), d: *d, poly, ks, status: FitStatus::Insufficient { points: pts.len() } };
            }
            let (poly, status) = match interpolate_with_check(&pts) {
                None => (vec![], FitStatus::Falsified { reason: "no polynomial of degree below the point count".into() }),
                Some(p) => {
                    let deg = poly_degree(&p);
                    let status = match deg {
                        Some(g) if g > bound => FitStatus::Falsified { reason: format!("degree {g} exceeds {bound}") },
                        _ => FitStatus::Fitted { degree: deg },
                    };
                    (p, status)
                }
            };
            FitRecord { nu: nu.clone(), d: *d, poly, ks, status }
        })
        .collect();
    let mut reconstruction_failures = Vec::new();
    if records.iter().all(FitRecord::is_fitted) {
        for (&k, e) in fits {
            let mut r = QExpr::zero();
            for rec in &records {
                if let Some(mono) = designated_monomial(k, rec.d, &rec.nu) {
                    r.add_term(mono, rec.eval(k));
                }
            }
            if &r != e {
                reconstruction_failures.push(k);
            }
        }
    }
    OrderReport { m, records, shape_violations, reconstruction_failures }
}

/// `nu,D,degree,status,c0;c1;...` with a header line.
pub fn records_to_csv(records: &[FitRecord]) -> String {
    let mut out = String::from("nu,D,degree,status,poly\n");
    for r in records {
        let status = match &r.status {
            FitStatus::Fitted { .. } => "fitted".to_string(),
            FitStatus::Falsified { reason } => format!("FALSIFIED ({reason})"),
            FitStatus::Insufficient { points } => format!("insufficient ({points} levels)"),
        };
        let deg = r.degree().map_or_else(|| "-".to_string(), |d| d.to_string());
        let poly: Vec<String> = r.poly.iter().map(fmt_rational).collect();
        out.push_str(&format!("\"{}\",{},{},{},{}\n", r.nu, r.d, deg, status, poly.join(";")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;
    use crate::shifted::{dubrovin_eigenvalue, first_order_eigenvalue};

    fn c_free(e: QExpr) -> QExpr {
        let mut out = QExpr::zero();
        for (m, c) in e.terms().filter(|(m, _)| m.c_exp == 0) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    #[test]
    fn designated_monomials() {
        assert_eq!(designated_monomial(1, 1, &Partition::empty()).unwrap().to_string(), "Q_4");
        assert_eq!(designated_monomial(1, 0, &part(&[1])).unwrap().to_string(), "Q_2*Q_2");
        assert_eq!(designated_monomial(0, 0, &part(&[1, 1, 1])), None);
        assert_eq!(designated_monomial(1, 0, &part(&[1, 1])), None);
        assert_eq!(designated_monomial(2, 0, &part(&[1, 1])).unwrap().to_string(), "Q_2*Q_2*Q_2");
        assert_eq!(designated_monomial(2, 0, &part(&[1, 1, 1])), None);
    }

    #[test]
    fn closed_forms_recover_known_polynomials() {
        let f0: BTreeMap<i64, QExpr> = (0..=8).map(|k| (k, c_free(dubrovin_eigenvalue(k as u32)))).collect();
        let r = fit_f_dnu(&f0, 0);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.records[0].poly, vec![rint(1)]);

        let f1: BTreeMap<i64, QExpr> = (0..=8).map(|k| (k, c_free(first_order_eigenvalue(k as u32)))).collect();
        let r = fit_f_dnu(&f1, 1);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.record(1, &Partition::empty()).unwrap().poly, vec![rint(0), rat(3, 24), rat(1, 24)]);
        assert_eq!(r.record(0, &part(&[1])).unwrap().poly, vec![rat(1, 12)]);

        let f2: BTreeMap<i64, QExpr> = (0..=8).map(|k| (k, conjectural_second_order(k as u32))).collect();
        let r = fit_f_dnu(&f2, 2);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.record(0, &part(&[2])).unwrap().poly, vec![rat(1, 288)]);
        assert_eq!(r.record(0, &part(&[1, 1])).unwrap().poly, vec![rat(1, 288)]);
    }

    #[test]
    fn off_shape_terms_are_reported() {
        let mut f: BTreeMap<i64, QExpr> = (0..=6).map(|k| (k, c_free(first_order_eigenvalue(k as u32)))).collect();
        let extra = f[&3].add(&QExpr::q(3).mul(&QExpr::q(3)));
        f.insert(3, extra);
        let r = fit_f_dnu(&f, 1);
        assert!(!r.passed());
        assert_eq!(r.shape_violations.len(), 1);
    }

    #[test]
    fn csv_and_json() {
        let f1: BTreeMap<i64, QExpr> = (0..=6).map(|k| (k, c_free(first_order_eigenvalue(k as u32)))).collect();
        let r = fit_f_dnu(&f1, 1);
        let csv = records_to_csv(&r.records);
        assert!(csv.lines().count() == 3);
        let j = serde_json::to_string(&r.records).unwrap();
        let back: Vec<FitRecord> = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r.records);
    }
}
