//! Published reference values of `f_{D,ν}(k)`, transcribed as a scalar times
//! a product of integer polynomials (coefficients ascending in `k`).

use num_traits::Zero;
use serde::Serialize;

use super::conjecture::{poly_degree, FitRecord, OrderReport};
use crate::partitions::{part, Partition};
use crate::{rat, rint, Rational};

/// One row `(ν, D, f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub nu: Partition,
    pub d: u32,
    pub poly: Vec<Rational>,
}

impl ReferenceRow {
    pub fn order(&self) -> u32 {
        self.d + self.nu.size()
    }
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn row(nu: &[u32], d: u32, num: i64, den: i64, factors: &[&[i64]]) -> ReferenceRow {
    let mut p = vec![rat(num, den)];
    for f in factors {
        let f: Vec<Rational> = f.iter().map(|&c| rint(c)).collect();
        p = mul(&p, &f);
    }
    ReferenceRow { nu: part(nu), d, poly: p }
}

const K: &[i64] = &[0, 1];

/// The full published table.
pub fn reference_table() -> Vec<ReferenceRow> {
    vec![
        row(&[], 0, 1, 1, &[]),
        row(&[], 1, 1, 24, &[K, &[3, 1]]),
        row(&[], 2, 1, 3456, &[K, &[4, 1], &[17, 16, 3]]),
        row(&[], 3, 1, 1244160, &[K, &[5, 1], &[50, 1405, 896, 210, 15]]),
        row(&[], 4, 1, 597196800, &[K, &[6, 1], &[-277382, -100568, 89913, 68042, 17570, 1950, 75]]),
        row(
            &[],
            5,
            1,
            300987187200,
            &[K, &[7, 1], &[-59164224, -99890840, -39506516, 142128, 4539665, 1433012, 199920, 13020, 315]],
        ),
        row(&[1], 0, 1, 12, &[]),
        row(&[1], 1, 1, 288, &[&[-1, 2, 1]]),
        row(&[1], 2, 1, 207360, &[&[1, 1], &[-616, -148, 95, 15]]),
        row(&[1], 3, 1, 14929920, &[&[-7482, -33159, -24476, -5229, 467, 240, 15]]),
        row(
            &[1],
            4,
            1,
            50164531200,
            &[&[32402640, 25552736, -11934720, -17900130, -5919635, -448826, 91910, 14700, 525]],
        ),
        row(&[2], 0, 1, 288, &[]),
        row(&[2], 1, 1, 103680, &[&[278, 323, 15]]),
        row(&[2], 2, 1, 4976640, &[&[-30, 3631, 3170, 696, 15]]),
        row(&[2], 3, 1, 2508226560, &[&[-1993680, -3262016, -1345564, 27485, 85309, 7833, 105]]),
        row(&[1, 1], 0, 1, 288, &[]),
        row(&[1, 1], 1, 1, 6912, &[K, &[1, 1]]),
        row(&[1, 1], 2, 1, 4976640, &[&[-60, -486, -421, 80, 15]]),
        row(&[1, 1], 3, 1, 358318080, &[&[-4056, -22834, -24029, -9599, -832, 195, 15]]),
        row(&[3], 0, -1, 6912, &[]),
        row(&[3], 1, -1, 165888, &[K, &[1, 1]]),
        row(&[3], 2, 1, 119439360, &[&[60, 486, 421, -80, -15]]),
        row(&[2, 1], 0, 1, 3456, &[]),
        row(&[2, 1], 1, 1, 1244160, &[&[30, 308, 15]]),
        row(&[2, 1], 2, 1, 59719680, &[&[1052, 2271, 1690, 666, 15]]),
        row(&[1, 1, 1], 0, 1, 10368, &[]),
        row(&[1, 1, 1], 1, 1, 248832, &[&[3, 0, 1]]),
        row(&[1, 1, 1], 2, 1, 179159040, &[&[60, 994, -699, 50, 15]]),
        row(&[4], 0, -967, 829440, &[]),
        row(&[4], 1, 1, 418037760, &[&[-229408, -290329, -20307]]),
        row(&[3, 1], 0, -109, 622080, &[]),
        row(&[3, 1], 1, 1, 29859840, &[&[-1488, 1247, -218]]),
        row(&[2, 2], 0, 1, 165888, &[]),
        row(&[2, 2], 1, 1, 59719680, &[&[1232, 601, 15]]),
        row(&[2, 1, 1], 0, 1, 82944, &[]),
        row(&[2, 1, 1], 1, 1, 29859840, &[&[-188, 293, 15]]),
        row(&[1, 1, 1, 1], 0, 1, 497664, &[]),
        row(&[1, 1, 1, 1], 1, 1, 11943936, &[&[8, -1, 1]]),
        row(&[5], 0, 253, 2903040, &[]),
        row(&[4, 1], 0, 967, 238878720, &[]),
        row(&[3, 2], 0, -109, 8599633920, &[]),
        row(&[3, 1, 1], 0, 109, 206391214080, &[]),
        row(&[2, 2, 1], 0, 1, 660451885056, &[]),
        row(&[2, 1, 1, 1], 0, -1, 23776267862016, &[]),
        row(&[1, 1, 1, 1, 1], 0, 1, 5706304286883840, &[]),
    ]
}

/// Outcome of comparing one reference row with a computed record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Match,
    Mismatch,
    /// The computed record exists but was not confirmed on surplus levels.
    Unconfirmed,
    /// The order of this row was not computed.
    NotCovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowComparison {
    pub nu: String,
    #[serde(rename = "D")]
    pub d: u32,
    pub status: RowStatus,
    pub reference_degree: Option<usize>,
    pub computed_degree: Option<usize>,
}

/// Compares every reference row against the computed order reports.
pub fn compare_with_reference(reports: &[OrderReport]) -> Vec<RowComparison> {
    reference_table()
        .into_iter()
        .map(|r| {
            let rec: Option<&FitRecord> =
                reports.iter().find(|o| o.m == r.order()).and_then(|o| o.record(r.d, &r.nu));
            let status = match rec {
                None => RowStatus::NotCovered,
                Some(c) if !c.is_fitted() => RowStatus::Unconfirmed,
                Some(c) if c.poly == r.poly => RowStatus::Match,
                Some(_) => RowStatus::Mismatch,
            };
            RowComparison {
                nu: r.nu.to_string(),
                d: r.d,
                status,
                reference_degree: poly_degree(&r.poly),
                computed_degree: rec.and_then(FitRecord::degree),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_respect_degree_bound() {
        for r in reference_table() {
            let deg = poly_degree(&r.poly).unwrap();
            assert!(deg <= 2 * r.d as usize, "{} {}", r.nu, r.d);
        }
    }

    #[test]
    fn spot_values() {
        let t = reference_table();
        let get = |nu: &[u32], d| t.iter().find(|r| r.nu == part(nu) && r.d == d).unwrap();
        assert_eq!(get(&[], 1).poly, vec![rint(0), rat(1, 8), rat(1, 24)]);
        assert_eq!(get(&[4], 0).poly, vec![rat(-967, 829440)]);
        assert_eq!(t.len(), 45);
    }
}
