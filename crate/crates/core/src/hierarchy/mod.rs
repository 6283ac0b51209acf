//! The recursion for the quantum dispersive KdV densities and extraction of
//! the commuting Hamiltonians.
//!
//! A level-`k`, order-`j` density is `Σ_{n,h} ħ^h Σ_a P_{n,h}(a) :ω_{a_1}…ω_{a_n}: z^{Σa}`
//! summed over all integer mode tuples, with `P_{n,h}` symmetric (the `1/n!`
//! is inside `P`) and `k = 2h + j + n − 2`. Orders are coefficients of `(ε/24)^j`.

mod diffpoly;
mod extract;
mod recursion;
mod sympoly;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::serde_rational;
use crate::Rational;

pub use diffpoly::{to_differential_polynomial, DiffPoly};
pub use extract::{extract_hamiltonian, extract_hamiltonian_at_zero, extract_hamiltonian_direct};
pub use recursion::{step_level, Channel};
pub use sympoly::{eval_monomial_symmetric, even_basis, SymPoly, SymTermJson};

/// Version tag of the recursion engine, part of cache keys.
pub const ENGINE_VERSION: &str = "br-interp-1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("interpolation for level {k}, order {j}, shape ({n},{h}) is inconsistent: {detail}")]
    Inconsistent { k: i64, j: u32, n: u32, h: u32, detail: String },
    #[error("held-out node {node:?} disagrees at level {k}, order {j}, shape ({n},{h})")]
    HeldOut { k: i64, j: u32, n: u32, h: u32, node: Vec<i64> },
    #[error("no unisolvent node set found for level {k}, order {j}, shape ({n},{h})")]
    NoNodes { k: i64, j: u32, n: u32, h: u32 },
    #[error("string equation fails at level {k}, order {j}, shape ({n},{h})")]
    StringEquation { k: i64, j: u32, n: u32, h: u32 },
    #[error("odd-weight term in differential polynomial at level {k}")]
    OddWeight { k: i64 },
    #[error("level {k} / order {j} outside the computed range")]
    OutOfRange { k: i64, j: u32 },
}

/// Coefficient table of one density `g_k^[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTable {
    pub k: i64,
    pub j: u32,
    /// `(n, h) → P_{n,h}` for `n ≥ 1`.
    pub shapes: BTreeMap<(u32, u32), SymPoly>,
    /// Pure constant, multiplying `ħ^{(k+2−j)/2}`; `None` until fixed.
    pub constant: Option<Rational>,
}

impl GTable {
    pub fn empty(k: i64, j: u32) -> Self {
        GTable { k, j, shapes: BTreeMap::new(), constant: Some(Rational::zero()) }
    }

    /// `g_{−1} = Σ ω_a z^a`.
    pub fn initial() -> Self {
        let mut t = Self::empty(-1, 0);
        t.shapes.insert((1, 0), SymPoly::constant(1, crate::rint(1)));
        t
    }

    /// Admissible shapes `(n, h)` with `n ≥ 1`.
    pub fn admissible_shapes(k: i64, j: u32) -> Vec<(u32, u32)> {
        let top = k + 2 - j as i64;
        (0..=top.max(0) / 2)
            .filter_map(|h| {
                let n = top - 2 * h;
                (n >= 1).then_some((n as u32, h as u32))
            })
            .collect()
    }

    /// `ħ`-power of the constant term, if the level admits one.
    pub fn constant_hbar(&self) -> Option<u32> {
        let top = self.k + 2 - self.j as i64;
        (top >= 0 && top % 2 == 0).then_some((top / 2) as u32)
    }

    pub fn constant_value(&self) -> Rational {
        self.constant.clone().unwrap_or_else(Rational::zero)
    }

    pub fn shape(&self, n: u32, h: u32) -> Option<&SymPoly> {
        self.shapes.get(&(n, h))
    }

    pub fn to_json(&self) -> GTableJson {
        GTableJson {
            k: self.k,
            j: self.j,
            shapes: self
                .shapes
                .iter()
                .map(|(&(n, h), p)| ShapeJson { n, hbar: h, poly: p.to_json_terms() })
                .collect(),
            constant: self.constant_value(),
        }
    }

    pub fn from_json(j: &GTableJson) -> Self {
        GTable {
            k: j.k,
            j: j.j,
            shapes: j
                .shapes
                .iter()
                .map(|s| ((s.n, s.hbar), SymPoly::from_json_terms(s.n as usize, &s.poly)))
                .collect(),
            constant: Some(j.constant.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShapeJson {
    pub n: u32,
    pub hbar: u32,
    pub poly: Vec<SymTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GTableJson {
    pub k: i64,
    pub j: u32,
    pub shapes: Vec<ShapeJson>,
    #[serde(with = "serde_rational")]
    pub constant: Rational,
}

/// All densities for levels `−1..=k_max` and orders `0..=j_max`, with constants.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    k_max: i64,
    j_max: u32,
    /// `tables[k + 1][j]`.
    tables: Vec<Vec<GTable>>,
}

impl Hierarchy {
    pub fn build(k_max: i64, j_max: u32) -> Result<Self, HierarchyError> {
        assert!(k_max >= -1);
        let mut tables: Vec<Vec<GTable>> = vec![(0..=j_max)
            .map(|j| if j == 0 { GTable::initial() } else { GTable::empty(-1, j) })
            .collect()];
        for k in 0..=k_max {
            let prev = tables.last().unwrap();
            let next = step_level(prev, k - 1, j_max, None)?;
            tables.push(next);
        }
        // Constants of the top level come from the single-mode shapes one level up.
        let extra = step_level(tables.last().unwrap(), k_max, j_max, Some(1))?;
        let mut h = Hierarchy { k_max, j_max, tables };
        h.fix_constants(&extra)?;
        Ok(h)
    }

    /// Shared instance covering at least `(k_max, j_max)`.
    pub fn shared(k_max: i64, j_max: u32) -> Result<Arc<Hierarchy>, HierarchyError> {
        static CACHE: OnceLock<RwLock<Option<Arc<Hierarchy>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(None));
        if let Some(h) = cache.read().unwrap().as_ref() {
            if h.k_max >= k_max && h.j_max >= j_max {
                return Ok(h.clone());
            }
        }
        let mut w = cache.write().unwrap();
        if let Some(h) = w.as_ref() {
            if h.k_max >= k_max && h.j_max >= j_max {
                return Ok(h.clone());
            }
        }
        let (k0, j0) = w.as_ref().map_or((k_max, j_max), |h| (h.k_max.max(k_max), h.j_max.max(j_max)));
        let h = Arc::new(Hierarchy::build(k0, j0)?);
        *w = Some(h.clone());
        Ok(h)
    }

    /// Builds from previously exported tables (e.g. a cache), re-checking the
    /// string equation between consecutive levels.
    pub fn from_tables(tables: Vec<Vec<GTable>>) -> Result<Self, HierarchyError> {
        let k_max = tables.len() as i64 - 2;
        let j_max = tables.first().map_or(0, |t| t.len() as u32 - 1);
        let h = Hierarchy { k_max, j_max, tables };
        h.check_string_equation()?;
        Ok(h)
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn table(&self, k: i64, j: u32) -> Result<&GTable, HierarchyError> {
        if k < -1 || k > self.k_max || j > self.j_max {
            return Err(HierarchyError::OutOfRange { k, j });
        }
        Ok(&self.tables[(k + 1) as usize][j as usize])
    }

    pub fn tables(&self) -> &[Vec<GTable>] {
        &self.tables
    }

    /// `∂g_{k+1}/∂ω_0 = g_k`: the constant of `g_k` is the single-mode
    /// polynomial of `g_{k+1}` at mode zero.
    fn fix_constants(&mut self, extra: &[GTable]) -> Result<(), HierarchyError> {
        for ki in 0..self.tables.len() {
            for j in 0..=self.j_max as usize {
                let above = if ki + 1 < self.tables.len() { &self.tables[ki + 1][j] } else { &extra[j] };
                let t = &self.tables[ki][j];
                let c = match t.constant_hbar() {
                    Some(h) => above.shape(1, h).map_or_else(Rational::zero, |p| p.eval(&[0])),
                    None => Rational::zero(),
                };
                self.tables[ki][j].constant = Some(c);
            }
        }
        self.check_string_equation()
    }

    /// `n·P^{(n,h)}_{k+1}(a, 0) = P^{(n−1,h)}_k(a)` for `n ≥ 2`, at sample points.
    pub fn check_string_equation(&self) -> Result<(), HierarchyError> {
        let samples: [i64; 6] = [3, -2, 5, 1, -4, 7];
        for ki in 0..self.tables.len().saturating_sub(1) {
            for j in 0..=self.j_max as usize {
                let lo = &self.tables[ki][j];
                let hi = &self.tables[ki + 1][j];
                for (&(n, h), p) in &hi.shapes {
                    if n < 2 {
                        continue;
                    }
                    let mut pt: Vec<i64> = samples.iter().cycle().take(n as usize - 1).copied().collect();
                    for (i, x) in pt.iter_mut().enumerate() {
                        *x += i as i64;
                    }
                    let want = lo.shape(n - 1, h).map_or_else(Rational::zero, |q| q.eval(&pt));
                    pt.push(0);
                    if p.eval(&pt) * crate::rint(n as i64) != want {
                        return Err(HierarchyError::StringEquation { k: hi.k, j: j as u32, n, h });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::part;
    use crate::{rat, rint};

    fn sp(n: usize, terms: &[(&[u32], Rational)]) -> SymPoly {
        SymPoly::from_coeffs(n, terms.iter().map(|(m, c)| (part(m), c.clone())))
    }

    #[test]
    fn initial_table() {
        let h = Hierarchy::build(1, 2).unwrap();
        let t = h.table(-1, 0).unwrap();
        assert_eq!(t.shapes.len(), 1);
        assert_eq!(t.shape(1, 0), Some(&SymPoly::constant(1, rint(1))));
        assert!(h.table(-1, 1).unwrap().shapes.is_empty());
    }

    #[test]
    fn level_zero() {
        let h = Hierarchy::build(1, 2).unwrap();
        let t0 = h.table(0, 0).unwrap();
        assert_eq!(t0.shape(2, 0), Some(&SymPoly::constant(2, rat(1, 2))));
        assert_eq!(t0.constant, Some(rat(-1, 24)));
        assert_eq!(t0.constant_hbar(), Some(1));
        let t01 = h.table(0, 1).unwrap();
        assert_eq!(t01.shape(1, 0), Some(&sp(1, &[(&[2], rint(1))])));
    }

    #[test]
    fn level_one() {
        let h = Hierarchy::build(1, 2).unwrap();
        let t = h.table(1, 0).unwrap();
        assert_eq!(t.shape(3, 0), Some(&SymPoly::constant(3, rat(1, 6))));
        // ħ/24 (a² − 1)
        assert_eq!(t.shape(1, 1), Some(&sp(1, &[(&[2], rat(1, 24)), (&[], rat(-1, 24))])));
        let t1 = h.table(1, 1).unwrap();
        assert_eq!(t1.shape(2, 0), Some(&sp(2, &[(&[2], rat(1, 2))])));
        assert_eq!(t1.constant, Some(rat(1, 120)));
        let t2 = h.table(1, 2).unwrap();
        assert_eq!(t2.shape(1, 0), Some(&sp(1, &[(&[4], rat(1, 2))])));
        assert_eq!(t2.constant, Some(rint(0)));
    }

    #[test]
    fn json_round_trip() {
        let h = Hierarchy::build(2, 2).unwrap();
        let t = h.table(2, 1).unwrap();
        let s = serde_json::to_string(&t.to_json()).unwrap();
        let back: GTableJson = serde_json::from_str(&s).unwrap();
        assert_eq!(&GTable::from_json(&back), t);
    }
}
