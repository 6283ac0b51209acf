//! Simultaneous perturbative diagonalization of the commuting Hamiltonians on
//! `B_n`, and the closed forms it is checked against.
//!
//! Order `a` of the family is `H_k^{(a)} = Ĝ_k^[a] / 24^a`, so every eigenvalue
//! and eigenvector correction here is a coefficient of `ε^a`. The zeroth order
//! is diagonal in the Schur basis. Eigenvectors are normalized by
//! `⟨s_λ, r_λ⟩ = 1`, i.e. `⟨s_λ, r_λ^[m]⟩ = 0` for `m ≥ 1`.
//!
//! At order `m` and `μ ≠ λ` the eigen-equation of level `k` reads
//!
//! `(E_k^[0](μ) − E_k^[0](λ)) r^[m]_μ = Σ_{a=1}^{m−1} E_k^[a] r^[m−a]_μ − Σ_{a=1}^{m} (H_k^{(a)} r^[m−a])_μ`.
//!
//! Any level separating `λ` from `μ` at order zero determines `r^[m]_μ`; all
//! other configured levels must then satisfy the same equation exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boson::{BasisKind, BosonVector, BosonVectorJson, SchurBasis};
use crate::exact::{fmt_rational, parse_rational};
use crate::hierarchy::{extract_hamiltonian, Hierarchy, HierarchyError};
use crate::partitions::{neighborhood, strip_pairs, Partition};
use crate::shifted::{beta, eval_q};
use crate::{rat, rint, RatMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("insufficient family: no level in {k_set:?} separates {lambda} from {mu} at order zero; enlarge the level set")]
    InsufficientFamily { lambda: Partition, mu: Partition, k_set: Vec<i64> },
    #[error("levels disagree on <s_{mu}, r_{lambda}^[{m}]> (checked with level {k})")]
    Inconsistent { lambda: Partition, mu: Partition, m: u32, k: i64 },
    #[error("empty level set")]
    EmptyLevelSet,
    #[error("zeroth order of level {k} is not diagonal on degree {n}")]
    NotDiagonal { k: i64, n: u32 },
    #[error("hodge integral needs g >= 2 and 1 <= s < g, got g = {g}, s = {s}")]
    HodgeDomain { g: u32, s: u32 },
    #[error("malformed eigen data: {0}")]
    Encoding(String),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

/// What to diagonalize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbConfig {
    pub n: u32,
    pub m_max: u32,
    /// Levels used to separate zeroth-order degeneracies.
    pub k_set: Vec<i64>,
    /// Further levels whose eigenvalues are reported and whose eigen-equations
    /// are verified, but which are never used to solve.
    pub k_extra: Vec<i64>,
    pub c: Rational,
}

impl PerturbConfig {
    pub fn new(n: u32, m_max: u32) -> Self {
        PerturbConfig { n, m_max, k_set: vec![1, 2, 3], k_extra: vec![], c: Rational::zero() }
    }

    pub fn with_k_set(mut self, k_set: Vec<i64>) -> Self {
        self.k_set = k_set;
        self
    }

    pub fn with_extra_levels(mut self, ks: impl IntoIterator<Item = i64>) -> Self {
        self.k_extra = ks.into_iter().collect();
        self
    }

    pub fn with_c(mut self, c: Rational) -> Self {
        self.c = c;
        self
    }

    /// All levels, sorted and deduplicated.
    pub fn levels(&self) -> Vec<i64> {
        let mut ks: Vec<i64> = self.k_set.iter().chain(&self.k_extra).copied().collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

/// Per-partition spectral data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenEntry {
    pub lambda: Partition,
    /// `(k, m) → E_k^[m](λ; c)` in powers of `ε`.
    pub e: BTreeMap<(i64, u32), Rational>,
    /// `r[m]` is the `ε^m` correction; `r[0] = s_λ`.
    pub r: Vec<BosonVector>,
}

impl EigenEntry {
    pub fn eigenvalue(&self, k: i64, m: u32) -> Option<&Rational> {
        self.e.get(&(k, m))
    }

    /// `c(λ, μ) = 24 ⟨s_μ, r_λ^[1]⟩`.
    pub fn first_order_coefficient(&self, mu: &Partition) -> Rational {
        let coeffs = self.r[1].schur_coeffs();
        let i = SchurBasis::get(self.lambda.size()).index_of(mu);
        &coeffs[i] * rint(24)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenData {
    pub n: u32,
    pub c: Rational,
    pub m_max: u32,
    pub entries: Vec<EigenEntry>,
}

impl EigenData {
    pub fn entry(&self, lambda: &Partition) -> Option<&EigenEntry> {
        self.entries.iter().find(|e| &e.lambda == lambda)
    }

    /// The table `c(λ, μ)` over all pairs with a nonzero coefficient.
    pub fn first_order_table(&self) -> BTreeMap<(Partition, Partition), Rational> {
        let mut out = BTreeMap::new();
        if self.m_max == 0 {
            return out;
        }
        let basis = SchurBasis::get(self.n);
        for e in &self.entries {
            for (mu, x) in basis.partitions.iter().zip(e.r[1].schur_coeffs()) {
                if !x.is_zero() {
                    out.insert((e.lambda.clone(), mu.clone()), x * rint(24));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> EigenDataJson {
        EigenDataJson {
            n: self.n,
            c: fmt_rational(&self.c),
            entries: self
                .entries
                .iter()
                .map(|e| EigenEntryJson {
                    lambda: e.lambda.to_string(),
                    e: e.e.iter().map(|(&(k, m), v)| (format!("{k},{m}"), fmt_rational(v))).collect(),
                    r: e.r.iter().enumerate().map(|(m, v)| (m.to_string(), v.to_json(BasisKind::Schur))).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &EigenDataJson) -> Result<Self, SpectralError> {
        let bad = |s: String| SpectralError::Encoding(s);
        let c = parse_rational(&j.c).map_err(bad)?;
        let mut entries = Vec::with_capacity(j.entries.len());
        let mut m_max = 0;
        for ej in &j.entries {
            let lambda: Partition = ej.lambda.parse().map_err(|e| bad(format!("{e}")))?;
            let mut e = BTreeMap::new();
            for (key, v) in &ej.e {
                let (k, m) = key.split_once(',').ok_or_else(|| bad(format!("bad key {key}")))?;
                let k: i64 = k.trim().parse().map_err(|_| bad(format!("bad key {key}")))?;
                let m: u32 = m.trim().parse().map_err(|_| bad(format!("bad key {key}")))?;
                e.insert((k, m), parse_rational(v).map_err(bad)?);
            }
            let mut r = Vec::with_capacity(ej.r.len());
            for m in 0..ej.r.len() {
                let v = ej.r.get(&m.to_string()).ok_or_else(|| bad(format!("missing order {m}")))?;
                r.push(BosonVector::from_json(v).map_err(|e| bad(format!("{e}")))?);
            }
            m_max = r.len().saturating_sub(1) as u32;
            entries.push(EigenEntry { lambda, e, r });
        }
        Ok(EigenData { n: j.n, c, m_max, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenEntryJson {
    pub lambda: String,
    #[serde(rename = "E")]
    pub e: BTreeMap<String, String>,
    pub r: BTreeMap<String, BosonVectorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenDataJson {
    pub n: u32,
    pub c: String,
    pub entries: Vec<EigenEntryJson>,
}

/// `H_k^{(a)}` for every configured level and `a ≤ m_max`.
struct Family {
    levels: Vec<i64>,
    /// `h[level index][a]`.
    h: Vec<Vec<RatMatrix>>,
    /// Zeroth-order eigenvalues `h[i][0]` diagonal.
    e0: Vec<Vec<Rational>>,
}

impl Family {
    fn build(hier: &Hierarchy, cfg: &PerturbConfig) -> Result<Self, SpectralError> {
        let levels = cfg.levels();
        let mut h = Vec::with_capacity(levels.len());
        let mut e0 = Vec::with_capacity(levels.len());
        for &k in &levels {
            let mut per = Vec::with_capacity(cfg.m_max as usize + 1);
            let mut scale = Rational::one();
            for a in 0..=cfg.m_max {
                per.push(extract_hamiltonian(hier, k, a, cfg.n, &cfg.c)?.scale(&scale));
                scale /= rint(24);
            }
            if !per[0].is_diagonal() {
                return Err(SpectralError::NotDiagonal { k, n: cfg.n });
            }
            e0.push(per[0].diagonal());
            h.push(per);
        }
        Ok(Family { levels, h, e0 })
    }
}

/// Runs the order-by-order solve with a shared hierarchy large enough for
/// the configuration.
pub fn perturb(cfg: &PerturbConfig) -> Result<EigenData, SpectralError> {
    let kmax = cfg.levels().into_iter().max().ok_or(SpectralError::EmptyLevelSet)?;
    let h = Hierarchy::shared(kmax.max(0), cfg.m_max)?;
    perturb_with(&h, cfg)
}

pub fn perturb_with(hier: &Hierarchy, cfg: &PerturbConfig) -> Result<EigenData, SpectralError> {
    if cfg.k_set.is_empty() {
        return Err(SpectralError::EmptyLevelSet);
    }
    let fam = Family::build(hier, cfg)?;
    let basis: Arc<SchurBasis> = SchurBasis::get(cfg.n);
    let entries = (0..basis.dim())
        .into_par_iter()
        .map(|l| solve_one(&fam, cfg, &basis, l))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EigenData { n: cfg.n, c: cfg.c.clone(), m_max: cfg.m_max, entries })
}

fn solve_one(fam: &Family, cfg: &PerturbConfig, basis: &SchurBasis, l: usize) -> Result<EigenEntry, SpectralError> {
    let d = basis.dim();
    let nk = fam.levels.len();
    let lambda = &basis.partitions[l];

    // Separating level for every μ, taken from k_set in its given order.
    let mut sep: Vec<Option<usize>> = vec![None; d];
    for mu in (0..d).filter(|&mu| mu != l) {
        let found = cfg.k_set.iter().find_map(|k| {
            let i = fam.levels.binary_search(k).unwrap();
            (fam.e0[i][mu] != fam.e0[i][l]).then_some(i)
        });
        if found.is_none() && cfg.m_max > 0 {
            return Err(SpectralError::InsufficientFamily {
                lambda: lambda.clone(),
                mu: basis.partitions[mu].clone(),
                k_set: cfg.k_set.clone(),
            });
        }
        sep[mu] = found;
    }

    let mut unit = vec![Rational::zero(); d];
    unit[l] = Rational::one();
    let mut r: Vec<Vec<Rational>> = vec![unit];
    // e[i][m] for level index i.
    let mut e: Vec<Vec<Rational>> = (0..nk).map(|i| vec![fam.e0[i][l].clone()]).collect();

    for m in 1..=cfg.m_max as usize {
        // hr[i][a] = H_k^{(a)} r^[m−a], a = 1..=m.
        let hr: Vec<Vec<Vec<Rational>>> = (0..nk)
            .map(|i| {
                let mut v = vec![vec![]];
                v.extend((1..=m).map(|a| fam.h[i][a].mul_vec(&r[m - a])));
                v
            })
            .collect();
        for i in 0..nk {
            let em = (1..=m).fold(Rational::zero(), |acc, a| acc + &hr[i][a][l]);
            e[i].push(em);
        }
        let rhs = |i: usize, mu: usize| {
            let mut s = Rational::zero();
            for a in 1..m {
                s += &e[i][a] * &r[m - a][mu];
            }
            for a in 1..=m {
                s -= &hr[i][a][mu];
            }
            s
        };
        let mut next = vec![Rational::zero(); d];
        for mu in (0..d).filter(|&mu| mu != l) {
            let i = sep[mu].expect("separation checked above");
            let x = rhs(i, mu) / (&fam.e0[i][mu] - &fam.e0[i][l]);
            for j in 0..nk {
                if (&fam.e0[j][mu] - &fam.e0[j][l]) * &x != rhs(j, mu) {
                    return Err(SpectralError::Inconsistent {
                        lambda: lambda.clone(),
                        mu: basis.partitions[mu].clone(),
                        m: m as u32,
                        k: fam.levels[j],
                    });
                }
            }
            next[mu] = x;
        }
        r.push(next);
    }

    let mut emap = BTreeMap::new();
    for (i, &k) in fam.levels.iter().enumerate() {
        for (m, v) in e[i].iter().enumerate() {
            emap.insert((k, m as u32), v.clone());
        }
    }
    let r = r.iter().map(|v| BosonVector::from_schur_coeffs(cfg.n, v)).collect();
    Ok(EigenEntry { lambda: lambda.clone(), e: emap, r })
}

/// The `(λ, k, m)` whose eigen-equation fails, with the Hamiltonians
/// recomputed independently of the solve.
pub fn eigen_residuals(hier: &Hierarchy, data: &EigenData, levels: &[i64]) -> Result<Vec<(Partition, i64, u32)>, SpectralError> {
    let mut bad = Vec::new();
    for &k in levels {
        let mut hs = Vec::new();
        let mut scale = Rational::one();
        for a in 0..=data.m_max {
            hs.push(extract_hamiltonian(hier, k, a, data.n, &data.c)?.scale(&scale));
            scale /= rint(24);
        }
        for ent in &data.entries {
            let r: Vec<Vec<Rational>> = ent.r.iter().map(BosonVector::schur_coeffs).collect();
            for m in 0..=data.m_max as usize {
                let mut res = vec![Rational::zero(); r[0].len()];
                for a in 0..=m {
                    let hv = hs[a].mul_vec(&r[m - a]);
                    let ea = ent.e.get(&(k, a as u32)).cloned().unwrap_or_else(Rational::zero);
                    for (x, (y, z)) in res.iter_mut().zip(hv.iter().zip(&r[m - a])) {
                        *x += y - &ea * z;
                    }
                }
                if res.iter().any(|x| !x.is_zero()) {
                    bad.push((ent.lambda.clone(), k, m as u32));
                }
            }
        }
    }
    Ok(bad)
}

/// First `ε`-order at which `[Ĝ_k(ε), Ĝ_l(ε)]` is nonzero on `B_n`, if any
/// up to `m_max`.
pub fn first_noncommuting_order(
    hier: &Hierarchy,
    k: i64,
    l: i64,
    n: u32,
    m_max: u32,
    c: &Rational,
) -> Result<Option<u32>, SpectralError> {
    let mats = |k: i64| -> Result<Vec<RatMatrix>, SpectralError> {
        (0..=m_max).map(|a| Ok(extract_hamiltonian(hier, k, a, n, c)?)).collect()
    };
    let (a, b) = (mats(k)?, mats(l)?);
    for m in 0..=m_max as usize {
        // Orders are (ε/24)^a, so the common factor 24^{-m} drops out.
        let mut acc = RatMatrix::zeros(a[0].rows(), a[0].cols());
        for i in 0..=m {
            acc = &acc + &(&(&a[i] * &b[m - i]) - &(&b[m - i] * &a[i]));
        }
        if !acc.is_zero() {
            return Ok(Some(m as u32));
        }
    }
    Ok(None)
}

/// `(1/24)(2 Q_2 Q_{k+1} + k(k+3) Q_{k+3})` at `c = 0`.
pub fn first_order_closed_form(k: u32, lambda: &Partition) -> Rational {
    let k64 = k as i64;
    let two_q2q = rint(2) * eval_q(2, lambda) * eval_q(k + 1, lambda);
    (two_q2q + rint(k64 * (k64 + 3)) * eval_q(k + 3, lambda)) / rint(24)
}

/// The first-order eigenvector predicted from border-strip data.
pub fn first_order_vector_closed_form(lambda: &Partition) -> BosonVector {
    let n = lambda.size();
    let basis = SchurBasis::get(n);
    let mut coeffs = vec![Rational::zero(); basis.dim()];
    for (mu, _) in neighborhood(lambda) {
        let sp = strip_pairs(lambda, &mu).expect("neighbours have strip pairs");
        let (a, b) = (sp.g1.size as i64, sp.g2.size as i64);
        let sign = if (sp.g1.height + sp.g1p.height).is_multiple_of(2) { 1 } else { -1 };
        let ratio = rat(a, b) - rat(b, a);
        coeffs[basis.index_of(&mu)] = ratio * rint(sp.w as i64 * sign) / rint(12);
    }
    BosonVector::from_schur_coeffs(n, &coeffs)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub lambda: String,
    pub k: Option<i64>,
    #[serde(with = "crate::exact::serde_rational")]
    pub computed: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub expected: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.mismatches.is_empty()
    }
}

/// Compares every computed `E_k^[1](λ; 0)`, `k ≥ 0`, with the closed form.
pub fn verify_first_order_eigenvalues(data: &EigenData) -> VerifyReport {
    assert!(data.c.is_zero(), "the closed form is stated at c = 0");
    let mut rep = VerifyReport::default();
    for ent in &data.entries {
        for (&(k, m), v) in &ent.e {
            if m != 1 || k < 0 {
                continue;
            }
            rep.checked += 1;
            let want = first_order_closed_form(k as u32, &ent.lambda);
            if *v != want {
                rep.mismatches.push(Mismatch {
                    lambda: ent.lambda.to_string(),
                    k: Some(k),
                    computed: v.clone(),
                    expected: want,
                });
            }
        }
    }
    rep
}

/// Compares every computed `r_λ^[1]` with the border-strip formula, one check
/// per Schur coefficient.
pub fn verify_first_order_vectors(data: &EigenData) -> VerifyReport {
    assert!(data.m_max >= 1);
    let basis = SchurBasis::get(data.n);
    let mut rep = VerifyReport::default();
    for ent in &data.entries {
        let got = ent.r[1].schur_coeffs();
        let want = first_order_vector_closed_form(&ent.lambda).schur_coeffs();
        for ((mu, g), w) in basis.partitions.iter().zip(got).zip(want) {
            rep.checked += 1;
            if g != w {
                rep.mismatches.push(Mismatch {
                    lambda: format!("{} -> {}", ent.lambda, mu),
                    k: None,
                    computed: g,
                    expected: w,
                });
            }
        }
    }
    rep
}

/// How a Hodge value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Read off the computed hierarchy.
    Computed,
    /// Proven closed form.
    ClosedForm,
    /// Closed form that depends on an unproven conjecture.
    Conjectural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeValue {
    pub g: u32,
    pub s: u32,
    #[serde(with = "crate::exact::serde_rational")]
    pub value: Rational,
    pub provenance: Provenance,
}

fn check_hodge_domain(g: u32, s: u32) -> Result<(), SpectralError> {
    if g < 2 || s < 1 || s >= g {
        return Err(SpectralError::HodgeDomain { g, s });
    }
    Ok(())
}

/// `∫ λ_s λ_g ψ^{2g−2−s}` over `M̄_{g,1}` as `(−1)^g E^[s]_{2g−2−s}(∅; 0)`.
pub fn hodge_integral(hier: &Hierarchy, g: u32, s: u32) -> Result<HodgeValue, SpectralError> {
    check_hodge_domain(g, s)?;
    let k = 2 * g as i64 - 2 - s as i64;
    let m = extract_hamiltonian(hier, k, s, 0, &Rational::zero())?;
    let e = &m[(0, 0)] / Rational::from_integer(BigInt::from(24).pow(s));
    let value = if g.is_multiple_of(2) { e } else { -e };
    Ok(HodgeValue { g, s, value, provenance: Provenance::Computed })
}

/// `(−1)^g (1/24)(2g(2g−3)β_{2g} − β_{2g−2}/12)`.
pub fn hodge_s1_closed_form(g: u32) -> Result<HodgeValue, SpectralError> {
    check_hodge_domain(g, 1)?;
    let gi = g as i64;
    let g2 = 2 * g as usize;
    let v = (rint(2 * gi * (2 * gi - 3)) * beta(g2) - beta(g2 - 2) / rint(12)) / rint(24);
    let value = if g.is_multiple_of(2) { v } else { -v };
    Ok(HodgeValue { g, s: 1, value, provenance: Provenance::ClosedForm })
}

/// The `s = 2` formula implied by the conjectured second-order eigenvalue,
/// stated for `g > 2`.
pub fn hodge_s2_conjectural(g: u32) -> Result<HodgeValue, SpectralError> {
    if g <= 2 {
        return Err(SpectralError::HodgeDomain { g, s: 2 });
    }
    let gi = g as i64;
    let g2 = 2 * g as usize;
    let v = beta(g2 - 4) / rint(288) - rint(4 * gi * gi - 12 * gi + 7) * beta(g2 - 2) / rint(12)
        + rint(2 * gi * (gi - 2) * (12 * gi * gi - 16 * gi + 1)) * beta(g2) / rint(3);
    let v = v / rint(576);
    let value = if g.is_multiple_of(2) { v } else { -v };
    Ok(HodgeValue { g, s: 2, value, provenance: Provenance::Conjectural })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_partitions, part};

    #[test]
    fn degree_one() {
        let d = perturb(&PerturbConfig::new(1, 1).with_k_set(vec![1])).unwrap();
        assert_eq!(d.entries[0].eigenvalue(1, 1), Some(&rat(241, 2880)));
        assert_eq!(d.entries[0].eigenvalue(1, 0), Some(&eval_q(3, &part(&[1]))));
    }

    #[test]
    fn degree_two_vector() {
        let d = perturb(&PerturbConfig::new(2, 1)).unwrap();
        let e = d.entry(&part(&[2])).unwrap();
        assert_eq!(e.first_order_coefficient(&part(&[1, 1])), rint(-3));
        let coeffs = e.r[1].schur_coeffs();
        let basis = SchurBasis::get(2);
        assert_eq!(coeffs[basis.index_of(&part(&[1, 1]))], rat(-1, 8));
        assert!(coeffs[basis.index_of(&part(&[2]))].is_zero());
    }

    #[test]
    fn zeroth_order_is_dubrovin() {
        let d = perturb(&PerturbConfig::new(4, 0).with_k_set(vec![0, 1, 2, 3])).unwrap();
        for e in &d.entries {
            for k in 0..=3 {
                assert_eq!(e.e[&(k, 0)], eval_q(k as u32 + 2, &e.lambda));
            }
            assert_eq!(e.r[0], crate::boson::schur(&e.lambda));
        }
    }

    #[test]
    fn degenerate_pair_needs_second_level() {
        let a = part(&[4, 2, 1, 1]);
        let b = part(&[3, 3, 2]);
        assert_eq!(a.conjugate(), a);
        assert_eq!(b.conjugate(), b);
        assert_eq!(eval_q(3, &a), eval_q(3, &b));
        let err = perturb(&PerturbConfig::new(8, 1).with_k_set(vec![1])).unwrap_err();
        assert!(matches!(err, SpectralError::InsufficientFamily { .. }), "{err}");
        let d = perturb(&PerturbConfig::new(8, 1)).unwrap();
        assert!(verify_first_order_vectors(&d).passed());
    }

    #[test]
    fn strip_formula_examples() {
        let v = first_order_vector_closed_form(&part(&[7, 2, 1]));
        let b = SchurBasis::get(10);
        assert_eq!(v.schur_coeffs()[b.index_of(&part(&[4, 2, 2, 2]))], rat(10, 63));
        assert!(first_order_vector_closed_form(&part(&[1])).is_zero());
    }

    #[test]
    fn first_order_matches_closed_forms_small() {
        for n in 0..=5 {
            let cfg = PerturbConfig::new(n, 1).with_extra_levels(0..=4);
            let d = perturb(&cfg).unwrap();
            let r1 = verify_first_order_eigenvalues(&d);
            assert!(r1.passed(), "{r1:?}");
            let r2 = verify_first_order_vectors(&d);
            assert!(r2.passed(), "{r2:?}");
        }
    }

    #[test]
    fn residuals_vanish() {
        let h = Hierarchy::shared(4, 3).unwrap();
        let cfg = PerturbConfig::new(5, 3).with_extra_levels([0, 4]);
        let d = perturb_with(&h, &cfg).unwrap();
        assert!(eigen_residuals(&h, &d, &cfg.levels()).unwrap().is_empty());
        for e in &d.entries {
            for m in 1..=3 {
                assert!(e.r[m].inner(&crate::boson::schur(&e.lambda)).is_zero());
            }
        }
    }

    #[test]
    fn shifted_c_eigenvalues_are_consistent() {
        let h = Hierarchy::shared(4, 2).unwrap();
        let cfg = PerturbConfig::new(4, 2).with_c(rat(1, 3));
        let d = perturb_with(&h, &cfg).unwrap();
        assert!(eigen_residuals(&h, &d, &cfg.levels()).unwrap().is_empty());
    }

    #[test]
    fn unmixed_pairs_vanish_at_first_order() {
        let h = Hierarchy::shared(4, 1).unwrap();
        for n in 1..=6 {
            let b = SchurBasis::get(n);
            for k in 0..=4 {
                let m = extract_hamiltonian(&h, k, 1, n, &rint(0)).unwrap();
                for (i, l) in b.partitions.iter().enumerate() {
                    let nb: Vec<Partition> = neighborhood(l).into_iter().map(|(p, _)| p).collect();
                    for (jj, mu) in b.partitions.iter().enumerate() {
                        if mu != l && !nb.contains(mu) {
                            assert!(m[(jj, i)].is_zero(), "k={k} {l} -> {mu}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn family_commutes() {
        let h = Hierarchy::shared(4, 3).unwrap();
        for n in 0..=4 {
            assert_eq!(first_noncommuting_order(&h, 2, 3, n, 3, &rint(0)).unwrap(), None);
            assert_eq!(first_noncommuting_order(&h, 1, 4, n, 2, &rat(1, 2)).unwrap(), None);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for n in 0..=8 {
            for l in enumerate_partitions(n) {
                let lc = l.conjugate();
                for k in 1..=5u32 {
                    assert_eq!(eval_q(2 * k, &lc), eval_q(2 * k, &l));
                    assert_eq!(eval_q(2 * k + 1, &lc), -eval_q(2 * k + 1, &l));
                }
            }
        }
    }

    #[test]
    fn hodge_low_genus() {
        let h = Hierarchy::shared(5, 2).unwrap();
        let v = hodge_integral(&h, 2, 1).unwrap();
        assert_eq!(v.value, rat(1, 2880));
        for g in 2..=3 {
            assert_eq!(hodge_integral(&h, g, 1).unwrap().value, hodge_s1_closed_form(g).unwrap().value);
        }
        assert!(hodge_integral(&h, 1, 1).is_err());
        assert_eq!(hodge_s2_conjectural(3).unwrap().provenance, Provenance::Conjectural);
    }

    #[test]
    fn json_round_trip() {
        let d = perturb(&PerturbConfig::new(3, 2)).unwrap();
        let j = d.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: EigenDataJson = serde_json::from_str(&s).unwrap();
        assert_eq!(EigenData::from_json(&back).unwrap(), d);
        assert_eq!(j.c, "0");
    }
}
