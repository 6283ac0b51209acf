//! The bosonic Fock space `ℚ[p_1, p_2, …]` graded by `deg p_k = k`, Schur
//! functions, the Hall scalar product and the representation of the mode
//! algebra on it.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{fmt_rational, parse_rational};
use crate::partitions::{enumerate_partitions, Partition};
use crate::{rint, RatMatrix, Rational};

/// Homogeneous element of degree `n`. The key `α` stands for the monomial
/// `p_α = Π p_{α_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BosonVector {
    degree: u32,
    terms: BTreeMap<Partition, Rational>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BosonError {
    #[error("modes {0:?} are not in normal order")]
    NotNormalOrdered(Vec<i64>),
    #[error("degree mismatch: {0} vs {1}")]
    Degree(u32, u32),
    #[error("bad vector encoding: {0}")]
    Encoding(String),
}

impl BosonVector {
    pub fn zero(degree: u32) -> Self {
        BosonVector { degree, terms: BTreeMap::new() }
    }

    /// The monomial `p_α`.
    pub fn p(alpha: &Partition) -> Self {
        let mut v = Self::zero(alpha.size());
        v.terms.insert(alpha.clone(), rint(1));
        v
    }

    pub fn one() -> Self {
        Self::p(&Partition::empty())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &Partition) -> Rational {
        self.terms.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, alpha: Partition, c: Rational) {
        assert_eq!(alpha.size(), self.degree, "term of the wrong degree");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(alpha.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() && self.degree != o.degree {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, o.degree, "adding vectors of different degree");
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rint(-1)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.degree);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    /// Polynomial product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.degree + o.degree);
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                let parts = a.parts().iter().chain(b.parts()).copied().collect();
                out.add_term(Partition::from_unsorted(parts), c * d);
            }
        }
        out
    }

    /// Multiplication by `p_k`.
    pub fn mul_p(&self, k: u32) -> Self {
        let mut out = Self::zero(self.degree + k);
        for (a, c) in &self.terms {
            let mut parts = a.parts().to_vec();
            parts.push(k);
            out.add_term(Partition::from_unsorted(parts), c.clone());
        }
        out
    }

    /// `∂/∂p_k`.
    pub fn d_dp(&self, k: u32) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(k));
        if self.degree < k {
            return out;
        }
        for (a, c) in &self.terms {
            let m = a.parts().iter().filter(|&&x| x == k).count();
            if m == 0 {
                continue;
            }
            let mut parts = a.parts().to_vec();
            let pos = parts.iter().position(|&x| x == k).unwrap();
            parts.remove(pos);
            out.add_term(Partition::from_unsorted(parts), c * rint(m as i64));
        }
        out
    }

    /// Hall product: `⟨p_α, p_β⟩ = z_α δ_{αβ}`; zero across degrees.
    pub fn inner(&self, o: &Self) -> Rational {
        if self.degree != o.degree {
            return Rational::zero();
        }
        let mut s = Rational::zero();
        for (a, c) in &self.terms {
            if let Some(d) = o.terms.get(a) {
                s += c * d * Rational::from_integer(a.z());
            }
        }
        s
    }

    /// Coefficients `⟨s_λ, v⟩` in the order of [`SchurBasis::partitions`].
    pub fn schur_coeffs(&self) -> Vec<Rational> {
        let basis = SchurBasis::get(self.degree);
        basis.schur.iter().map(|s| s.inner(self)).collect()
    }

    pub fn from_schur_coeffs(degree: u32, coeffs: &[Rational]) -> Self {
        let basis = SchurBasis::get(degree);
        assert_eq!(coeffs.len(), basis.partitions.len());
        let mut out = Self::zero(degree);
        for (c, s) in coeffs.iter().zip(&basis.schur) {
            if !c.is_zero() {
                out = out.add(&s.scale(c));
            }
        }
        out
    }

    pub fn to_json(&self, basis: BasisKind) -> BosonVectorJson {
        let terms = match basis {
            BasisKind::P => self
                .terms
                .iter()
                .map(|(a, c)| TermJson { key: a.to_string(), coeff: fmt_rational(c) })
                .collect(),
            BasisKind::Schur => {
                let b = SchurBasis::get(self.degree);
                self.schur_coeffs()
                    .iter()
                    .zip(&b.partitions)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, l)| TermJson { key: l.to_string(), coeff: fmt_rational(c) })
                    .collect()
            }
        };
        BosonVectorJson { degree: self.degree, basis, terms }
    }

    pub fn from_json(j: &BosonVectorJson) -> Result<Self, BosonError> {
        let mut out = Self::zero(j.degree);
        for t in &j.terms {
            let key: Partition = t.key.parse().map_err(|e| BosonError::Encoding(format!("{e}")))?;
            if key.size() != j.degree {
                return Err(BosonError::Degree(key.size(), j.degree));
            }
            let c = parse_rational(&t.coeff).map_err(BosonError::Encoding)?;
            let piece = match j.basis {
                BasisKind::P => Self::p(&key),
                BasisKind::Schur => schur(&key),
            };
            out = out.add(&piece.scale(&c));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Schur,
    P,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub key: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BosonVectorJson {
    pub degree: u32,
    pub basis: BasisKind,
    pub terms: Vec<TermJson>,
}

/// `h_ℓ` from `ℓ h_ℓ = Σ_{i=1}^{ℓ} p_i h_{ℓ−i}`, the coefficient recursion of
/// `exp(Σ p_i y^i / i)`. Returns `None` for `ℓ < 0`.
pub fn complete_homogeneous(l: i64) -> Option<BosonVector> {
    static CACHE: OnceLock<RwLock<Vec<BosonVector>>> = OnceLock::new();
    if l < 0 {
        return None;
    }
    let cache = CACHE.get_or_init(|| RwLock::new(vec![BosonVector::one()]));
    if let Some(h) = cache.read().unwrap().get(l as usize) {
        return Some(h.clone());
    }
    let mut w = cache.write().unwrap();
    while w.len() <= l as usize {
        let m = w.len() as u32;
        let mut s = BosonVector::zero(m);
        for i in 1..=m {
            s = s.add(&w[(m - i) as usize].mul_p(i));
        }
        w.push(s.scale(&Rational::new(1.into(), (m as i64).into())));
    }
    Some(w[l as usize].clone())
}

/// Schur function by the Jacobi–Trudi determinant `det(h_{λ_i − i + j})`.
pub fn schur(l: &Partition) -> BosonVector {
    static CACHE: OnceLock<RwLock<HashMap<Partition, BosonVector>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(s) = cache.read().unwrap().get(l) {
        return s.clone();
    }
    let s = jacobi_trudi(l);
    cache.write().unwrap().insert(l.clone(), s.clone());
    s
}

fn jacobi_trudi(l: &Partition) -> BosonVector {
    let n = l.len();
    if n == 0 {
        return BosonVector::one();
    }
    // Expansion along rows; dp[mask] is the signed sum over assignments of the
    // first popcount(mask) rows to the columns in mask.
    let entry = |i: usize, j: usize| complete_homogeneous(l.part(i + 1) as i64 - i as i64 + j as i64);
    let mut dp: HashMap<u32, BosonVector> = HashMap::new();
    dp.insert(0, BosonVector::one());
    for i in 0..n {
        let mut next: HashMap<u32, BosonVector> = HashMap::new();
        for (mask, v) in &dp {
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let Some(h) = entry(i, j) else { continue };
                let above = (mask >> (j + 1)).count_ones();
                let mut t = v.mul(&h);
                if above % 2 == 1 {
                    t = t.scale(&rint(-1));
                }
                let key = mask | (1 << j);
                let slot = next.entry(key).or_insert_with(|| BosonVector::zero(t.degree()));
                *slot = slot.add(&t);
            }
        }
        dp = next;
    }
    dp.remove(&((1u32 << n) - 1)).unwrap_or_else(|| BosonVector::zero(l.size()))
}

/// The Schur basis of `B_n` together with its power-sum transition data.
#[derive(Debug)]
pub struct SchurBasis {
    pub degree: u32,
    /// Partitions of `n`, reverse lexicographic.
    pub partitions: Vec<Partition>,
    pub schur: Vec<BosonVector>,
    /// `x[α][λ]`: coefficient of `p_α` in `s_λ`, both indexed by `partitions`.
    pub x: RatMatrix,
    /// `z_α` on the diagonal.
    pub z: Vec<Rational>,
    index: HashMap<Partition, usize>,
}

impl SchurBasis {
    /// Shared, lazily built basis for degree `n`.
    pub fn get(n: u32) -> Arc<SchurBasis> {
        static CACHE: OnceLock<RwLock<HashMap<u32, Arc<SchurBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(b) = cache.read().unwrap().get(&n) {
            return b.clone();
        }
        // Duplicate concurrent builds produce identical values.
        let b = Arc::new(Self::build(n));
        cache.write().unwrap().entry(n).or_insert(b).clone()
    }

    fn build(n: u32) -> Self {
        let partitions = enumerate_partitions(n);
        let schur: Vec<BosonVector> = partitions.iter().map(schur).collect();
        let index: HashMap<Partition, usize> =
            partitions.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let x = RatMatrix::from_fn(partitions.len(), partitions.len(), |a, l| schur[l].coeff(&partitions[a]));
        let z = partitions.iter().map(|p| Rational::from_integer(p.z())).collect();
        SchurBasis { degree: n, partitions, schur, x, z, index }
    }

    pub fn dim(&self) -> usize {
        self.partitions.len()
    }

    pub fn index_of(&self, l: &Partition) -> usize {
        self.index[l]
    }

    /// Matrix of a linear map given in the power-sum basis by `op(α) = O p_α`,
    /// as `M[μ][λ] = ⟨s_μ, O s_λ⟩`.
    pub fn matrix_from_p_action(&self, op: impl Fn(&Partition) -> BosonVector + Sync) -> RatMatrix {
        let images: Vec<BosonVector> = self.partitions.par_iter().map(&op).collect();
        let d = self.dim();
        let mp = RatMatrix::from_fn(d, d, |g, b| {
            let img = &images[b];
            assert!(img.is_zero() || img.degree() == self.degree, "operator changes degree");
            img.coeff(&self.partitions[g])
        });
        self.from_p_matrix(&mp)
    }

    /// Schur-basis matrix from a power-sum basis matrix (`mp[γ][β]` = coefficient
    /// of `p_γ` in `O p_β`).
    pub fn from_p_matrix(&self, mp: &RatMatrix) -> RatMatrix {
        let d = self.dim();
        let zx = RatMatrix::from_fn(d, d, |g, m| &self.z[g] * &self.x[(g, m)]);
        let left = zx.transpose();
        &(&left * mp) * &self.x
    }

    /// Schur-basis matrix of a map given on Schur functions.
    pub fn matrix_from_schur_action(&self, op: impl Fn(&BosonVector) -> BosonVector + Sync) -> RatMatrix {
        let cols: Vec<Vec<Rational>> = self.schur.par_iter().map(|s| op(s).schur_coeffs()).collect();
        RatMatrix::from_fn(self.dim(), self.dim(), |m, l| cols[l][m].clone())
    }
}

/// A normal-ordered product of modes with an `ħ` power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaMonomial {
    modes: Vec<i64>,
    hbar: u32,
}

impl OmegaMonomial {
    /// Requires nonnegative modes left of negative ones; sorts within blocks.
    pub fn new(modes: Vec<i64>, hbar: u32) -> Result<Self, BosonError> {
        let first_neg = modes.iter().position(|&a| a < 0).unwrap_or(modes.len());
        if modes[first_neg..].iter().any(|&a| a >= 0) {
            return Err(BosonError::NotNormalOrdered(modes));
        }
        let mut nonneg = modes[..first_neg].to_vec();
        let mut neg = modes[first_neg..].to_vec();
        nonneg.sort_unstable_by(|a, b| b.cmp(a));
        neg.sort_unstable_by(|a, b| b.cmp(a));
        nonneg.extend(neg);
        Ok(OmegaMonomial { modes: nonneg, hbar })
    }

    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    pub fn hbar(&self) -> u32 {
        self.hbar
    }

    pub fn mode_sum(&self) -> i64 {
        self.modes.iter().sum()
    }

    /// `ρ_c` applied to `v` with `ħ = 1`: `ω_a ↦ p_a` (`a > 0`), `c` (`a = 0`),
    /// `−a ∂/∂p_{−a}` (`a < 0`). Rightmost factor acts first.
    pub fn apply(&self, c: &Rational, v: &BosonVector) -> BosonVector {
        let mut w = v.clone();
        for &a in self.modes.iter().rev() {
            w = apply_mode(a, c, &w);
        }
        w
    }
}

/// `ρ_c(ω_a)` on a vector.
pub fn apply_mode(a: i64, c: &Rational, v: &BosonVector) -> BosonVector {
    match a {
        a if a > 0 => v.mul_p(a as u32),
        0 => v.scale(c),
        a => v.d_dp((-a) as u32).scale(&rint(-a)),
    }
}
