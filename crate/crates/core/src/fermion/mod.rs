//! The charge-zero infinite wedge and its fermionic operators.
//!
//! Basis vectors are Maya states; every operator acts by position
//! bookkeeping on the finite deviation from the vacuum, so signs are exact
//! and no truncation of the wedge is involved.

mod abpoly;
mod hamiltonian;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::boson::{schur, BosonVector};
use crate::partitions::{enumerate_partitions, Half, MayaSet, Partition};
use crate::{rint, Rational};

pub use abpoly::{ab_polynomials, ABPolyData};
pub use hamiltonian::{g_hat0_matrix, g_hat1_matrix, g_hat1_matrix_with_cutoff, wedge_matrix};

/// Finite combination of Maya states (any charge).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<MayaSet, Rational>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(s: MayaSet) -> Self {
        let mut v = Self::zero();
        v.add_term(s, rint(1));
        v
    }

    pub fn add_term(&mut self, s: MayaSet, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(s.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c * k);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MayaSet, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &MayaSet) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    /// Applies a map defined on basis states linearly.
    pub fn map_states(&self, f: impl Fn(&MayaSet) -> FockVector) -> FockVector {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            for (t, d) in f(s).terms {
                out.add_term(t, d * c);
            }
        }
        out
    }
}

/// Vector of the charge-zero space in the basis `v_λ`, homogeneous of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeVector {
    degree: u32,
    terms: BTreeMap<Partition, Rational>,
}

impl WedgeVector {
    pub fn zero(degree: u32) -> Self {
        WedgeVector { degree, terms: BTreeMap::new() }
    }

    pub fn basis(l: &Partition) -> Self {
        let mut v = Self::zero(l.size());
        v.terms.insert(l.clone(), rint(1));
        v
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, l: &Partition) -> Rational {
        self.terms.get(l).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.degree);
        if !k.is_zero() {
            for (l, c) in &self.terms {
                out.terms.insert(l.clone(), c * k);
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &o.terms {
            let e = out.terms.entry(l.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(l);
            }
        }
        out
    }

    pub fn inner(&self, o: &Self) -> Rational {
        self.terms
            .iter()
            .filter_map(|(l, c)| o.terms.get(l).map(|d| c * d))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_fock(&self) -> FockVector {
        let mut v = FockVector::zero();
        for (l, c) in &self.terms {
            v.add_term(l.maya(), c.clone());
        }
        v
    }

    /// Reads back a charge-zero homogeneous Fock vector.
    pub fn from_fock(v: &FockVector) -> Self {
        let mut out: Option<WedgeVector> = None;
        for (s, c) in v.terms() {
            assert_eq!(s.charge(), 0, "state outside the charge-zero sector");
            let l = s.to_partition();
            let w = out.get_or_insert_with(|| WedgeVector::zero(l.size()));
            assert_eq!(w.degree, l.size(), "inhomogeneous wedge vector");
            w.terms.insert(l, c.clone());
        }
        out.unwrap_or_else(|| WedgeVector::zero(0))
    }
}

/// A single fermion `ψ_k` or `ψ*_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fermion {
    Psi(Half),
    PsiStar(Half),
}

impl Fermion {
    /// Annihilators kill the vacuum: `ψ_k` for `k < 0` and `ψ*_k` for `k > 0`.
    pub fn is_annihilator(self) -> bool {
        match self {
            Fermion::Psi(k) => k < 0,
            Fermion::PsiStar(k) => k > 0,
        }
    }

    pub fn apply_state(self, s: &MayaSet) -> Option<(bool, MayaSet)> {
        match self {
            Fermion::Psi(k) => psi(k, s),
            Fermion::PsiStar(k) => psi_star(k, s),
        }
    }
}

/// `ψ_k v_S`: the sign is `(−1)^{#{s ∈ S : s > k}}`. Returns `(negative, state)`.
pub fn psi(k: Half, s: &MayaSet) -> Option<(bool, MayaSet)> {
    if s.contains(k) {
        return None;
    }
    let neg = s.count_above(k) % 2 == 1;
    let mut t = s.clone();
    t.insert(k);
    Some((neg, t))
}

/// `ψ*_k v_S`, the adjoint of [`psi`].
pub fn psi_star(k: Half, s: &MayaSet) -> Option<(bool, MayaSet)> {
    if !s.contains(k) {
        return None;
    }
    let neg = s.count_above(k) % 2 == 1;
    let mut t = s.clone();
    t.remove(k);
    Some((neg, t))
}

fn signed(neg: bool) -> Rational {
    rint(if neg { -1 } else { 1 })
}

/// A product of fermions applied to a state, rightmost first.
pub fn apply_word(word: &[Fermion], s: &MayaSet) -> FockVector {
    let mut neg = false;
    let mut cur = s.clone();
    for f in word.iter().rev() {
        match f.apply_state(&cur) {
            None => return FockVector::zero(),
            Some((n, t)) => {
                neg ^= n;
                cur = t;
            }
        }
    }
    let mut v = FockVector::zero();
    v.add_term(cur, signed(neg));
    v
}

/// Fermionic normal order: annihilators moved to the right, keeping relative
/// order, with the sign of the permutation.
pub fn normal_order(word: &[Fermion]) -> (bool, Vec<Fermion>) {
    let mut out: Vec<Fermion> = word.iter().copied().filter(|f| !f.is_annihilator()).collect();
    let mut neg = false;
    let mut creators_after = 0usize;
    for f in word.iter().rev() {
        if f.is_annihilator() {
            neg ^= creators_after % 2 == 1;
        } else {
            creators_after += 1;
        }
    }
    out.extend(word.iter().copied().filter(|f| f.is_annihilator()));
    (neg, out)
}

/// `:word:` applied to a state.
pub fn apply_normal_ordered(word: &[Fermion], s: &MayaSet) -> FockVector {
    let (neg, w) = normal_order(word);
    apply_word(&w, s).scale(&signed(neg))
}

fn delta_minus(a: Half, b: Half) -> bool {
    a == b && a < 0
}

fn delta_plus(a: Half, b: Half) -> bool {
    a == b && a > 0
}

/// `Ξ_ab = :ψ_a ψ*_b: = ψ_a ψ*_b − δ⁻_ab` on a state.
pub fn xi2_state(a: Half, b: Half, s: &MayaSet) -> FockVector {
    let mut v = apply_word(&[Fermion::Psi(a), Fermion::PsiStar(b)], s);
    if delta_minus(a, b) {
        v.add_term(s.clone(), rint(-1));
    }
    v
}

/// `Ξ_abuv` via `Ξ_ab Ξ_uv + δ⁻_av Ξ_ub − δ⁺_bu Ξ_av − δ⁻_av δ⁺_bu`.
pub fn xi4_state(a: Half, b: Half, u: Half, v: Half, s: &MayaSet) -> FockVector {
    let mut out = xi2_state(u, v, s).map_states(|t| xi2_state(a, b, t));
    let dm = delta_minus(a, v);
    let dp = delta_plus(b, u);
    if dm {
        out = out.add(&xi2_state(u, b, s));
    }
    if dp {
        out = out.add(&xi2_state(a, v, s).scale(&rint(-1)));
    }
    if dm && dp {
        out.add_term(s.clone(), rint(-1));
    }
    out
}

pub fn apply_xi2(a: Half, b: Half, v: &WedgeVector) -> WedgeVector {
    let out = v.to_fock().map_states(|s| xi2_state(a, b, s));
    wedge_or_zero(&out, v.degree)
}

pub fn apply_xi4(a: Half, b: Half, c: Half, d: Half, v: &WedgeVector) -> WedgeVector {
    let out = v.to_fock().map_states(|s| xi4_state(a, b, c, d, s));
    wedge_or_zero(&out, v.degree)
}

fn wedge_or_zero(v: &FockVector, degree: u32) -> WedgeVector {
    if v.is_zero() {
        WedgeVector::zero(degree)
    } else {
        WedgeVector::from_fock(v)
    }
}

/// `α_n = Σ_a :ψ_a ψ*_{a−n}:` on a state (`n ≠ 0`, so no ordering correction).
pub fn alpha_state(n: i64, s: &MayaSet) -> FockVector {
    assert!(n != 0, "alpha_0 vanishes on the charge-zero sector");
    let lo = s.holes.iter().next().copied().unwrap_or(1).min(1);
    let hi = s.particles.iter().next_back().copied().unwrap_or(-1).max(-1);
    let shift = 2 * n;
    let mut out = FockVector::zero();
    // a − n must be occupied and a empty.
    let mut from = lo.min(lo + shift) - 2;
    if from % 2 == 0 {
        from -= 1;
    }
    let to = hi.max(hi + shift) + 2;
    let mut a = from;
    while a <= to {
        out = out.add(&apply_word(&[Fermion::Psi(a), Fermion::PsiStar(a - shift)], s));
        a += 2;
    }
    out
}

pub fn apply_alpha(n: i64, v: &WedgeVector) -> WedgeVector {
    let out = v.to_fock().map_states(|s| alpha_state(n, s));
    let degree = (v.degree as i64 + n).max(0) as u32;
    wedge_or_zero(&out, degree)
}

/// A fermionic operator with its normal-ordering sign folded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FermionOpSpec {
    Xi2 { a: Half, b: Half },
    /// `sign · Ξ_abcd`, with `a > c` and `b > d` after reordering.
    Xi4 { sign: i8, a: Half, b: Half, c: Half, d: Half },
    Alpha(i64),
    Zero,
}

impl FermionOpSpec {
    pub fn xi2(a: Half, b: Half) -> Self {
        FermionOpSpec::Xi2 { a, b }
    }

    /// `Ξ_abcd`; swapping the two creators or the two annihilators flips the sign.
    pub fn xi4(a: Half, b: Half, c: Half, d: Half) -> Self {
        if a == c || b == d {
            return FermionOpSpec::Zero;
        }
        let mut sign = 1i8;
        let (a, c) = if a < c {
            sign = -sign;
            (c, a)
        } else {
            (a, c)
        };
        let (b, d) = if b < d {
            sign = -sign;
            (d, b)
        } else {
            (b, d)
        };
        FermionOpSpec::Xi4 { sign, a, b, c, d }
    }

    pub fn alpha(n: i64) -> Self {
        assert!(n != 0, "alpha_0 vanishes on the charge-zero sector");
        FermionOpSpec::Alpha(n)
    }

    pub fn apply(&self, v: &WedgeVector) -> WedgeVector {
        match *self {
            FermionOpSpec::Xi2 { a, b } => apply_xi2(a, b, v),
            FermionOpSpec::Xi4 { sign, a, b, c, d } => {
                let w = apply_xi4(a, b, c, d, v);
                if sign < 0 {
                    w.scale(&rint(-1))
                } else {
                    w
                }
            }
            FermionOpSpec::Alpha(n) => apply_alpha(n, v),
            FermionOpSpec::Zero => WedgeVector::zero(v.degree),
        }
    }
}

/// `σ_λ ψ_{c_1}…ψ_{c_d} ψ*_{c*_d}…ψ*_{c*_1} v_∅` with `σ_λ = (−1)^{Σ b_i}`;
/// equals `v_λ`.
pub fn from_vacuum(l: &Partition) -> FockVector {
    let f = l.frobenius();
    let mut word: Vec<Fermion> = f.plus.iter().map(|&c| Fermion::Psi(c)).collect();
    word.extend(f.minus.iter().rev().map(|&c| Fermion::PsiStar(c)));
    let legs: u32 = f.legs.iter().sum();
    apply_word(&word, &MayaSet::vacuum()).scale(&rint(if legs % 2 == 1 { -1 } else { 1 }))
}

/// Boson-fermion map `v_λ ↦ s_λ`.
pub fn phi(v: &WedgeVector) -> BosonVector {
    let mut out = BosonVector::zero(v.degree);
    for (l, c) in &v.terms {
        out = out.add(&schur(l).scale(c));
    }
    out
}

/// Inverse of [`phi`] via Schur coefficients.
pub fn phi_inverse(v: &BosonVector) -> WedgeVector {
    let coeffs = v.schur_coeffs();
    let mut out = WedgeVector::zero(v.degree());
    for (l, c) in enumerate_partitions(v.degree()).into_iter().zip(coeffs) {
        if !c.is_zero() {
            out.terms.insert(l, c);
        }
    }
    out
}
