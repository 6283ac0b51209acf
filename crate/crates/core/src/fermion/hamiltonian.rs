//! Matrices of the closed-form fermionic Hamiltonians on `B_n`, in the Schur
//! basis (`v_λ ↔ s_λ`).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{xi2_state, xi4_state, FockVector};
use crate::boson::SchurBasis;
use crate::partitions::{half_value, Half, MayaSet};
use crate::shifted::{beta, factorial};
use crate::{rint, RatMatrix, Rational};

use super::abpoly::ab_polynomials;

/// `M[μ][λ] = ⟨v_μ, O v_λ⟩` for an operator given on Maya states.
pub fn wedge_matrix(n: u32, op: impl Fn(&MayaSet) -> FockVector + Sync) -> RatMatrix {
    let basis = SchurBasis::get(n);
    let cols: Vec<FockVector> = basis.partitions.par_iter().map(|l| op(&l.maya())).collect();
    let d = basis.dim();
    let mut m = RatMatrix::zeros(d, d);
    for (j, img) in cols.iter().enumerate() {
        for (s, c) in img.terms() {
            assert_eq!(s.charge(), 0, "operator leaves the charge-zero sector");
            let l = s.to_partition();
            assert_eq!(l.size(), n, "operator changes the degree");
            m[(basis.index_of(&l), j)] = c.clone();
        }
    }
    m
}

/// Doubled half-integer modes with `|a| ≤ cutoff/2`.
fn modes(cutoff: Half) -> Vec<Half> {
    (-cutoff..=cutoff).filter(|h| h.rem_euclid(2) == 1).collect()
}

fn default_cutoff(n: u32) -> Half {
    2 * n as Half + 1
}

fn inv_factorial(n: u64) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// `z⁰` part of the zeroth-order Hamiltonian at `c = 0`, level `j ≥ −2`.
fn g0_at_zero(j: i64, n: u32, cutoff: Half) -> RatMatrix {
    let d = SchurBasis::get(n).dim();
    if j == -2 {
        return RatMatrix::identity(d);
    }
    let e = (j + 1) as u64;
    let ms = modes(cutoff);
    let weights: Vec<(Half, Rational)> = ms
        .iter()
        .map(|&a| (a, num_traits::pow(half_value(a), e as usize) * inv_factorial(e)))
        .collect();
    let m = wedge_matrix(n, |s| {
        let mut out = FockVector::zero();
        for (a, w) in &weights {
            out = out.add(&xi2_state(*a, *a, s).scale(w));
        }
        out
    });
    &m + &RatMatrix::scalar(d, beta((j + 2) as usize))
}

/// The zeroth-order Hamiltonian at level `k ≥ −1` on `B_n` with the shift
/// `Ĝ_k(c) = Σ_ℓ c^ℓ/ℓ! Ĝ_{k−ℓ}(0)`, down to `Ĝ_{−2} = Id`.
pub fn g_hat0_matrix(k: i64, n: u32, c: &Rational) -> RatMatrix {
    assert!(k >= -1, "level below -1");
    let cutoff = default_cutoff(n);
    let d = SchurBasis::get(n).dim();
    let mut out = RatMatrix::zeros(d, d);
    let mut cp = rint(1);
    for l in 0..=(k + 2) {
        if l > 0 {
            cp *= c;
        }
        if l > 0 && cp.is_zero() {
            break;
        }
        let m = g0_at_zero(k - l, n, cutoff);
        out = &out + &m.scale(&(&cp * inv_factorial(l as u64)));
    }
    out
}

/// The first-order Hamiltonian at level `k` on `B_n`, checking that enlarging
/// the mode cutoff by one leaves the matrix unchanged.
pub fn g_hat1_matrix(k: i64, n: u32) -> RatMatrix {
    let cutoff = default_cutoff(n);
    let m = g_hat1_matrix_with_cutoff(k, n, cutoff);
    let wider = g_hat1_matrix_with_cutoff(k, n, cutoff + 2);
    assert_eq!(m, wider, "mode cutoff too small at k={k}, n={n}");
    m
}

/// As [`g_hat1_matrix`] with explicit doubled cutoff and no enlargement check.
pub fn g_hat1_matrix_with_cutoff(k: i64, n: u32, cutoff: Half) -> RatMatrix {
    assert!(k >= 0, "first-order level must be nonnegative");
    let data = ab_polynomials(k);
    let ms = modes(cutoff);
    let a_bal = data.a_balanced();
    let b_diag = data.b_diagonal();

    // Quartic coefficients for a + c = b + d inside the window; terms with a
    // repeated creator or annihilator vanish.
    let mut triples: Vec<(Half, Half, Half)> = Vec::new();
    for &a in &ms {
        for &b in &ms {
            for &c in &ms {
                let d = a + c - b;
                if a != c && b != d && d.abs() <= cutoff {
                    triples.push((a, b, c));
                }
            }
        }
    }
    let quartic: HashMap<(Half, Half, Half), Rational> = triples
        .par_iter()
        .filter_map(|&(a, b, c)| {
            let v = a_bal.eval(&[half_value(a), half_value(b), half_value(c)]);
            (!v.is_zero()).then_some(((a, b, c), v))
        })
        .collect();
    let quadratic: Vec<(Half, Rational)> =
        ms.iter().map(|&a| (a, b_diag.eval(&[half_value(a)]))).collect();

    let d = SchurBasis::get(n).dim();
    let m = wedge_matrix(n, |s| {
        let mut out = FockVector::zero();
        for (&(a, b, c), w) in &quartic {
            let v = xi4_state(a, b, c, a + c - b, s);
            if !v.is_zero() {
                out = out.add(&v.scale(w));
            }
        }
        for (a, w) in &quadratic {
            out = out.add(&xi2_state(*a, *a, s).scale(w));
        }
        out
    });
    &m + &RatMatrix::scalar(d, data.gamma.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson::BosonVector;
    use crate::partitions::part;
    use crate::rat;
    use crate::shifted::eval_q;

    #[test]
    fn zeroth_order_examples() {
        for n in 0..=4 {
            let m = g_hat0_matrix(0, n, &rint(0));
            assert!(m.is_diagonal());
            assert!(m.diagonal().iter().all(|x| *x == rint(n as i64) - rat(1, 24)));
        }
        let m = g_hat0_matrix(1, 2, &rint(0));
        let b = SchurBasis::get(2);
        assert_eq!(m[(b.index_of(&part(&[2])), b.index_of(&part(&[2])))], rint(1));
        assert_eq!(m[(b.index_of(&part(&[1, 1])), b.index_of(&part(&[1, 1])))], rint(-1));
        assert_eq!(g_hat0_matrix(0, 0, &rint(1))[(0, 0)], rat(1, 2) - rat(1, 24));
    }

    #[test]
    fn zeroth_order_spectrum() {
        for k in -1..=5i64 {
            for n in 0..=5 {
                let m = g_hat0_matrix(k, n, &rint(0));
                assert!(m.is_diagonal());
                let b = SchurBasis::get(n);
                for (i, l) in b.partitions.iter().enumerate() {
                    assert_eq!(m[(i, i)], eval_q((k + 2) as u32, l), "k={k} λ={l}");
                }
            }
        }
    }

    #[test]
    fn first_order_level_one() {
        assert_eq!(g_hat1_matrix(1, 1)[(0, 0)], rat(241, 120));
        for n in 0..=5 {
            let b = SchurBasis::get(n);
            let want = b.matrix_from_p_action(|al| {
                let e: Rational = al.parts().iter().map(|&m| rint(2 * (m as i64).pow(3))).sum();
                BosonVector::p(al).scale(&(e + rat(1, 120)))
            });
            assert_eq!(g_hat1_matrix(1, n), want, "n={n}");
        }
        let b = SchurBasis::get(2);
        let m = g_hat1_matrix(1, 2);
        assert_eq!(m[(b.index_of(&part(&[1, 1])), b.index_of(&part(&[2])))], rint(-6));
    }

    #[test]
    fn vacuum_constants() {
        for k in 0..=10 {
            assert_eq!(g_hat1_matrix(k, 0)[(0, 0)], ab_polynomials(k).gamma);
        }
    }
}
