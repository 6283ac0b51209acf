//! Hamiltonians `Ĝ_k^[j]` as matrices on `B_n` in the Schur basis.
//!
//! Only mode tuples with zero sum contribute to the residue. Under the
//! bosonic representation positive modes multiply by `p_a` and negative modes
//! act as `b ∂/∂p_b`, so on `B_n` only tuples whose positive (equivalently
//! negative) part has size at most `n` survive.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GTable, Hierarchy, HierarchyError};
use crate::boson::{BosonVector, SchurBasis};
use crate::partitions::{enumerate_partitions, Partition};
use crate::shifted::factorial;
use crate::{rint, RatMatrix, Rational};

fn multiset_factor(parts: &Partition) -> BigInt {
    parts.multiplicities().iter().map(|&m| factorial(m as u64)).product()
}

/// Weighted operators `p_{α⁺} Π(b ∂/∂p_b)_{b∈α⁻}` of one table, zero modes
/// replaced by `c` (or dropped when `c` is `None`).
fn operator_terms(t: &GTable, n: u32, c: Option<&Rational>) -> BTreeMap<(Partition, Partition), Rational> {
    let mut ops: BTreeMap<(Partition, Partition), Rational> = BTreeMap::new();
    let parts_by_size: Vec<Vec<Partition>> = (0..=n).map(enumerate_partitions).collect();
    for (&(m, _h), p) in &t.shapes {
        let zmax = if c.is_some_and(|c| !c.is_zero()) { m } else { 0 };
        for z in 0..=zmax {
            let rem = m - z;
            let cz = c.map_or_else(|| rint(1), |c| num_traits::pow(c.clone(), z as usize));
            for s in 0..=n {
                if (rem == 0) != (s == 0) {
                    continue;
                }
                for ap in &parts_by_size[s as usize] {
                    for am in &parts_by_size[s as usize] {
                        if ap.len() + am.len() != rem as usize {
                            continue;
                        }
                        let mut modes: Vec<i64> = ap.parts().iter().map(|&x| x as i64).collect();
                        modes.extend(am.parts().iter().map(|&x| -(x as i64)));
                        modes.extend(std::iter::repeat_n(0, z as usize));
                        let v = p.eval(&modes);
                        if v.is_zero() {
                            continue;
                        }
                        let arrangements = Rational::new(
                            factorial(m as u64),
                            multiset_factor(ap) * multiset_factor(am) * factorial(z as u64),
                        );
                        let e = ops.entry((ap.clone(), am.clone())).or_insert_with(Rational::zero);
                        *e += v * arrangements * &cz;
                    }
                }
            }
        }
    }
    ops
}

fn matrix_of(ops: &BTreeMap<(Partition, Partition), Rational>, constant: Rational, n: u32) -> RatMatrix {
    let basis = SchurBasis::get(n);
    basis.matrix_from_p_action(|beta| {
        let start = BosonVector::p(beta);
        let mut out = start.scale(&constant);
        for ((ap, am), w) in ops {
            let mut v = start.clone();
            for &b in am.parts() {
                v = v.d_dp(b).scale(&rint(b as i64));
                if v.is_zero() {
                    break;
                }
            }
            if v.is_zero() {
                continue;
            }
            for &a in ap.parts() {
                v = v.mul_p(a);
            }
            out = out.add(&v.scale(w));
        }
        out
    })
}

/// `Ĝ_k^[j]` at `c = 0`; level `−2` is the identity at order zero.
pub fn extract_hamiltonian_at_zero(h: &Hierarchy, k: i64, j: u32, n: u32) -> Result<RatMatrix, HierarchyError> {
    let d = SchurBasis::get(n).dim();
    if k == -2 {
        return Ok(if j == 0 { RatMatrix::identity(d) } else { RatMatrix::zeros(d, d) });
    }
    let t = h.table(k, j)?;
    let ops = operator_terms(t, n, None);
    Ok(matrix_of(&ops, t.constant_value(), n))
}

/// `Ĝ_k^[j](c) = Σ_ℓ c^ℓ/ℓ! Ĝ_{k−ℓ}^[j](0)`.
pub fn extract_hamiltonian(h: &Hierarchy, k: i64, j: u32, n: u32, c: &Rational) -> Result<RatMatrix, HierarchyError> {
    let d = SchurBasis::get(n).dim();
    let mut out = extract_hamiltonian_at_zero(h, k, j, n)?;
    if c.is_zero() {
        return Ok(out);
    }
    let mut cp = Rational::one();
    for l in 1..=(k + 2) {
        cp = cp * c / rint(l);
        let m = extract_hamiltonian_at_zero(h, k - l, j, n)?;
        out = &out + &m.scale(&cp);
    }
    debug_assert_eq!(out.rows(), d);
    Ok(out)
}

/// `Ĝ_k^[j]` with the representation sending `ω_0` to `c` directly.
pub fn extract_hamiltonian_direct(
    h: &Hierarchy,
    k: i64,
    j: u32,
    n: u32,
    c: &Rational,
) -> Result<RatMatrix, HierarchyError> {
    let t = h.table(k, j)?;
    let ops = operator_terms(t, n, Some(c));
    Ok(matrix_of(&ops, t.constant_value(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::{g_hat0_matrix, g_hat1_matrix};
    use crate::rat;
    use crate::shifted::eval_q;

    #[test]
    fn zeroth_order_spectra() {
        let h = Hierarchy::shared(4, 2).unwrap();
        for n in 0..=5 {
            let m = extract_hamiltonian(&h, 0, 0, n, &rint(0)).unwrap();
            assert!(m.is_diagonal());
            assert!(m.diagonal().iter().all(|x| *x == rint(n as i64) - rat(1, 24)));
            let m = extract_hamiltonian(&h, 1, 0, n, &rint(0)).unwrap();
            let b = SchurBasis::get(n);
            for (i, l) in b.partitions.iter().enumerate() {
                assert_eq!(m[(i, i)], eval_q(3, l));
            }
            assert!(m.is_diagonal());
        }
    }

    #[test]
    fn matches_fermionic_closed_forms() {
        let h = Hierarchy::shared(4, 2).unwrap();
        for k in -1..=4i64 {
            for n in 0..=4 {
                for c in [rint(0), rint(1), rat(-1, 2)] {
                    let a = extract_hamiltonian(&h, k, 0, n, &c).unwrap();
                    assert_eq!(a, g_hat0_matrix(k, n, &c), "k={k} n={n} c={c}");
                    assert_eq!(a, extract_hamiltonian_direct(&h, k, 0, n, &c).unwrap());
                }
                if k >= 0 {
                    assert_eq!(extract_hamiltonian(&h, k, 1, n, &rint(0)).unwrap(), g_hat1_matrix(k, n), "k={k} n={n}");
                }
            }
        }
    }
}
