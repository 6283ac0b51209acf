//! Densities rewritten as differential polynomials in `u_s(z) = Σ a^s ω_a z^a`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Hierarchy, HierarchyError};
use crate::exact::fmt_rational;
use crate::shifted::factorial;
use crate::Rational;

/// Monomial `ε^e ħ^h Π u_{s_i}` with `s` sorted decreasingly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffMonomial {
    pub u: Vec<u32>,
    pub eps: u32,
    pub hbar: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffPoly {
    pub terms: BTreeMap<DiffMonomial, Rational>,
}

impl DiffPoly {
    pub fn coeff(&self, u: &[u32], eps: u32, hbar: u32) -> Rational {
        let mut u = u.to_vec();
        u.sort_unstable_by(|a, b| b.cmp(a));
        self.terms.get(&DiffMonomial { u, eps, hbar }).cloned().unwrap_or_else(Rational::zero)
    }

    /// Every monomial has even total derivative order.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.u.iter().sum::<u32>() % 2 == 0)
    }
}

/// The density of level `k` through order `j_max` of the hierarchy, in
/// actual powers of `ε`.
pub fn to_differential_polynomial(h: &Hierarchy, k: i64) -> Result<DiffPoly, HierarchyError> {
    let mut out = DiffPoly::default();
    for j in 0..=h.j_max() {
        let t = h.table(k, j)?;
        let eps_scale = Rational::new(BigInt::one(), BigInt::from(24).pow(j));
        for (&(n, hb), p) in &t.shapes {
            for (mu, c) in p.terms() {
                if mu.size() % 2 == 1 {
                    return Err(HierarchyError::OddWeight { k });
                }
                // Π u_{s_i} has symmetrized coefficient m_s · Π mult(s)! / n!.
                let mut s = mu.parts().to_vec();
                s.extend(std::iter::repeat_n(0, n as usize - mu.len()));
                let zeros = n as u64 - mu.len() as u64;
                let mults: BigInt = mu.multiplicities().iter().map(|&m| factorial(m as u64)).product::<BigInt>()
                    * factorial(zeros);
                let w = c * Rational::new(factorial(n as u64), mults) * &eps_scale;
                out.terms.insert(DiffMonomial { u: s, eps: j, hbar: hb }, w);
            }
        }
        if let Some(hb) = t.constant_hbar() {
            let c = t.constant_value();
            if !c.is_zero() {
                out.terms.insert(DiffMonomial { u: vec![], eps: j, hbar: hb }, c * &eps_scale);
            }
        }
    }
    Ok(out)
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            if m.eps > 0 {
                factors.push(if m.eps == 1 { "eps".to_string() } else { format!("eps^{}", m.eps) });
            }
            if m.hbar > 0 {
                factors.push(if m.hbar == 1 { "hbar".to_string() } else { format!("hbar^{}", m.hbar) });
            }
            let mut i = 0;
            while i < m.u.len() {
                let s = m.u[i];
                let e = m.u[i..].iter().take_while(|&&x| x == s).count();
                factors.push(if e == 1 { format!("u{s}") } else { format!("u{s}^{e}") });
                i += e;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rint};

    #[test]
    fn low_levels() {
        let h = Hierarchy::shared(1, 2).unwrap();
        let g = to_differential_polynomial(&h, -1).unwrap();
        assert_eq!(g.terms.len(), 1);
        assert_eq!(g.coeff(&[0], 0, 0), rint(1));

        let g = to_differential_polynomial(&h, 0).unwrap();
        assert_eq!(g.terms.len(), 3);
        assert_eq!(g.coeff(&[0, 0], 0, 0), rat(1, 2));
        assert_eq!(g.coeff(&[2], 1, 0), rat(1, 24));
        assert_eq!(g.coeff(&[], 0, 1), rat(-1, 24));

        let g = to_differential_polynomial(&h, 1).unwrap();
        assert_eq!(g.terms.len(), 6);
        assert_eq!(g.coeff(&[0, 0, 0], 0, 0), rat(1, 6));
        assert_eq!(g.coeff(&[2, 0], 1, 0), rat(1, 24));
        assert_eq!(g.coeff(&[4], 2, 0), rat(1, 1152));
        assert_eq!(g.coeff(&[2], 0, 1), rat(1, 24));
        assert_eq!(g.coeff(&[0], 0, 1), rat(-1, 24));
        assert_eq!(g.coeff(&[], 1, 1), rat(1, 2880));
        assert!(g.is_even());
    }
}
