//! Symmetric polynomials in a fixed number of mode symbols, stored on the
//! monomial symmetric basis `m_μ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{fmt_rational, serde_rational};
use crate::partitions::{enumerate_partitions, Partition};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    nvars: usize,
    coeffs: BTreeMap<Partition, Rational>,
}

/// Distinct exponent vectors of `m_μ` in `n` variables.
fn exponent_orbit(mu: &Partition, n: usize) -> Arc<Vec<Vec<u32>>> {
    static CACHE: OnceLock<RwLock<HashMap<(Partition, usize), Arc<Vec<Vec<u32>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (mu.clone(), n);
    if let Some(v) = cache.read().unwrap().get(&key) {
        return v.clone();
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &p in mu.parts() {
        *counts.entry(p).or_default() += 1;
    }
    *counts.entry(0).or_default() += n - mu.len();
    let mut items: Vec<(u32, usize)> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(items: &mut [(u32, usize)], n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..items.len() {
            if items[i].1 > 0 {
                items[i].1 -= 1;
                cur.push(items[i].0);
                rec(items, n, cur, out);
                cur.pop();
                items[i].1 += 1;
            }
        }
    }
    rec(&mut items, n, &mut cur, &mut out);
    let v = Arc::new(out);
    cache.write().unwrap().insert(key, v.clone());
    v
}

/// `m_μ(x)` at an integer point.
pub fn eval_monomial_symmetric(mu: &Partition, x: &[i64]) -> BigInt {
    let n = x.len();
    assert!(mu.len() <= n, "partition longer than the variable count");
    let dmax = mu.parts().first().copied().unwrap_or(0) as usize;
    let pows: Vec<Vec<BigInt>> = x
        .iter()
        .map(|&xi| {
            let mut v = Vec::with_capacity(dmax + 1);
            let mut p = BigInt::one();
            for _ in 0..=dmax {
                v.push(p.clone());
                p *= xi;
            }
            v
        })
        .collect();
    let mut s = BigInt::zero();
    for e in exponent_orbit(mu, n).iter() {
        let mut t = BigInt::one();
        for (i, &ei) in e.iter().enumerate() {
            if ei > 0 {
                t *= &pows[i][ei as usize];
            }
        }
        s += t;
    }
    s
}

/// `m_μ` with `ℓ(μ) ≤ n` and `|μ|` even, up to total degree `deg`.
pub fn even_basis(n: usize, deg: u32) -> Vec<Partition> {
    (0..=deg)
        .step_by(2)
        .flat_map(enumerate_partitions)
        .filter(|p| p.len() <= n)
        .collect()
}

impl SymPoly {
    pub fn zero(nvars: usize) -> Self {
        SymPoly { nvars, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Partition::empty(), c);
        p
    }

    pub fn from_coeffs(nvars: usize, terms: impl IntoIterator<Item = (Partition, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, mu: Partition, c: Rational) {
        assert!(mu.len() <= self.nvars, "partition longer than the variable count");
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(mu.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&mu);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, mu: &Partition) -> Rational {
        self.coeffs.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(Partition::size).max()
    }

    /// Every monomial has even total degree.
    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|m| m.size() % 2 == 0)
    }

    pub fn eval(&self, x: &[i64]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut s = Rational::zero();
        for (mu, c) in &self.coeffs {
            let v = eval_monomial_symmetric(mu, x);
            if !v.is_zero() {
                s += c * Rational::from_integer(v);
            }
        }
        s
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(m, c)| format!("{}*m[{}]", fmt_rational(c), m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SymTermJson {
    pub mu: Partition,
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
}

impl SymPoly {
    pub fn to_json_terms(&self) -> Vec<SymTermJson> {
        self.coeffs.iter().map(|(m, c)| SymTermJson { mu: m.clone(), coeff: c.clone() }).collect()
    }

    pub fn from_json_terms(nvars: usize, terms: &[SymTermJson]) -> Self {
        Self::from_coeffs(nvars, terms.iter().map(|t| (t.mu.clone(), t.coeff.clone())))
    }
}
