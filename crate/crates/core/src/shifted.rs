//! Shifted symmetric functions on partitions: the constants `β_k`, the
//! generators `Q_k` and polynomial expressions in them and in `c`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{fmt_rational, parse_rational, SeriesExpr, SeriesSpec, Vars};
use crate::partitions::{enumerate_partitions, Partition};
use crate::{rat, rint, Rational};

static BETAS: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();

/// Coefficients of `(y/2)/sinh(y/2) = Σ β_k y^k`, extended on demand.
pub fn beta(k: usize) -> Rational {
    let table = BETAS.get_or_init(|| RwLock::new(Vec::new()));
    if let Some(b) = table.read().unwrap().get(k) {
        return b.clone();
    }
    let order = (2 * k).max(32);
    let coeffs = beta_series().coeffs(order);
    let mut w = table.write().unwrap();
    if w.len() <= order {
        *w = coeffs.into_iter().map(|p| p.constant_term()).collect();
    }
    w[k].clone()
}

fn beta_series() -> SeriesSpec<Rational> {
    let v = Vars::new(Vec::<String>::new());
    let half_t = SeriesExpr::constant(&v, rat(1, 2)).mul(SeriesExpr::T);
    // (y/2)/sinh(y/2) = 1 / (2 sinh(y/2) / y)
    let e = half_t.sinh().div_t().mul(SeriesExpr::constant(&v, rint(2))).recip();
    SeriesSpec::new(&v, e).expect("well-formed series")
}

/// Bernoulli numbers with `B_1 = −1/2`.
pub fn bernoulli(n: usize) -> Rational {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(vec![rint(1)]));
    if let Some(b) = cache.read().unwrap().get(n) {
        return b.clone();
    }
    let mut w = cache.write().unwrap();
    while w.len() <= n {
        let m = w.len();
        // Σ_{j<m+1} C(m+1, j) B_j = 0
        let mut s = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in w.iter().enumerate() {
            s += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        w.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    w[n].clone()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

/// `Q_k(λ)` from the modified Frobenius coordinates. `Q_0 = 1`.
pub fn eval_q(k: u32, l: &Partition) -> Rational {
    if k == 0 {
        return rint(1);
    }
    let mut s = BigInt::zero();
    for c in l.frobenius().c_set() {
        let t = BigInt::from(c).pow(k - 1);
        if c > 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    // c is stored doubled, so divide by 2^{k−1}.
    beta(k as usize) + Rational::new(s, factorial(k as u64 - 1) << (k as usize - 1))
}

/// `Q_k(λ)` from the row form `Σ_i [(λ_i − i + 1/2)^{k−1} − (−i + 1/2)^{k−1}]/(k−1)! + β_k`.
pub fn eval_q_rows(k: u32, l: &Partition) -> Rational {
    if k == 0 {
        return rint(1);
    }
    let mut s = Rational::zero();
    for i in 1..=l.len() {
        let x = rat(2 * (l.part(i) as i64 - i as i64) + 1, 2);
        let y = rat(-2 * i as i64 + 1, 2);
        s += num_traits::pow(x, (k - 1) as usize) - num_traits::pow(y, (k - 1) as usize);
    }
    beta(k as usize) + s / Rational::from_integer(factorial(k as u64 - 1))
}

/// Precomputed `Q_0..=Q_kmax` at one partition.
#[derive(Clone, Debug)]
pub struct QValues {
    values: Vec<Rational>,
}

impl QValues {
    pub fn new(l: &Partition, kmax: u32) -> Self {
        let c = l.frobenius().c_set();
        let mut values = vec![rint(1)];
        let mut powers: Vec<BigInt> = c.iter().map(|_| BigInt::one()).collect();
        for k in 1..=kmax {
            let mut s = BigInt::zero();
            for (p, &ci) in powers.iter().zip(&c) {
                if ci > 0 {
                    s += p;
                } else {
                    s -= p;
                }
            }
            values.push(beta(k as usize) + Rational::new(s, factorial(k as u64 - 1) << (k as usize - 1)));
            for (p, &ci) in powers.iter_mut().zip(&c) {
                *p *= ci;
            }
        }
        QValues { values }
    }

    pub fn get(&self, k: u32) -> &Rational {
        &self.values[k as usize]
    }
}

/// Memo table of `Q_k(λ)`; concurrent writes are idempotent.
#[derive(Default)]
pub struct QCache {
    map: RwLock<HashMap<(u32, Partition), Rational>>,
}

impl QCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, k: u32, l: &Partition) -> Rational {
        if let Some(v) = self.map.read().unwrap().get(&(k, l.clone())) {
            return v.clone();
        }
        let v = eval_q(k, l);
        self.map.write().unwrap().insert((k, l.clone()), v.clone());
        v
    }
}

/// `c^e Π Q_{m_i}` with all `m_i ≥ 2`, indices sorted decreasingly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial {
    pub c_exp: u32,
    pub q: Vec<u32>,
}

impl QMonomial {
    pub fn new(c_exp: u32, mut q: Vec<u32>) -> Option<Self> {
        // Q_1 vanishes identically and Q_0 is the unit.
        if q.contains(&1) {
            return None;
        }
        q.retain(|&m| m != 0);
        q.sort_unstable_by(|a, b| b.cmp(a));
        Some(QMonomial { c_exp, q })
    }

    pub fn weight(&self) -> u32 {
        self.c_exp + self.q.iter().sum::<u32>()
    }

    pub fn eval(&self, qv: &QValues, c: &Rational) -> Rational {
        let mut v = num_traits::pow(c.clone(), self.c_exp as usize);
        for &m in &self.q {
            v *= qv.get(m);
        }
        v
    }

    fn max_index(&self) -> u32 {
        self.q.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        match self.c_exp {
            0 => {}
            1 => factors.push("c".to_string()),
            e => factors.push(format!("c^{e}")),
        }
        factors.extend(self.q.iter().map(|m| format!("Q_{m}")));
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// An element of `Λ*[c]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QExpr {
    terms: BTreeMap<QMonomial, Rational>,
}

impl QExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(QMonomial { c_exp: 0, q: vec![] }, rint(1))
    }

    pub fn monomial(m: QMonomial, coeff: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, coeff);
        e
    }

    /// The generator `Q_k`; `Q_0 = 1`, `Q_1 = 0`.
    pub fn q(k: u32) -> Self {
        match QMonomial::new(0, vec![k]) {
            Some(m) => Self::monomial(m, rint(1)),
            None => Self::zero(),
        }
    }

    pub fn c_pow(e: u32) -> Self {
        Self::monomial(QMonomial { c_exp: e, q: vec![] }, rint(1))
    }

    pub fn add_term(&mut self, m: QMonomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &QMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common weight of all monomials, or `None` if mixed. Zero has weight 0.
    pub fn weight(&self) -> Option<u32> {
        let mut w = self.terms.keys().map(QMonomial::weight);
        let first = w.next().unwrap_or(0);
        w.all(|x| x == first).then_some(first)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let q = m1.q.iter().chain(&m2.q).copied().collect();
                let m = QMonomial::new(m1.c_exp + m2.c_exp, q).expect("no Q_1 factors");
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    /// Largest generator index used.
    pub fn max_index(&self) -> u32 {
        self.terms.keys().map(QMonomial::max_index).max().unwrap_or(0)
    }

    pub fn eval_with(&self, qv: &QValues, c: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (m, k)| acc + k * m.eval(qv, c))
    }

    pub fn eval(&self, l: &Partition, c: &Rational) -> Rational {
        self.eval_with(&QValues::new(l, self.max_index()), c)
    }

    pub fn to_json_terms(&self) -> Vec<QTermJson> {
        self.terms
            .iter()
            .map(|(m, c)| QTermJson { c_exp: m.c_exp, q_indices: m.q.clone(), coeff: fmt_rational(c) })
            .collect()
    }

    pub fn from_json_terms(terms: &[QTermJson]) -> Result<Self, String> {
        let mut e = Self::zero();
        for t in terms {
            let c = parse_rational(&t.coeff)?;
            match QMonomial::new(t.c_exp, t.q_indices.clone()) {
                Some(m) => e.add_term(m, c),
                None if c.is_zero() => {}
                None => return Err("Q_1 is identically zero and cannot carry a coefficient".into()),
            }
        }
        Ok(e)
    }
}

impl Serialize for QExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<QTermJson>::deserialize(d)?;
        QExpr::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QTermJson {
    pub c_exp: u32,
    pub q_indices: Vec<u32>,
    pub coeff: String,
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            write!(f, "{}*{}", fmt_rational(&c.abs()), m)?;
        }
        Ok(())
    }
}

/// Monomials `c^e Π Q_{m_i}` (`m_i ≥ 2`) of the given weight: decreasing `e`,
/// then reverse lexicographic in the `Q`-indices.
pub fn monomial_basis(weight: u32) -> Vec<QMonomial> {
    let mut out = Vec::new();
    for e in (0..=weight).rev() {
        out.extend(monomial_basis_c0(weight - e).into_iter().map(|m| QMonomial { c_exp: e, ..m }));
    }
    out
}

/// The `c`-free part of [`monomial_basis`]: a basis of `Λ*` in the given weight.
pub fn monomial_basis_c0(weight: u32) -> Vec<QMonomial> {
    enumerate_partitions(weight)
        .into_iter()
        .filter(|p| p.parts().iter().all(|&x| x >= 2))
        .map(|p| QMonomial { c_exp: 0, q: p.parts().to_vec() })
        .collect()
}

/// Zeroth-order eigenvalue `Σ_j c^{k+2−j}/(k+2−j)! Q_j`.
pub fn dubrovin_eigenvalue(k: u32) -> QExpr {
    let mut e = QExpr::zero();
    for j in 0..=k + 2 {
        let f = Rational::new(BigInt::one(), factorial((k + 2 - j) as u64));
        e = e.add(&QExpr::c_pow(k + 2 - j).mul(&QExpr::q(j)).scale(&f));
    }
    e
}

/// First-order eigenvalue `Σ_ℓ c^ℓ/ℓ! · (2 Q_2 Q_{k−ℓ+1} + (k−ℓ)(k−ℓ+3) Q_{k−ℓ+3}) / 24`.
pub fn first_order_eigenvalue(k: u32) -> QExpr {
    let mut e = QExpr::zero();
    for l in 0..=k {
        let kk = k - l;
        let inner = QExpr::q(2)
            .mul(&QExpr::q(kk + 1))
            .scale(&rint(2))
            .add(&QExpr::q(kk + 3).scale(&rint((kk * (kk + 3)) as i64)));
        let f = Rational::new(BigInt::one(), factorial(l as u64) * 24);
        e = e.add(&QExpr::c_pow(l).mul(&inner).scale(&f));
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{part, partitions_up_to};

    #[test]
    fn beta_values() {
        assert_eq!(beta(0), rint(1));
        assert_eq!(beta(2), rat(-1, 24));
        assert_eq!(beta(4), rat(7, 5760));
        assert_eq!(beta(6), rat(-31, 967680));
        assert_eq!(beta(3), rint(0));
    }

    #[test]
    fn beta_matches_bernoulli_closed_form() {
        for k in 0..=20usize {
            let two_pow = if k == 0 { rint(2) } else { rat(1, 1 << (k - 1)) };
            let closed = (two_pow - rint(1)) * bernoulli(k) / Rational::from_integer(factorial(k as u64));
            assert_eq!(beta(k), closed, "k = {k}");
        }
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn q_examples() {
        for l in partitions_up_to(8) {
            assert_eq!(eval_q(2, &l), rint(l.size() as i64) - rat(1, 24));
            assert_eq!(eval_q(1, &l), rint(0));
        }
        assert_eq!(eval_q(3, &part(&[2])), rint(1));
        assert_eq!(eval_q(3, &part(&[1, 1])), rint(-1));
        assert_eq!(eval_q(3, &part(&[1])), rint(0));
        assert_eq!(eval_q(5, &Partition::empty()), beta(5));
    }

    #[test]
    fn two_q_formulas_agree() {
        for l in partitions_up_to(8) {
            let qv = QValues::new(&l, 12);
            for k in 1..=12 {
                let a = eval_q(k, &l);
                assert_eq!(a, eval_q_rows(k, &l), "k={k}, λ={l}");
                assert_eq!(&a, qv.get(k));
            }
        }
    }

    #[test]
    fn qexpr_evaluation() {
        let c2 = QExpr::c_pow(2).scale(&rat(1, 2)).add(&QExpr::q(2));
        assert_eq!(QExpr::q(2).eval(&part(&[3, 1]), &rint(7)), rat(95, 24));
        assert_eq!(c2.eval(&Partition::empty(), &rint(1)), rat(11, 24));
        assert_eq!(QExpr::one().eval(&part(&[2, 2]), &rat(-3, 5)), rint(1));
        assert!(QExpr::q(1).is_zero());
    }

    #[test]
    fn basis_enumeration() {
        let show = |w| monomial_basis(w).iter().map(|m| m.to_string()).collect::<Vec<_>>();
        assert_eq!(show(2), ["c^2", "Q_2"]);
        assert_eq!(show(3), ["c^3", "c*Q_2", "Q_3"]);
        assert_eq!(show(5), ["c^5", "c^3*Q_2", "c^2*Q_3", "c*Q_4", "c*Q_2*Q_2", "Q_5", "Q_3*Q_2"]);
    }

    #[test]
    fn dubrovin_is_homogeneous() {
        for k in 0..=8 {
            assert_eq!(dubrovin_eigenvalue(k).weight(), Some(k + 2));
            if k > 0 {
                assert_eq!(first_order_eigenvalue(k).weight(), Some(k + 3));
            }
        }
        assert!(first_order_eigenvalue(0).is_zero());
        assert_eq!(dubrovin_eigenvalue(0).eval(&Partition::empty(), &rint(1)), rat(11, 24));
    }

    #[test]
    fn json_round_trip() {
        let e = first_order_eigenvalue(3);
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"cExp\""));
        assert_eq!(serde_json::from_str::<QExpr>(&s).unwrap(), e);
    }
}
