use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::Scalar;

/// Declared variable universe of a polynomial.
///
/// Polynomials over different universes never combine; the arithmetic
/// operators panic if asked to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

/// Sparse multivariate polynomial. Monomials are exponent vectors with one
/// entry per declared variable; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<S> {
    vars: Vars,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: S) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, S::one())
    }

    /// The `i`-th variable.
    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, S::one())
    }

    pub fn monomial(vars: &Vars, exps: Vec<u32>, c: S) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    /// Linear form `Σ c_i x_i + c0`.
    pub fn linear(vars: &Vars, coeffs: &[S], c0: S) -> Self {
        let mut p = Self::constant(vars, c0);
        for (i, c) in coeffs.iter().enumerate() {
            p = &p + &Self::var(vars, i).scale(c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> S {
        self.terms.get(exps).cloned().unwrap_or_else(S::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> S {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.vars.len());
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// True when every monomial has even total degree.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() % 2 == 0)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute polynomials (over a common target universe) for every variable.
    pub fn compose(&self, images: &[MultiPoly<S>]) -> MultiPoly<S> {
        assert_eq!(images.len(), self.vars.len());
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        let mut acc = MultiPoly::zero(&target);
        let mut powers: Vec<Vec<MultiPoly<S>>> =
            images.iter().map(|p| vec![MultiPoly::one(&p.vars)]).collect();
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Exact quotient by `x_var − rhs`, where `rhs` does not involve `x_var`.
    /// Returns `None` when the division leaves a remainder.
    pub fn exact_div_linear(&self, var: usize, rhs: &MultiPoly<S>) -> Option<MultiPoly<S>> {
        assert_eq!(self.vars, rhs.vars);
        assert!(rhs.degree_in(var).unwrap_or(0) == 0, "divisor shift involves the variable");
        if self.is_zero() {
            return Some(self.clone());
        }
        // Coefficients of powers of x_var.
        let d = self.degree_in(var).unwrap() as usize;
        let mut coeffs = vec![MultiPoly::zero(&self.vars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var] as usize;
            e2[var] = 0;
            coeffs[k].add_term(e2, c.clone());
        }
        if d == 0 {
            return if coeffs[0].is_zero() { Some(coeffs[0].clone()) } else { None };
        }
        // Synthetic division.
        let mut q = vec![MultiPoly::zero(&self.vars); d];
        q[d - 1] = coeffs[d].clone();
        for k in (1..d).rev() {
            q[k - 1] = &coeffs[k] + &(rhs * &q[k]);
        }
        let rem = &coeffs[0] + &(rhs * &q[0]);
        if !rem.is_zero() {
            return None;
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (k, qk) in q.into_iter().enumerate() {
            for (e, c) in qk.terms {
                let mut e2 = e;
                e2[var] = k as u32;
                out.add_term(e2, c);
            }
        }
        Some(out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    fn check_vars(&self, other: &Self) {
        assert!(self.vars == other.vars, "polynomials over different variable universes");
    }
}

impl<S: Scalar> Add for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn sub(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn mul(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        self.check_vars(rhs);
        let mut out = MultiPoly::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<S: Scalar> fmt::Display for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (e, c) in terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let is_const = e.iter().all(|&k| k == 0);
            if is_const || !mag.is_one() {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                write!(f, "{}", self.vars.name(i))?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rint, RatPoly};

    fn abcd() -> Vars {
        Vars::new(["a", "b", "c", "d"])
    }

    #[test]
    fn arithmetic_and_display() {
        let v = Vars::new(["x", "y"]);
        let x = RatPoly::var(&v, 0);
        let y = RatPoly::var(&v, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &x.pow(2) - &y.pow(2));
        assert_eq!(p.to_string(), "x^2 - y^2");
        assert_eq!(p.eval(&[rint(3), rint(1)]), rint(8));
        assert!(p.is_even());
        assert!(!(&p + &x).is_even());
    }

    #[test]
    fn exact_linear_division() {
        let v = abcd();
        let a = RatPoly::var(&v, 0);
        let b = RatPoly::var(&v, 1);
        let c = RatPoly::var(&v, 2);
        let d = RatPoly::var(&v, 3);
        let shift = &(&b - &c) + &d;
        let divisor = &a - &shift;
        let other = &(&a.pow(2) + &c.scale(&rat(1, 3))) * &d;
        let prod = &divisor * &other;
        assert_eq!(prod.exact_div_linear(0, &shift).unwrap(), other);
        assert!((&prod + &b).exact_div_linear(0, &shift).is_none());
    }

    #[test]
    #[should_panic(expected = "different variable universes")]
    fn universes_do_not_mix() {
        let p = RatPoly::var(&Vars::new(["a"]), 0);
        let q = RatPoly::var(&Vars::new(["p1"]), 0);
        let _ = &p + &q;
    }

    #[test]
    fn compose_substitutes() {
        let v = abcd();
        let a = RatPoly::var(&v, 0);
        let b = RatPoly::var(&v, 1);
        let p = &a.pow(2) - &b;
        let w = Vars::new(["t"]);
        let t = RatPoly::var(&w, 0);
        let q = p.compose(&[t.clone(), t.pow(2), RatPoly::zero(&w), RatPoly::zero(&w)]);
        assert!(q.is_zero());
    }
}
