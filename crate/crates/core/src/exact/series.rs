//! Truncated power series in one expansion variable `t` whose coefficients
//! are polynomials, described as a small expression tree.

use thiserror::Error;

use super::{MultiPoly, Scalar, Vars};

/// A closed-form description of a power series in `t`.
#[derive(Clone, Debug)]
pub enum SeriesExpr<S> {
    /// A polynomial constant in `t`.
    Poly(MultiPoly<S>),
    /// The expansion variable itself.
    T,
    Add(Box<SeriesExpr<S>>, Box<SeriesExpr<S>>),
    Sub(Box<SeriesExpr<S>>, Box<SeriesExpr<S>>),
    Mul(Box<SeriesExpr<S>>, Box<SeriesExpr<S>>),
    Exp(Box<SeriesExpr<S>>),
    Sinh(Box<SeriesExpr<S>>),
    /// Multiplicative inverse; the argument needs a nonzero scalar constant term.
    Recip(Box<SeriesExpr<S>>),
    /// Division by `t`; the argument needs a vanishing constant term.
    DivT(Box<SeriesExpr<S>>),
    /// Derivative in `t`.
    Deriv(Box<SeriesExpr<S>>),
}

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("exp/sinh argument has a nonzero constant term")]
    NonzeroConstantInExp,
    #[error("division by t of a series with nonzero constant term")]
    NotDivisibleByT,
    #[error("reciprocal of a series whose constant term is not an invertible scalar")]
    NotInvertible,
}

impl<S: Scalar> SeriesExpr<S> {
    pub fn poly(p: MultiPoly<S>) -> Self {
        SeriesExpr::Poly(p)
    }
    pub fn constant(vars: &Vars, c: S) -> Self {
        SeriesExpr::Poly(MultiPoly::constant(vars, c))
    }
    pub fn add(self, o: Self) -> Self {
        SeriesExpr::Add(Box::new(self), Box::new(o))
    }
    pub fn sub(self, o: Self) -> Self {
        SeriesExpr::Sub(Box::new(self), Box::new(o))
    }
    pub fn mul(self, o: Self) -> Self {
        SeriesExpr::Mul(Box::new(self), Box::new(o))
    }
    pub fn exp(self) -> Self {
        SeriesExpr::Exp(Box::new(self))
    }
    pub fn sinh(self) -> Self {
        SeriesExpr::Sinh(Box::new(self))
    }
    pub fn recip(self) -> Self {
        SeriesExpr::Recip(Box::new(self))
    }
    pub fn div_t(self) -> Self {
        SeriesExpr::DivT(Box::new(self))
    }
    pub fn deriv(self) -> Self {
        SeriesExpr::Deriv(Box::new(self))
    }
}

/// A validated series description over a fixed coefficient universe.
#[derive(Clone, Debug)]
pub struct SeriesSpec<S> {
    vars: Vars,
    expr: SeriesExpr<S>,
}

impl<S: Scalar> SeriesSpec<S> {
    /// Validates every node; unsupported compositions are rejected here rather
    /// than at coefficient extraction.
    pub fn new(vars: &Vars, expr: SeriesExpr<S>) -> Result<Self, SeriesError> {
        let spec = SeriesSpec { vars: vars.clone(), expr };
        spec.validate(&spec.expr)?;
        Ok(spec)
    }

    fn validate(&self, e: &SeriesExpr<S>) -> Result<(), SeriesError> {
        use SeriesExpr::*;
        match e {
            Poly(_) | T => Ok(()),
            Add(a, b) | Sub(a, b) | Mul(a, b) => {
                self.validate(a)?;
                self.validate(b)
            }
            Exp(a) | Sinh(a) => {
                self.validate(a)?;
                if !self.expand(a, 0)?[0].is_zero() {
                    return Err(SeriesError::NonzeroConstantInExp);
                }
                Ok(())
            }
            DivT(a) => {
                self.validate(a)?;
                if !self.expand(a, 0)?[0].is_zero() {
                    return Err(SeriesError::NotDivisibleByT);
                }
                Ok(())
            }
            Recip(a) => {
                self.validate(a)?;
                let c0 = &self.expand(a, 0)?[0];
                if c0.is_zero() || !c0.is_constant() {
                    return Err(SeriesError::NotInvertible);
                }
                Ok(())
            }
            Deriv(a) => self.validate(a),
        }
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: usize) -> MultiPoly<S> {
        self.expand(&self.expr, k).expect("validated at construction").swap_remove(k)
    }

    /// Coefficients of `t^0..=t^order`.
    pub fn coeffs(&self, order: usize) -> Vec<MultiPoly<S>> {
        self.expand(&self.expr, order).expect("validated at construction")
    }

    fn expand(&self, e: &SeriesExpr<S>, order: usize) -> Result<Vec<MultiPoly<S>>, SeriesError> {
        use SeriesExpr::*;
        let zero = MultiPoly::zero(&self.vars);
        let n = order + 1;
        Ok(match e {
            Poly(p) => {
                let mut v = vec![zero; n];
                v[0] = p.clone();
                v
            }
            T => {
                let mut v = vec![zero; n];
                if n > 1 {
                    v[1] = MultiPoly::one(&self.vars);
                }
                v
            }
            Add(a, b) => {
                let (a, b) = (self.expand(a, order)?, self.expand(b, order)?);
                a.iter().zip(&b).map(|(x, y)| x + y).collect()
            }
            Sub(a, b) => {
                let (a, b) = (self.expand(a, order)?, self.expand(b, order)?);
                a.iter().zip(&b).map(|(x, y)| x - y).collect()
            }
            Mul(a, b) => mul_trunc(&self.expand(a, order)?, &self.expand(b, order)?, &self.vars),
            Exp(a) => exp_trunc(&self.expand(a, order)?, &self.vars)?,
            Sinh(a) => {
                let f = self.expand(a, order)?;
                let neg: Vec<_> = f.iter().map(|x| -x).collect();
                let (ep, em) = (exp_trunc(&f, &self.vars)?, exp_trunc(&neg, &self.vars)?);
                let half = S::one() / S::from_int(2);
                ep.iter().zip(&em).map(|(x, y)| (x - y).scale(&half)).collect()
            }
            Recip(a) => {
                let g = self.expand(a, order)?;
                if g[0].is_zero() || !g[0].is_constant() {
                    return Err(SeriesError::NotInvertible);
                }
                let inv0 = S::one() / g[0].constant_term();
                let mut h: Vec<MultiPoly<S>> = Vec::with_capacity(n);
                h.push(MultiPoly::constant(&self.vars, inv0.clone()));
                for m in 1..n {
                    let mut s = zero.clone();
                    for k in 1..=m {
                        s = &s + &(&g[k] * &h[m - k]);
                    }
                    h.push(s.scale(&-inv0.clone()));
                }
                h
            }
            DivT(a) => {
                let f = self.expand(a, order + 1)?;
                if !f[0].is_zero() {
                    return Err(SeriesError::NotDivisibleByT);
                }
                f[1..].to_vec()
            }
            Deriv(a) => {
                let f = self.expand(a, order + 1)?;
                (0..n).map(|k| f[k + 1].scale(&S::from_int(k as i64 + 1))).collect()
            }
        })
    }
}

fn mul_trunc<S: Scalar>(a: &[MultiPoly<S>], b: &[MultiPoly<S>], vars: &Vars) -> Vec<MultiPoly<S>> {
    let n = a.len();
    (0..n)
        .map(|m| {
            let mut s = MultiPoly::zero(vars);
            for k in 0..=m {
                if !a[k].is_zero() && !b[m - k].is_zero() {
                    s = &s + &(&a[k] * &b[m - k]);
                }
            }
            s
        })
        .collect()
}

/// `exp(f)` for `f(0) = 0`, via `m e_m = Σ k f_k e_{m−k}`.
fn exp_trunc<S: Scalar>(f: &[MultiPoly<S>], vars: &Vars) -> Result<Vec<MultiPoly<S>>, SeriesError> {
    if !f[0].is_zero() {
        return Err(SeriesError::NonzeroConstantInExp);
    }
    let mut e = vec![MultiPoly::one(vars)];
    for m in 1..f.len() {
        let mut s = MultiPoly::zero(vars);
        for k in 1..=m {
            if !f[k].is_zero() {
                s = &s + &(&f[k] * &e[m - k]).scale(&S::from_int(k as i64));
            }
        }
        e.push(s.scale(&(S::one() / S::from_int(m as i64))));
    }
    Ok(e)
}
