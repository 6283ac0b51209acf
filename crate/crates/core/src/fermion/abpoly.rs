//! The polynomial coefficients of the first-order fermionic Hamiltonians.
//!
//! `A_k(a,b,c,d)` and `B_k(a,b)` are produced by their defining recursions,
//! dividing each right-hand side exactly by the linear factor in front.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::exact::{SeriesExpr, SeriesSpec, Vars};
use crate::shifted::{beta, factorial};
use crate::{rat, rint, RatPoly, Rational};

#[derive(Clone, Debug)]
pub struct ABPolyData {
    pub k: i64,
    /// In variables `(a, b, c, d)`.
    pub a: RatPoly,
    /// In variables `(a, b)`.
    pub b: RatPoly,
    pub p: RatPoly,
    pub r: RatPoly,
    pub t: RatPoly,
    pub gamma: Rational,
}

impl ABPolyData {
    /// `A_k(a, b, c, a + c − b)` as a polynomial in `(a, b, c)`.
    pub fn a_balanced(&self) -> RatPoly {
        let v = vars3();
        let (a, b, c) = (RatPoly::var(&v, 0), RatPoly::var(&v, 1), RatPoly::var(&v, 2));
        let d = &(&a + &c) - &b;
        self.a.compose(&[a, b, c, d])
    }

    /// `B_k(a, a)` as a polynomial in `a`.
    pub fn b_diagonal(&self) -> RatPoly {
        let v = Vars::new(["a"]);
        let a = RatPoly::var(&v, 0);
        self.b.compose(&[a.clone(), a])
    }
}

fn vars4() -> Vars {
    static V: OnceLock<Vars> = OnceLock::new();
    V.get_or_init(|| Vars::new(["a", "b", "c", "d"])).clone()
}

fn vars2() -> Vars {
    static V: OnceLock<Vars> = OnceLock::new();
    V.get_or_init(|| Vars::new(["a", "b"])).clone()
}

fn vars3() -> Vars {
    static V: OnceLock<Vars> = OnceLock::new();
    V.get_or_init(|| Vars::new(["a", "b", "c"])).clone()
}

fn inv_factorial(n: u64) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

fn p_poly(k: u32) -> RatPoly {
    let v = vars4();
    let lin = |s: [i64; 4]| RatPoly::linear(&v, &s.map(rint), rint(0));
    let ab = lin([1, -1, 0, 0]);
    let cd = lin([0, 0, 1, -1]);
    let t1 = &lin([-1, 1, 1, 1]).pow(k) - &lin([1, -1, 1, 1]).pow(k);
    let t2 = &lin([1, 1, -1, 1]).pow(k) - &lin([1, 1, 1, -1]).pow(k);
    let s = &(&ab.pow(2) * &t1) + &(&cd.pow(2) * &t2);
    s.scale(&(inv_factorial(k as u64) / Rational::from_integer(BigInt::from(2).pow(k))))
}

/// Coefficients `R_0..=R_order` of the generating series in `ζ`.
fn r_series(order: usize) -> Vec<RatPoly> {
    let v = vars2();
    let a = RatPoly::var(&v, 0);
    let b = RatPoly::var(&v, 1);
    let x = &a - &b;
    let cst = |q: Rational| SeriesExpr::constant(&v, q);
    let xt = SeriesExpr::poly(x.clone()).mul(SeriesExpr::T);
    // (1 − e^{−xζ})/sinh(ζ/2) = [(1 − e^{−xζ})/ζ]·[ζ/sinh(ζ/2)]
    let num = cst(rint(1)).sub(SeriesExpr::poly(-&x).mul(SeriesExpr::T).exp()).div_t();
    let den = cst(rat(1, 2)).mul(SeriesExpr::T).sinh().div_t().recip();
    let f = num.mul(den);
    let inner = SeriesExpr::poly(&b * &b)
        .mul(f.clone())
        .sub(SeriesExpr::poly(b.scale(&rint(2))).mul(f.clone().deriv()))
        .add(f.clone().deriv().deriv())
        .sub(SeriesExpr::poly(&x * &x).mul(f));
    let e = cst(rat(1, 2)).mul(xt).exp().mul(inner);
    SeriesSpec::new(&v, e).expect("well-formed series").coeffs(order)
}

fn t_poly(k: u32) -> RatPoly {
    let v = vars2();
    let a = RatPoly::var(&v, 0);
    let b = RatPoly::var(&v, 1);
    let quarter = RatPoly::constant(&v, rat(1, 4));
    let cub = |y: &RatPoly| y * &(&(y * y) - &quarter);
    let half_sum = (&a + &b).scale(&rat(1, 2)).pow(k);
    (&(&cub(&b) - &cub(&a)) * &half_sum).scale(&(rat(2, 3) * inv_factorial(k as u64)))
}

/// `γ_k = 2 β_2 β_{k+1} + k(k+3) β_{k+3}`.
pub fn gamma(k: i64) -> Rational {
    assert!(k >= -1);
    let b = |i: i64| beta(i as usize);
    rint(2) * b(2) * b(k + 1) + rint(k * (k + 3)) * b(k + 3)
}

static TABLE: OnceLock<RwLock<Vec<Arc<ABPolyData>>>> = OnceLock::new();

/// The data at level `k ≥ −1`, memoized. Panics if a recursion division is
/// not exact, which would mean the engine is inconsistent.
pub fn ab_polynomials(k: i64) -> Arc<ABPolyData> {
    assert!(k >= -1, "level below -1");
    let idx = (k + 1) as usize;
    let table = TABLE.get_or_init(|| RwLock::new(Vec::new()));
    if let Some(d) = table.read().unwrap().get(idx) {
        return d.clone();
    }
    let mut w = table.write().unwrap();
    if w.is_empty() {
        w.push(Arc::new(ABPolyData {
            k: -1,
            a: RatPoly::zero(&vars4()),
            b: RatPoly::zero(&vars2()),
            p: RatPoly::zero(&vars4()),
            r: RatPoly::zero(&vars2()),
            t: RatPoly::zero(&vars2()),
            gamma: gamma(-1),
        }));
    }
    if w.len() <= idx {
        let r = r_series(idx);
        while w.len() <= idx {
            let kk = (w.len() - 1) as u32;
            let prev = w.last().unwrap().clone();
            w.push(Arc::new(step(kk, &prev, r[kk as usize].clone())));
        }
    }
    w[idx].clone()
}

fn step(k: u32, prev: &ABPolyData, r: RatPoly) -> ABPolyData {
    let v4 = vars4();
    let v2 = vars2();
    let kf = rint(k as i64 + 2);

    let p = p_poly(k);
    let mut quad4 = RatPoly::zero(&v4);
    for (i, s) in [1, -1, 1, -1].into_iter().enumerate() {
        let mut e = vec![0; 4];
        e[i] = 2;
        quad4.add_term(e, rat(s, 2));
    }
    let rhs_a = &(&quad4 * &prev.a) - &p;
    // a − b + c − d = a − (b − c + d)
    let shift_a = RatPoly::linear(&v4, &[rint(0), rint(1), rint(-1), rint(1)], rint(0));
    let a = rhs_a
        .exact_div_linear(0, &shift_a)
        .unwrap_or_else(|| panic!("A recursion division not exact at k={k}"))
        .scale(&(rint(1) / kf.clone()));

    let t = t_poly(k);
    let mut quad2 = RatPoly::monomial(&v2, vec![2, 0], rat(1, 2));
    quad2.add_term(vec![0, 2], rat(-1, 2));
    let rhs_b = &(&(&quad2 * &prev.b) - &r) - &t;
    let b = rhs_b
        .exact_div_linear(0, &RatPoly::var(&v2, 1))
        .unwrap_or_else(|| panic!("B recursion division not exact at k={k}"))
        .scale(&(rint(1) / kf));

    ABPolyData { k: k as i64, a, b, p, r, t, gamma: gamma(k as i64) }
}
