//! One step of the recursion: commute the level-`k` densities with the two
//! parts of `G_1`, then invert `z∂_z` by symmetric polynomial interpolation.
//!
//! Commutators of normal-ordered products are expanded by Wick's theorem with
//! `[ω_a, ω_b] = −a δ_{a+b,0} ħ`. Each surviving contraction scheme is a
//! channel mapping an input shape to an output shape:
//!
//! * single contraction with the cubic term: `(n, h) → (n+1, h)`;
//! * double contraction with the cubic term: `(n, h) → (n−1, h+1)`; this is the
//!   only scheme whose value depends on the sign chamber of the modes;
//! * single contraction with the quadratic term of the first-order part:
//!   `(n, h) → (n, h)`.
//!
//! Triple contractions with the cubic and double contractions with the
//! quadratic vanish identically, and the `ω_0` and constant terms are central.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sympoly::{eval_monomial_symmetric, even_basis};
use super::{GTable, HierarchyError, SymPoly};
use crate::exact::{Matrix, SolveError};
use crate::{rat, rint, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

const HELD_OUT: usize = 5;
const RETRIES: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    CubicSingle,
    CubicDouble,
    QuadraticSingle,
}

impl Channel {
    /// Number of input modes feeding an output shape with `m` modes.
    pub fn input_modes(self, m: u32) -> Option<u32> {
        match self {
            Channel::CubicSingle => m.checked_sub(1).filter(|&n| n >= 1),
            Channel::CubicDouble => Some(m + 1),
            Channel::QuadraticSingle => Some(m),
        }
    }

    /// `(1/ħ)` times the symmetrized coefficient of `[input, G_1-part]` at the
    /// output mode tuple `o`.
    pub fn value(self, input: &SymPoly, o: &[i64]) -> Rational {
        let m = o.len();
        let n = input.nvars() as i64;
        match self {
            Channel::CubicSingle => {
                assert_eq!(input.nvars() + 1, m);
                if m < 2 {
                    return Rational::zero();
                }
                let mut s = Rational::zero();
                let mut arg = Vec::with_capacity(m - 1);
                for p in 0..m {
                    for q in p + 1..m {
                        arg.clear();
                        arg.extend(o.iter().enumerate().filter(|&(i, _)| i != p && i != q).map(|(_, &x)| x));
                        let sum = o[p] + o[q];
                        if sum == 0 {
                            continue;
                        }
                        arg.push(sum);
                        s += input.eval(&arg) * rint(sum);
                    }
                }
                let pairs = (m * (m - 1) / 2) as i64;
                s * rat(-n, 2 * pairs)
            }
            Channel::CubicDouble => {
                assert_eq!(input.nvars(), m + 1);
                let mut s = Rational::zero();
                let mut arg = Vec::with_capacity(m + 1);
                for pos in 0..m {
                    let t = -o[pos];
                    // y1 + y2 = t with both of the sign of t.
                    let (range, sign) = match t.signum() {
                        1 => (1..t, 1),
                        -1 => (t + 1..0, -1),
                        _ => continue,
                    };
                    for y1 in range {
                        let y2 = t - y1;
                        arg.clear();
                        arg.extend(o.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &x)| x));
                        arg.push(-y1);
                        arg.push(-y2);
                        s += input.eval(&arg) * rint(sign * y1 * y2);
                    }
                }
                s * rat(n * (n - 1), 2 * m as i64)
            }
            Channel::QuadraticSingle => {
                assert_eq!(input.nvars(), m);
                let p3: i64 = o.iter().map(|x| x * x * x).sum();
                input.eval(o) * rint(-2 * p3)
            }
        }
    }
}

/// Output shape `(n, h)` at level `k+1`, order `j`: the right-hand side of the
/// recursion at `o`, before dividing by `−(k+2+j)Σo`.
fn rhs(prev: &[GTable], j: u32, n: u32, h: u32, o: &[i64]) -> Rational {
    let mut s = Rational::zero();
    let cur = &prev[j as usize];
    if let Some(p) = cur.shape(n - 1, h).filter(|_| n >= 2) {
        s += Channel::CubicSingle.value(p, o);
    }
    if h >= 1 {
        if let Some(p) = cur.shape(n + 1, h - 1) {
            s += Channel::CubicDouble.value(p, o);
        }
    }
    if j >= 1 {
        if let Some(p) = prev[j as usize - 1].shape(n, h) {
            s += Channel::QuadraticSingle.value(p, o);
        }
    }
    s
}

fn seed(k: i64, j: u32, n: u32, h: u32, attempt: u64) -> u64 {
    let mut x = 0x9e37_79b9_7f4a_7c15u64;
    for v in [k as u64, j as u64, n as u64, h as u64, attempt] {
        x = (x ^ v).wrapping_mul(0x100_0000_01b3).rotate_left(17);
    }
    x
}

/// Sorted tuples of distinct integers with nonzero sum, pairwise distinct up
/// to a global sign (the fitted polynomials are even).
fn nodes(count: usize, n: usize, deg: u32, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    // Smallest window with plenty of candidate tuples.
    // Complements of n-subsets must not be smaller than n, and every variable
    // needs more values than the degree.
    let mut r = n as i64 + deg as i64 / 2 + 1;
    while binomial(2 * r as u64 + 1, n as u64) < 8 * count as u64 + 16 {
        r += 1;
    }
    let pool: Vec<i64> = (-r..=r).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut t: Vec<i64> = pool.choose_multiple(rng, n).copied().collect();
        t.sort_unstable();
        let mut neg: Vec<i64> = t.iter().map(|x| -x).collect();
        neg.sort_unstable();
        if t.iter().sum::<i64>() != 0 && !seen.contains(&neg) && seen.insert(t.clone()) {
            out.push(t);
        }
        if seen.len() > 100 * count + 1000 {
            break;
        }
    }
    out
}

fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    (0..b).fold(1u64, |acc, i| (acc.saturating_mul(a - i)) / (i + 1))
}

fn fit_shape(prev: &[GTable], k_in: i64, j: u32, n: u32, h: u32) -> Result<SymPoly, HierarchyError> {
    let k_out = k_in + 1;
    let basis = even_basis(n as usize, 2 * (h + j));
    let dim = basis.len();
    let scale = rint(-(k_in + 2 + j as i64));
    let value = |o: &[i64]| {
        let sum: i64 = o.iter().sum();
        rhs(prev, j, n, h, o) / (scale.clone() * rint(sum))
    };
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed(k_out, j, n, h, attempt));
        let pts = nodes(dim + HELD_OUT, n as usize, 2 * (h + j), &mut rng);
        if pts.len() < dim + HELD_OUT {
            continue;
        }
        let (fit, held) = pts.split_at(dim);
        let a = Matrix::<BigInt>::from_fn(dim, dim, |r, c| eval_monomial_symmetric(&basis[c], &fit[r]));
        let b: Vec<Rational> = fit.iter().map(|o| value(o)).collect();
        let x = match a.solve_rational(&b) {
            Ok(x) => x,
            Err(SolveError::RankDeficient { .. }) => continue,
            Err(e) => {
                return Err(HierarchyError::Inconsistent { k: k_out, j, n, h, detail: e.to_string() })
            }
        };
        let p = SymPoly::from_coeffs(n as usize, basis.iter().cloned().zip(x));
        for o in held {
            if p.eval(o) != value(o) {
                return Err(HierarchyError::HeldOut { k: k_out, j, n, h, node: o.clone() });
            }
        }
        return Ok(p);
    }
    Err(HierarchyError::NoNodes { k: k_out, j, n, h })
}

/// Level `k_in + 1` from level `k_in`, for orders `0..=j_max`. With
/// `only_n = Some(m)` only shapes with `m` modes are produced. Constants are
/// left unset.
pub fn step_level(
    prev: &[GTable],
    k_in: i64,
    j_max: u32,
    only_n: Option<u32>,
) -> Result<Vec<GTable>, HierarchyError> {
    let k_out = k_in + 1;
    let jobs: Vec<(u32, u32, u32)> = (0..=j_max)
        .flat_map(|j| {
            GTable::admissible_shapes(k_out, j)
                .into_iter()
                .filter(|&(n, _)| only_n.is_none_or(|m| m == n))
                .map(move |(n, h)| (j, n, h))
        })
        .collect();
    let fitted: Vec<Result<((u32, u32, u32), SymPoly), HierarchyError>> = jobs
        .par_iter()
        .map(|&(j, n, h)| fit_shape(prev, k_in, j, n, h).map(|p| ((j, n, h), p)))
        .collect();
    let mut out: Vec<GTable> = (0..=j_max)
        .map(|j| GTable { k: k_out, j, shapes: Default::default(), constant: None })
        .collect();
    for r in fitted {
        let ((j, n, h), p) = r?;
        if !p.is_zero() {
            out[j as usize].shapes.insert((n, h), p);
        }
    }
    Ok(out)
}
