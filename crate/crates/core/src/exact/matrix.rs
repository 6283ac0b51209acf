use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveError {
    /// Rows (original indices) whose equations cannot be met by any solution.
    #[error("inconsistent system; offending rows {rows:?}")]
    Inconsistent { rows: Vec<usize> },
    #[error("rank {rank} is below the {cols} unknowns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn scalar(n: usize, c: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut prev = S::one();
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, rank);
            let piv = m[(rank, col)].clone();
            for r in rank + 1..m.rows {
                let f = m[(r, col)].clone();
                for c in col..m.cols {
                    let v = (piv.clone() * m[(r, c)].clone() - f.clone() * m[(rank, c)].clone())
                        / prev.clone();
                    m[(r, c)] = v;
                }
            }
            prev = piv;
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Solves `A x = b` exactly with fraction-free (Bareiss) elimination.
    ///
    /// Overdetermined systems are accepted when consistent; the solution is
    /// then unique. Rank deficiency and inconsistency are reported, never
    /// papered over.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>, SolveError> {
        if b.len() != self.rows {
            return Err(SolveError::Shape(format!("{} rows vs rhs of {}", self.rows, b.len())));
        }
        let n = self.cols;
        let w = n + 1;
        let mut m: Vec<S> = Vec::with_capacity(self.rows * w);
        for i in 0..self.rows {
            m.extend(self.row(i).iter().cloned());
            m.push(b[i].clone());
        }
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut prev = S::one();
        for k in 0..n {
            let Some(p) = (k..self.rows).find(|&r| !m[r * w + k].is_zero()) else {
                let rank = self.rank();
                return Err(SolveError::RankDeficient { rank, cols: n });
            };
            if p != k {
                for c in 0..w {
                    m.swap(p * w + c, k * w + c);
                }
                order.swap(p, k);
            }
            let piv = m[k * w + k].clone();
            for r in k + 1..self.rows {
                let f = m[r * w + k].clone();
                if f.is_zero() {
                    // Entries still need the common Bareiss scaling.
                    for c in k + 1..w {
                        let v = piv.clone() * m[r * w + c].clone() / prev.clone();
                        m[r * w + c] = v;
                    }
                    continue;
                }
                for c in k + 1..w {
                    let v = (piv.clone() * m[r * w + c].clone() - f.clone() * m[k * w + c].clone())
                        / prev.clone();
                    m[r * w + c] = v;
                }
                m[r * w + k] = S::zero();
            }
            prev = piv;
        }
        let bad: Vec<usize> =
            (n..self.rows).filter(|&r| !m[r * w + n].is_zero()).map(|r| order[r]).collect();
        if !bad.is_empty() {
            let mut rows = bad;
            rows.sort_unstable();
            return Err(SolveError::Inconsistent { rows });
        }
        let mut x = vec![S::zero(); n];
        for k in (0..n).rev() {
            let mut s = m[k * w + n].clone();
            for j in k + 1..n {
                if !m[k * w + j].is_zero() {
                    s = s - m[k * w + j].clone() * x[j].clone();
                }
            }
            x[k] = s / m[k * w + k].clone();
        }
        Ok(x)
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimensions");
        let mut out = Matrix::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix<BigInt> {
    /// Solves `A x = b` for an integer matrix and rational right-hand side.
    ///
    /// Same contract as [`Matrix::solve`], but elimination runs on integers
    /// (denominators of `b` cleared up front), which avoids a gcd per step.
    pub fn solve_rational(&self, b: &[BigRational]) -> Result<Vec<BigRational>, SolveError> {
        if b.len() != self.rows {
            return Err(SolveError::Shape(format!("{} rows vs rhs of {}", self.rows, b.len())));
        }
        let lcm = b.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let bi: Vec<BigInt> = b.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
        let n = self.cols;
        let w = n + 1;
        let mut m: Vec<BigInt> = Vec::with_capacity(self.rows * w);
        for i in 0..self.rows {
            m.extend(self.row(i).iter().cloned());
            m.push(bi[i].clone());
        }
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..self.rows).find(|&r| !m[r * w + k].is_zero()) else {
                let rank = self.rank();
                return Err(SolveError::RankDeficient { rank, cols: n });
            };
            if p != k {
                for c in 0..w {
                    m.swap(p * w + c, k * w + c);
                }
                order.swap(p, k);
            }
            let piv = m[k * w + k].clone();
            for r in k + 1..self.rows {
                let f = m[r * w + k].clone();
                for c in k + 1..w {
                    let v = if f.is_zero() {
                        &piv * &m[r * w + c]
                    } else {
                        &piv * &m[r * w + c] - &f * &m[k * w + c]
                    };
                    m[r * w + c] = v / &prev;
                }
                m[r * w + k] = BigInt::zero();
            }
            prev = piv;
        }
        let bad: Vec<usize> =
            (n..self.rows).filter(|&r| !m[r * w + n].is_zero()).map(|r| order[r]).collect();
        if !bad.is_empty() {
            let mut rows = bad;
            rows.sort_unstable();
            return Err(SolveError::Inconsistent { rows });
        }
        let mut x = vec![BigRational::zero(); n];
        let scale = BigRational::from_integer(lcm);
        for k in (0..n).rev() {
            let mut s = BigRational::from_integer(m[k * w + n].clone());
            for j in k + 1..n {
                if !m[k * w + j].is_zero() {
                    s -= BigRational::from_integer(m[k * w + j].clone()) * &x[j];
                }
            }
            x[k] = s / BigRational::from_integer(m[k * w + k].clone());
        }
        Ok(x.into_iter().map(|v| v / &scale).collect())
    }
}
