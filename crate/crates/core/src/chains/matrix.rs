//! Dense square matrices over either backend, indexed `(x, y)` = (row, column).

use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Column-major dense matrix. Columns of a transition matrix are the
/// starting states `y`, rows the targets `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> TransitionMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        TransitionMatrix { dim, data: vec![S::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for y in 0..dim {
            for x in 0..dim {
                data.push(f(x, y));
            }
        }
        TransitionMatrix { dim, data }
    }

    pub fn try_from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Result<S>) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * dim);
        for y in 0..dim {
            for x in 0..dim {
                data.push(f(x, y)?);
            }
        }
        Ok(TransitionMatrix { dim, data })
    }

    /// Columns given as `cols[y][x]`.
    pub fn from_columns(cols: Vec<Vec<S>>) -> Result<Self> {
        let dim = cols.len();
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::Domain("matrix columns must form a square".into()));
        }
        Ok(TransitionMatrix { dim, data: cols.into_iter().flatten().collect() })
    }

    /// Rows given as `rows[x][y]`.
    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Domain("matrix rows must form a square".into()));
        }
        Ok(Self::from_fn(dim, |x, y| rows[x][y].clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, x: usize, y: usize) -> &S {
        &self.data[y * self.dim + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: S) {
        self.data[y * self.dim + x] = v;
    }

    pub fn column(&self, y: usize) -> &[S] {
        &self.data[y * self.dim..(y + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.dim).map(|x| (0..self.dim).map(|y| self.get(x, y).clone()).collect()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TransitionMatrix<T> {
        TransitionMatrix { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> TransitionMatrix<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn column_sums(&self) -> Vec<S> {
        (0..self.dim)
            .map(|y| self.column(y).iter().cloned().fold(S::zero(), |a, b| a + b))
            .collect()
    }

    pub fn trace(&self) -> S {
        (0..self.dim).fold(S::zero(), |a, i| a + self.get(i, i).clone())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| *v >= S::zero())
    }

    /// Columns sum to one (exactly, or within `tol` for floats).
    pub fn is_stochastic(&self, tol: f64) -> bool {
        self.is_nonnegative() && self.column_sums().iter().all(|s| s.close(&S::one(), tol))
    }

    /// K(x,y) π(y) = K(y,x) π(x) for all pairs.
    pub fn balance_violation(&self, pi: &[S], tol: f64) -> Option<(usize, usize)> {
        for y in 0..self.dim {
            for x in 0..y {
                let l = self.get(x, y).clone() * pi[y].clone();
                let r = self.get(y, x).clone() * pi[x].clone();
                let scale = l.abs().to_f64().max(r.abs().to_f64()).max(1e-300);
                if !(S::EXACT && l == r || !S::EXACT && (l.to_f64() - r.to_f64()).abs() <= tol * scale) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        Self::from_fn(n, |x, y| {
            (0..n).fold(S::zero(), |acc, k| acc + self.get(x, k).clone() * other.get(k, y).clone())
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |x, y| self.get(x, y).clone() - other.get(x, y).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |x, y| self.get(x, y).clone() + other.get(x, y).clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |x, y| self.get(y, x).clone())
    }

    /// K(N-x, N-y).
    pub fn reversed(&self) -> Self {
        let n = self.dim - 1;
        Self::from_fn(self.dim, |x, y| self.get(n - x, n - y).clone())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        (0..self.dim)
            .map(|x| (0..self.dim).fold(S::zero(), |acc, y| acc + self.get(x, y).clone() * v[y].clone()))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Determinant by Gaussian elimination (exact for rationals).
    pub fn det(&self) -> S {
        let n = self.dim;
        let mut a = self.rows();
        let mut det = S::one();
        for col in 0..n {
            let pivot = if S::EXACT {
                (col..n).find(|&r| !a[r][col].is_zero())
            } else {
                (col..n)
                    .max_by(|&i, &j| {
                        a[i][col].to_f64().abs().partial_cmp(&a[j][col].to_f64().abs()).unwrap()
                    })
                    .filter(|&r| !a[r][col].is_zero())
            };
            let Some(p) = pivot else { return S::zero() };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pv = a[col][col].clone();
            det = det * pv.clone();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone() / pv.clone();
                for c in col..n {
                    let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                    a[r][c] = v;
                }
            }
        }
        det
    }

    /// Zero outside the band |x - y| <= width.
    pub fn is_banded(&self, width: usize) -> bool {
        (0..self.dim).all(|y| (0..self.dim).all(|x| x.abs_diff(y) <= width || self.get(x, y).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Rational};

    #[test]
    fn determinant() {
        let m: TransitionMatrix<Rational> =
            TransitionMatrix::from_rows(&[vec![rat(0, 1), rat(2, 1)], vec![rat(3, 1), rat(4, 1)]]).unwrap();
        assert_eq!(m.det(), rat(-6, 1));
        let f = m.to_f64();
        assert!((f.det() + 6.0).abs() < 1e-12);
    }

    #[test]
    fn indexing_is_row_x_column_y() {
        let m = TransitionMatrix::from_fn(2, |x, y| (10 * x + y) as f64);
        assert_eq!(*m.get(1, 0), 10.0);
        assert_eq!(m.column(0), &[0.0, 10.0]);
    }
}
