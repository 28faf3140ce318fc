//! Dense complex matrices and LU factorization with partial pivoting.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{one, zero, Cx, Real};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(rows: usize, columns: &[Vec<Cx<T>>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn from_diagonal(diag: &[Cx<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Top-left `rows x cols` block.
    pub fn top_left(&self, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(i, j)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(rhs.row(k)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(zero::<T>(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|&z| crate::scalar::is_finite(z))
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cx<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant stored as `exp(log_abs) * phase` with `|phase| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet<T: Real> {
    pub log_abs: T,
    pub phase: Cx<T>,
}

impl<T: Real> LogDet<T> {
    /// Re-exponentiated value; `None` if it over- or underflows.
    pub fn value(&self) -> Option<Cx<T>> {
        let m = self.log_abs.exp();
        (m.is_finite() && m > T::zero()).then(|| self.phase * m)
    }
}

/// `P A = L U` with unit lower `L`; pivot rows chosen by largest modulus,
/// ties going to the smallest row index.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    factors: CMatrix<T>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Real> Lu<T> {
    /// Factorizes `a`; a pivot of modulus `<= rel_tol * max|a|` counts as
    /// breakdown and is reported as `SingularMatrix`.
    pub fn with_tolerance(a: &CMatrix<T>, rel_tol: T) -> Result<Self> {
        Self::with_cutoff(a, a.max_abs() * rel_tol)
    }

    /// As [`Lu::with_tolerance`] with an absolute pivot cutoff.
    pub fn with_cutoff(a: &CMatrix<T>, cutoff: T) -> Result<Self> {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= cutoff || best == T::zero() || !best.is_finite() {
                return Err(Error::SingularMatrix { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self {
            factors: lu,
            perm,
            swaps,
        })
    }

    /// Factorization that only fails on an exactly zero pivot.
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        Self::with_tolerance(a, T::zero())
    }

    pub fn log_det(&self) -> LogDet<T> {
        let n = self.factors.rows();
        let mut log_abs = T::zero();
        let mut phase = if self.swaps.is_multiple_of(2) { one() } else { -one::<T>() };
        for k in 0..n {
            let d = self.factors[(k, k)];
            let m = d.norm();
            log_abs += m.ln();
            phase *= d / m;
            phase = phase / phase.norm();
        }
        LogDet { log_abs, phase }
    }

    pub fn solve(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.factors.rows();
        let mut x: Vec<Cx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.factors[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.factors[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.factors[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> CMatrix<T> {
        let n = self.factors.rows();
        let cols: Vec<Vec<Cx<T>>> = (0..n)
            .map(|j| {
                let mut e = vec![zero::<T>(); n];
                e[j] = one();
                self.solve(&e)
            })
            .collect();
        CMatrix::from_columns(n, &cols)
    }
}

/// Log-determinant via LU with partial pivoting.
pub fn log_det<T: Real>(a: &CMatrix<T>) -> Result<LogDet<T>> {
    Ok(Lu::new(a)?.log_det())
}

/// Determinant, re-exponentiated from the log form.
pub fn det<T: Real>(a: &CMatrix<T>) -> Result<Cx<T>> {
    let ld = log_det(a)?;
    ld.value().ok_or_else(|| {
        Error::InvalidArgument(format!(
            "determinant not representable (log|det| = {})",
            ld.log_abs
        ))
    })
}

pub fn inverse<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    Ok(Lu::new(a)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    #[test]
    fn determinant_examples() {
        assert!((det(&CMatrix::<f64>::identity(5)).unwrap() - re(1.0)).norm() < 1e-15);
        let d = CMatrix::from_diagonal(&[re(2.0), re(3.0)]);
        assert!((det(&d).unwrap() - re(6.0)).norm() < 1e-14);
        let swap = CMatrix::from_fn(2, 2, |i, j| if i != j { re(1.0) } else { re(0.0) });
        assert!((det(&swap).unwrap() - re(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_detected() {
        let m = CMatrix::from_fn(3, 3, |i, _| re(i as f64));
        assert!(matches!(log_det(&m), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn log_form_survives_overflow() {
        let big = CMatrix::from_diagonal(&[re(1e200); 4]);
        let ld = log_det(&big).unwrap();
        assert!((ld.log_abs - 800.0 * 10f64.ln()).abs() < 1e-9);
        assert!(ld.value().is_none());
    }

    #[test]
    fn inverse_and_solve() {
        let a = CMatrix::from_fn(4, 4, |i, j| cx((i * 3 + j) as f64 * 0.1, if i == j { 2.0 } else { 0.3 }));
        let inv = inverse(&a).unwrap();
        let err = a.matmul(&inv).sub(&CMatrix::identity(4)).max_abs();
        assert!(err < 1e-14, "{err}");
        let b = vec![re(1.0), cx(0.0, 1.0), re(-2.0), re(0.5)];
        let x = Lu::new(&a).unwrap().solve(&b);
        let r: f64 = a.matvec(&x).iter().zip(&b).map(|(u, v)| (u - v).norm()).sum();
        assert!(r < 1e-14);
    }

    #[test]
    fn complex_determinant_matches_expansion() {
        let a = CMatrix::from_fn(3, 3, |i, j| cx(((i + 2 * j) as f64).sin() - 1.5, (i * i * j) as f64 * 0.5 - 0.25));
        let m = |i: usize, j: usize| a[(i, j)];
        let cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        assert!((det(&a).unwrap() - cof).norm() < 1e-12);
    }
}
