//! Finite sections of Toeplitz operators: dense blocks for inspection and a
//! matrix-free buffered operator for the determinant pipelines.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{zero, Cx, Real};
use crate::symbolic::{Polynomial, RationalSymbol};

use super::fourier::{fourier_coeffs, FourierWindow};

/// Where a dense operator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ToeplitzOfSymbol,
    Composed,
    Compressed,
}

/// Dense `dim x dim` section of an operator on `H^2` in the basis `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator<T: Real> {
    pub entries: CMatrix<T>,
    pub provenance: Provenance,
}

impl<T: Real> TruncatedOperator<T> {
    pub fn new(entries: CMatrix<T>, provenance: Provenance) -> Self {
        assert!(entries.is_square(), "operators are square");
        Self { entries, provenance }
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    /// Product `self * rhs` at the common dimension.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self::new(self.entries.matmul(&rhs.entries), Provenance::Composed)
    }

    /// Leading `m x m` block.
    pub fn compress(&self, m: usize) -> Self {
        Self::new(self.entries.top_left(m, m), Provenance::Compressed)
    }
}

/// `entries[j][k] = c_{j-k}` for `0 <= j, k < m`.
pub fn toeplitz_block<T: Real>(w: &FourierWindow<T>, m: usize) -> Result<TruncatedOperator<T>> {
    if m > w.half_width() {
        return Err(Error::BufferTooSmall {
            msg: format!("block size {m} exceeds Fourier window {}", w.half_width()),
        });
    }
    let entries = CMatrix::from_fn(m, m, |j, k| w.coeff(j as i64 - k as i64));
    Ok(TruncatedOperator::new(entries, Provenance::ToeplitzOfSymbol))
}

/// `P(phi f)`: multiply by the symbol, keep nonnegative powers. The result is
/// exact through degree `N` of the window and truncated there.
pub fn toeplitz_apply<T: Real>(w: &FourierWindow<T>, f: &Polynomial<T>) -> Result<Polynomial<T>> {
    let n = w.half_width();
    let Some(deg) = f.degree() else {
        return Ok(Polynomial::zero());
    };
    if deg > n {
        return Err(Error::BufferTooSmall {
            msg: format!("polynomial degree {deg} exceeds Fourier window {n}"),
        });
    }
    let out = (0..=n)
        .map(|j| {
            f.coeffs()
                .iter()
                .enumerate()
                .fold(zero::<T>(), |acc, (k, &c)| acc + w.coeff(j as i64 - k as i64) * c)
        })
        .collect();
    Ok(Polynomial::new(out))
}

/// Matrix-free `dim x dim` Toeplitz section applied by FFT convolution.
///
/// `apply` computes exactly what multiplying by the dense block would, up to
/// FFT rounding, in `O(dim log dim)`.
#[derive(Clone)]
pub struct ToeplitzOp<T: Real> {
    dim: usize,
    len: usize,
    kernel: Vec<Cx<T>>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    window: Arc<FourierWindow<T>>,
}

impl<T: Real> std::fmt::Debug for ToeplitzOp<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToeplitzOp")
            .field("dim", &self.dim)
            .field("fft_len", &self.len)
            .finish()
    }
}

impl<T: Real> ToeplitzOp<T> {
    /// Section of `T_phi` at dimension `dim`.
    pub fn of_symbol(phi: &RationalSymbol<T>, dim: usize) -> Result<Self> {
        let w = fourier_coeffs(phi, dim)?;
        Self::from_window(Arc::new(w), dim)
    }

    pub fn from_window(window: Arc<FourierWindow<T>>, dim: usize) -> Result<Self> {
        if dim == 0 || dim > window.half_width() {
            return Err(Error::BufferTooSmall {
                msg: format!("operator dimension {dim} vs Fourier window {}", window.half_width()),
            });
        }
        // circular length 2*dim keeps lags -(dim-1)..=(dim-1) distinct
        let len = 2 * dim;
        let mut planner = FftPlanner::<T>::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut kernel = vec![zero::<T>(); len];
        let d = dim as i64;
        for lag in -(d - 1)..=(d - 1) {
            kernel[lag.rem_euclid(len as i64) as usize] = window.coeff(lag);
        }
        forward.process(&mut kernel);
        let norm = T::one() / T::from_count(len);
        for k in kernel.iter_mut() {
            *k *= norm;
        }
        Ok(Self {
            dim,
            len,
            kernel,
            forward,
            inverse,
            window,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> &FourierWindow<T> {
        &self.window
    }

    /// `y = T x` for a vector of length `dim`.
    pub fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(x.len(), self.dim, "vector length must match operator dimension");
        if x.iter().all(|c| c.re == T::zero() && c.im == T::zero()) {
            return vec![zero(); self.dim];
        }
        let mut buf = vec![zero::<T>(); self.len];
        buf[..self.dim].copy_from_slice(x);
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel) {
            *b *= *k;
        }
        self.inverse.process(&mut buf);
        buf.truncate(self.dim);
        buf
    }

    /// Dense section, for inspection and small-scale checks.
    pub fn to_dense(&self) -> TruncatedOperator<T> {
        let entries = CMatrix::from_fn(self.dim, self.dim, |j, k| self.window.coeff(j as i64 - k as i64));
        TruncatedOperator::new(entries, Provenance::ToeplitzOfSymbol)
    }
}
