//! Determinants of multiplicative commutators `A B A^{-1} B^{-1}`.
//!
//! All factors are composed at a buffer dimension `m_buf` well above the
//! compression size `m`; the product's leading `m x m` block is then handed
//! to the LU determinant. Inverses are the exact operator inverses
//! `T_{1/plus} T_{1/minus}` from the Wiener–Hopf split, corrected by a
//! Woodbury term for finite-rank perturbations. Inverting a truncated
//! matrix instead makes every determinant collapse to 1; that variant is
//! kept as [`naive_truncation_commutator`] for comparison.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Lu};
use crate::scalar::{one, zero, Cx, Real};
use crate::symbolic::RationalSymbol;

use super::convergence::{converge_determinant, ConvergenceReport};
use super::fourier::fourier_coeffs;
use super::operator::{toeplitz_block, ToeplitzOp};
use super::wiener_hopf::wiener_hopf;

/// Largest supported correction block for [`PerturbedToeplitz`].
pub const MAX_CORRECTION_SIZE: usize = 16;
/// Pivot size, relative to `1 + |update|`, below which a Woodbury
/// capacitance matrix counts as singular.
const CAPACITANCE_TOL: f64 = 1e-10;

/// How operator inverses are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseMode {
    /// Closed-form operator inverses composed at buffer scale.
    #[default]
    Exact,
    /// Matrix inverses of the `m x m` truncations (always gives 1).
    TruncationMatrix,
}

/// Default buffer dimension `4m + 64`.
pub fn default_buffer(m: usize) -> usize {
    4 * m + 64
}

pub(crate) fn check_buffer(m: usize, m_buf: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("compression size must be positive".into()));
    }
    if m_buf < default_buffer(m) {
        return Err(Error::BufferTooSmall {
            msg: format!("buffer {m_buf} below 4*{m}+64"),
        });
    }
    Ok(())
}

pub(crate) fn unit_t<T: Real>(dim: usize, k: usize) -> Vec<Cx<T>> {
    let mut e = vec![zero::<T>(); dim];
    e[k] = one();
    e
}

/// Determinant of the matrix whose `j`-th column is `column(j)`, columns
/// evaluated in parallel and assembled in order.
pub(crate) fn column_determinant<T, F>(n: usize, column: F) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(usize) -> Vec<Cx<T>> + Sync,
{
    let cols: Vec<Vec<Cx<T>>> = (0..n).into_par_iter().map(&column).collect();
    let m = CMatrix::from_columns(n, &cols);
    if !m.is_finite() {
        return Err(Error::SingularCompression { pivot: 0 });
    }
    let ld = Lu::new(&m)
        .map_err(|e| match e {
            Error::SingularMatrix { pivot } => Error::SingularCompression { pivot },
            other => other,
        })?
        .log_det();
    ld.value().ok_or_else(|| Error::InvalidArgument("determinant not representable".into()))
}

/// `T_phi^{-1} = T_{1/plus} T_{1/minus}` at buffer scale.
#[derive(Debug, Clone)]
pub struct ToeplitzInverse<T: Real> {
    plus_inv: ToeplitzOp<T>,
    minus_inv: ToeplitzOp<T>,
}

impl<T: Real> ToeplitzInverse<T> {
    pub fn new(phi: &RationalSymbol<T>, dim: usize) -> Result<Self> {
        let wh = wiener_hopf(phi)?;
        Ok(Self {
            plus_inv: ToeplitzOp::of_symbol(&wh.plus.invert(), dim)?,
            minus_inv: ToeplitzOp::of_symbol(&wh.minus.invert(), dim)?,
        })
    }

    pub fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        self.plus_inv.apply(&self.minus_inv.apply(x))
    }

    pub fn plus_inverse(&self) -> &ToeplitzOp<T> {
        &self.plus_inv
    }

    pub fn minus_inverse(&self) -> &ToeplitzOp<T> {
        &self.minus_inv
    }
}

/// `det P_m T_phi T_psi T_phi^{-1} T_psi^{-1} P_m` with all six factors at
/// dimension `m_buf`. Both symbols need winding number zero.
pub fn commutator_determinant<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    m: usize,
    m_buf: usize,
) -> Result<Cx<T>> {
    commutator_determinant_with(phi, psi, m, m_buf, InverseMode::Exact)
}

pub fn commutator_determinant_with<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    m: usize,
    m_buf: usize,
    mode: InverseMode,
) -> Result<Cx<T>> {
    let a = PerturbedToeplitz::unperturbed(phi.clone());
    let b = PerturbedToeplitz::unperturbed(psi.clone());
    perturbed_commutator_determinant_with(&a, &b, m, m_buf, mode)
}

/// Commutator determinant at `m0, 2 m0, ...` with the default buffer.
pub fn converge_commutator<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    m0: usize,
    tol: T,
    max_doublings: usize,
    mode: InverseMode,
) -> Result<ConvergenceReport<T>> {
    converge_determinant(
        |m| commutator_determinant_with(phi, psi, m, default_buffer(m), mode),
        m0,
        tol,
        max_doublings,
    )
}

/// `det(A_m B_m A_m^{-1} B_m^{-1})` with matrix inverses of the `m x m`
/// truncations: equal to 1 up to rounding for every pair.
pub fn naive_truncation_commutator<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    m: usize,
) -> Result<Cx<T>> {
    let a = toeplitz_block(&fourier_coeffs(phi, m)?, m)?.entries;
    let b = toeplitz_block(&fourier_coeffs(psi, m)?, m)?.entries;
    naive_commutator_of(&a, &b)
}

pub(crate) fn naive_commutator_of<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Cx<T>> {
    let singular = |e: Error| match e {
        Error::SingularMatrix { pivot } => Error::SingularTruncation { pivot },
        other => other,
    };
    let a_inv = linalg::inverse(a).map_err(singular)?;
    let b_inv = linalg::inverse(b).map_err(singular)?;
    let prod = a.matmul(b).matmul(&a_inv).matmul(&b_inv);
    linalg::det(&prod).map_err(singular)
}

/// `A = T_phi + K` with `K` supported in the leading `k x k` block.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedToeplitz<T: Real> {
    symbol: RationalSymbol<T>,
    correction: CMatrix<T>,
}

impl<T: Real> PerturbedToeplitz<T> {
    pub fn new(symbol: RationalSymbol<T>, correction: CMatrix<T>) -> Result<Self> {
        if !correction.is_square() || correction.rows() > MAX_CORRECTION_SIZE {
            return Err(Error::InvalidArgument(format!(
                "correction must be square and at most {MAX_CORRECTION_SIZE}x{MAX_CORRECTION_SIZE}"
            )));
        }
        Ok(Self { symbol, correction })
    }

    pub fn unperturbed(symbol: RationalSymbol<T>) -> Self {
        Self {
            symbol,
            correction: CMatrix::zeros(0, 0),
        }
    }

    /// The symbol map: `sigma(T_phi + K) = phi`.
    pub fn symbol(&self) -> &RationalSymbol<T> {
        &self.symbol
    }

    pub fn correction(&self) -> &CMatrix<T> {
        &self.correction
    }

    fn has_correction(&self) -> bool {
        self.correction.max_abs() > T::zero()
    }

    fn buffered(&self, dim: usize) -> Result<BufferedPerturbed<T>> {
        let op = ToeplitzOp::of_symbol(&self.symbol, dim)?;
        let inv = ToeplitzInverse::new(&self.symbol, dim)?;
        let woodbury = if self.has_correction() {
            let k = self.correction.rows();
            if k > dim {
                return Err(Error::BufferTooSmall {
                    msg: format!("correction size {k} exceeds buffer {dim}"),
                });
            }
            // Y = T^{-1} E, capacitance G = I + E^T Y K
            let y: Vec<Vec<Cx<T>>> = (0..k).map(|j| inv.apply(&unit_t(dim, j))).collect();
            let top = CMatrix::from_fn(k, k, |i, j| y[j][i]);
            let update = top.matmul(&self.correction);
            // pivots are judged against the size of I and the update, not of G
            let scale = T::one() + update.max_abs() * T::from_count(k);
            let g = CMatrix::identity(k).add(&update);
            let lu = Lu::with_cutoff(&g, scale * T::lit(CAPACITANCE_TOL)).map_err(|_| {
                Error::NotInvertible {
                    msg: "finite-rank correction makes the operator singular".into(),
                }
            })?;
            Some(Woodbury {
                k,
                correction: self.correction.clone(),
                columns: y,
                capacitance: lu,
            })
        } else {
            None
        };
        Ok(BufferedPerturbed { op, inv, woodbury })
    }
}

#[derive(Debug)]
struct Woodbury<T: Real> {
    k: usize,
    correction: CMatrix<T>,
    columns: Vec<Vec<Cx<T>>>,
    capacitance: Lu<T>,
}

#[derive(Debug)]
struct BufferedPerturbed<T: Real> {
    op: ToeplitzOp<T>,
    inv: ToeplitzInverse<T>,
    woodbury: Option<Woodbury<T>>,
}

impl<T: Real> BufferedPerturbed<T> {
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        let mut y = self.op.apply(x);
        if let Some(w) = &self.woodbury {
            let kx = w.correction.matvec(&x[..w.k]);
            for (yi, v) in y.iter_mut().zip(kx) {
                *yi += v;
            }
        }
        y
    }

    fn apply_inverse(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        let mut g = self.inv.apply(x);
        if let Some(w) = &self.woodbury {
            let u = w.capacitance.solve(&g[..w.k]);
            let v = w.correction.matvec(&u);
            for (col, vj) in w.columns.iter().zip(v) {
                for (gi, c) in g.iter_mut().zip(col) {
                    *gi -= *c * vj;
                }
            }
        }
        g
    }
}

/// `det P_m A B A^{-1} B^{-1} P_m` for perturbed Toeplitz operators.
pub fn perturbed_commutator_determinant<T: Real>(
    a: &PerturbedToeplitz<T>,
    b: &PerturbedToeplitz<T>,
    m: usize,
    m_buf: usize,
) -> Result<Cx<T>> {
    perturbed_commutator_determinant_with(a, b, m, m_buf, InverseMode::Exact)
}

pub fn perturbed_commutator_determinant_with<T: Real>(
    a: &PerturbedToeplitz<T>,
    b: &PerturbedToeplitz<T>,
    m: usize,
    m_buf: usize,
    mode: InverseMode,
) -> Result<Cx<T>> {
    check_buffer(m, m_buf)?;
    let aa = a.buffered(m_buf)?;
    let bb = b.buffered(m_buf)?;
    match mode {
        InverseMode::Exact => column_determinant(m, |k| {
            let x = unit_t(m_buf, k);
            let x = bb.apply_inverse(&x);
            let x = aa.apply_inverse(&x);
            let x = bb.apply(&x);
            let mut x = aa.apply(&x);
            x.truncate(m);
            x
        }),
        InverseMode::TruncationMatrix => {
            let compress = |p: &BufferedPerturbed<T>| {
                let cols: Vec<Vec<Cx<T>>> = (0..m)
                    .map(|k| p.apply(&unit_t(m_buf, k))[..m].to_vec())
                    .collect();
                CMatrix::from_columns(m, &cols)
            };
            naive_commutator_of(&compress(&aa), &compress(&bb))
        }
    }
}
