//! The 3x3 lifts `R_phi`, `S_psi` and `delta(phi, psi) = det(R S R^{-1} S^{-1})`.
//!
//! With `u = T_phi` and `v = T_{1/phi}` the lift of `diag(phi, 1/phi)` is
//!
//! ```text
//! R = [[2u - uvu, uv - 1], [1 - vu, v]]    R^{-1} = [[v, 1 - vu], [uv - 1, 2u - uvu]]
//! ```
//!
//! embedded on blocks (0, 1) for `R` and (0, 2) for `S`, identity elsewhere.
//! The two are inverse for any `u`, `v`, so composing them at a buffer
//! dimension and compressing only at the end keeps the inverse exact. No
//! winding-number condition is needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Lu};
use crate::scalar::{cx, Cx, Real};
use crate::symbolic::RationalSymbol;
use crate::toeplitz::commutator::{check_buffer, column_determinant, default_buffer, naive_commutator_of, unit_t};
use crate::toeplitz::convergence::{converge_determinant, ConvergenceReport};
use crate::toeplitz::operator::{Provenance, ToeplitzOp, TruncatedOperator};
use crate::toeplitz::InverseMode;

/// Corner size of random lift perturbations.
pub const PERTURBATION_SIZE: usize = 8;
/// Upper bound on the Frobenius norm of random lift perturbations.
pub const PERTURBATION_NORM: f64 = 0.2;
const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftKind {
    /// Lift of `diag(phi, 1/phi, 1)`.
    R,
    /// Lift of `diag(psi, 1, 1/psi)`.
    S,
}

impl LiftKind {
    fn pair(self) -> (usize, usize) {
        match self {
            LiftKind::R => (0, 1),
            LiftKind::S => (0, 2),
        }
    }
}

/// Right factor `I + K`, `K` in the top-left corner of block `(row, col)`,
/// stored with the matching corner of `(I + K)^{-1} - I`.
#[derive(Debug, Clone)]
struct Correction<T: Real> {
    block: (usize, usize),
    k: CMatrix<T>,
    k_inv: CMatrix<T>,
}

impl<T: Real> Correction<T> {
    fn apply(&self, x: &mut [Cx<T>], dim: usize, inverse: bool) {
        let k = if inverse { &self.k_inv } else { &self.k };
        let n = k.rows();
        let (bi, bj) = self.block;
        let src = &x[bj * dim..bj * dim + n];
        let add = k.matvec(src);
        for (dst, a) in x[bi * dim..bi * dim + n].iter_mut().zip(add) {
            *dst += a;
        }
    }
}

/// A lift `R_phi` or `S_psi` at buffer dimension `dim`, possibly right
/// multiplied by finite-rank factors `I + K`.
#[derive(Debug, Clone)]
pub struct LiftTriple<T: Real> {
    kind: LiftKind,
    symbol: RationalSymbol<T>,
    dim: usize,
    u: ToeplitzOp<T>,
    v: ToeplitzOp<T>,
    corrections: Vec<Correction<T>>,
}

pub fn build_lift_r<T: Real>(phi: &RationalSymbol<T>, m_buf: usize) -> Result<LiftTriple<T>> {
    LiftTriple::new(LiftKind::R, phi, m_buf)
}

pub fn build_lift_s<T: Real>(psi: &RationalSymbol<T>, m_buf: usize) -> Result<LiftTriple<T>> {
    LiftTriple::new(LiftKind::S, psi, m_buf)
}

impl<T: Real> LiftTriple<T> {
    pub fn new(kind: LiftKind, symbol: &RationalSymbol<T>, m_buf: usize) -> Result<Self> {
        if m_buf == 0 {
            return Err(Error::BufferTooSmall { msg: "empty buffer".into() });
        }
        Ok(Self {
            kind,
            symbol: symbol.clone(),
            dim: m_buf,
            u: ToeplitzOp::of_symbol(symbol, m_buf)?,
            v: ToeplitzOp::of_symbol(&symbol.invert(), m_buf)?,
            corrections: Vec::new(),
        })
    }

    pub fn kind(&self) -> LiftKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbol(&self) -> &RationalSymbol<T> {
        &self.symbol
    }

    /// Diagonal of the symbol matrix the lift represents.
    pub fn symbol_diag(&self) -> [RationalSymbol<T>; 3] {
        let one = RationalSymbol::constant_symbol(cx(T::one(), T::zero())).expect("1 is a valid symbol");
        let inv = self.symbol.invert();
        match self.kind {
            LiftKind::R => [self.symbol.clone(), inv, one],
            LiftKind::S => [self.symbol.clone(), one, inv],
        }
    }

    pub fn is_perturbed(&self) -> bool {
        !self.corrections.is_empty()
    }

    /// `L x` for `x` of length `3 * dim`.
    pub fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(x.len(), 3 * self.dim);
        let mut y = x.to_vec();
        for c in self.corrections.iter().rev() {
            c.apply(&mut y, self.dim, false);
        }
        let (p, q) = self.kind.pair();
        let d = self.dim;
        let xp = y[p * d..(p + 1) * d].to_vec();
        let xq = y[q * d..(q + 1) * d].to_vec();
        let a = self.u.apply(&xp);
        let diff: Vec<_> = xq.iter().zip(&a).map(|(x, a)| x - a).collect();
        let t = self.v.apply(&diff);
        let out_q: Vec<_> = xp.iter().zip(&t).map(|(x, t)| x + t).collect();
        let sum: Vec<_> = xp.iter().zip(&out_q).map(|(x, o)| x + o).collect();
        let out_p: Vec<_> = self.u.apply(&sum).iter().zip(&xq).map(|(s, x)| s - x).collect();
        y[p * d..(p + 1) * d].copy_from_slice(&out_p);
        y[q * d..(q + 1) * d].copy_from_slice(&out_q);
        y
    }

    /// `L^{-1} x` from the closed-form inverse.
    pub fn apply_inverse(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(x.len(), 3 * self.dim);
        let (p, q) = self.kind.pair();
        let d = self.dim;
        let mut y = x.to_vec();
        let xp = &x[p * d..(p + 1) * d];
        let xq = &x[q * d..(q + 1) * d];
        let b = self.u.apply(xq);
        let diff: Vec<_> = xp.iter().zip(&b).map(|(x, b)| x - b).collect();
        let out_p: Vec<_> = self.v.apply(&diff).iter().zip(xq).map(|(t, x)| t + x).collect();
        let sum: Vec<_> = out_p.iter().zip(xq).map(|(o, x)| o + x).collect();
        let out_q: Vec<_> = self.u.apply(&sum).iter().zip(xp).map(|(s, x)| s - x).collect();
        y[p * d..(p + 1) * d].copy_from_slice(&out_p);
        y[q * d..(q + 1) * d].copy_from_slice(&out_q);
        for c in &self.corrections {
            c.apply(&mut y, d, true);
        }
        y
    }

    fn dense_blocks(&self, inverse: bool) -> [[TruncatedOperator<T>; 3]; 3] {
        let d = self.dim;
        let cols: Vec<Vec<Cx<T>>> = (0..3 * d)
            .map(|j| {
                let e = unit_t(3 * d, j);
                if inverse {
                    self.apply_inverse(&e)
                } else {
                    self.apply(&e)
                }
            })
            .collect();
        std::array::from_fn(|bi| {
            std::array::from_fn(|bj| {
                let m = CMatrix::from_fn(d, d, |i, j| cols[bj * d + j][bi * d + i]);
                TruncatedOperator::new(m, Provenance::Composed)
            })
        })
    }

    /// All nine blocks as dense `dim x dim` sections.
    pub fn blocks(&self) -> [[TruncatedOperator<T>; 3]; 3] {
        self.dense_blocks(false)
    }

    /// The nine blocks of the closed-form inverse.
    pub fn inverse_blocks(&self) -> [[TruncatedOperator<T>; 3]; 3] {
        self.dense_blocks(true)
    }

    /// `3m x 3m` compression, each block cut to its leading `m x m` corner.
    pub fn compressed(&self, m: usize) -> CMatrix<T> {
        compress_columns(m, self.dim, |x| self.apply(x))
    }
}

fn compress_columns<T: Real>(m: usize, dim: usize, op: impl Fn(&[Cx<T>]) -> Vec<Cx<T>>) -> CMatrix<T> {
    let cols: Vec<Vec<Cx<T>>> = (0..3 * m)
        .map(|j| compress_vector(&op(&unit_t(3 * dim, (j / m) * dim + j % m)), m, dim))
        .collect();
    CMatrix::from_columns(3 * m, &cols)
}

fn compress_vector<T: Real>(y: &[Cx<T>], m: usize, dim: usize) -> Vec<Cx<T>> {
    (0..3).flat_map(|b| y[b * dim..b * dim + m].iter().copied()).collect()
}

/// Right-multiplies by `I + K` with `K` supported in the top-left corner of
/// block `block`. `NotInvertible` when `I + K` is singular.
pub fn perturb_lift_with<T: Real>(
    lift: &LiftTriple<T>,
    block: (usize, usize),
    k: &CMatrix<T>,
) -> Result<LiftTriple<T>> {
    if block.0 > 2 || block.1 > 2 {
        return Err(Error::InvalidArgument(format!("block {block:?} outside 3x3")));
    }
    if !k.is_square() || k.rows() > lift.dim {
        return Err(Error::InvalidArgument("correction must be square and fit the buffer".into()));
    }
    let mut out = lift.clone();
    if k.max_abs() == T::zero() {
        return Ok(out);
    }
    let n = k.rows();
    let k_inv = if block.0 == block.1 {
        // corner of (I + K)^{-1} - I
        let lu = Lu::with_cutoff(&CMatrix::identity(n).add(k), T::lit(SINGULAR_TOL)).map_err(|_| {
            Error::NotInvertible {
                msg: "I + K is singular; resample the perturbation".into(),
            }
        })?;
        lu.inverse().sub(&CMatrix::identity(n))
    } else {
        // off-diagonal K squares to zero
        k.scale(cx(-T::one(), T::zero()))
    };
    out.corrections.push(Correction {
        block,
        k: k.clone(),
        k_inv,
    });
    Ok(out)
}

/// Random perturbation: an `8 x 8` corner in a seed-chosen block with
/// Frobenius norm at most 0.2, so `I + K` is always invertible.
pub fn perturb_lift<T: Real>(lift: &LiftTriple<T>, seed: u64) -> Result<LiftTriple<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = (rng.gen_range(0..3), rng.gen_range(0..3));
    let n = PERTURBATION_SIZE.min(lift.dim);
    let raw = CMatrix::from_fn(n, n, |_, _| {
        cx(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
    });
    let frob = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| raw[(i, j)].norm_sqr())
        .sum::<T>()
        .sqrt();
    let target = T::lit(PERTURBATION_NORM * rng.gen_range(0.25..1.0));
    let k = raw.scale(cx(target / frob, T::zero()));
    perturb_lift_with(lift, block, &k)
}

/// `delta(phi, psi)`: determinant of the `3m x 3m` compression of
/// `R S R^{-1} S^{-1}` composed at dimension `m_buf`.
pub fn delta<T: Real>(phi: &RationalSymbol<T>, psi: &RationalSymbol<T>, m: usize, m_buf: usize) -> Result<Cx<T>> {
    delta_with(phi, psi, m, m_buf, InverseMode::Exact)
}

pub fn delta_with<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    m: usize,
    m_buf: usize,
    mode: InverseMode,
) -> Result<Cx<T>> {
    check_buffer(m, m_buf)?;
    let r = build_lift_r(phi, m_buf)?;
    let s = build_lift_s(psi, m_buf)?;
    delta_of_lifts_with(&r, &s, m, mode)
}

/// `delta` from explicit (possibly perturbed) lifts.
pub fn delta_of_lifts<T: Real>(r: &LiftTriple<T>, s: &LiftTriple<T>, m: usize) -> Result<Cx<T>> {
    delta_of_lifts_with(r, s, m, InverseMode::Exact)
}

pub fn delta_of_lifts_with<T: Real>(
    r: &LiftTriple<T>,
    s: &LiftTriple<T>,
    m: usize,
    mode: InverseMode,
) -> Result<Cx<T>> {
    if r.dim != s.dim {
        return Err(Error::InvalidArgument("lifts built at different buffer sizes".into()));
    }
    check_buffer(m, r.dim)?;
    let d = r.dim;
    match mode {
        InverseMode::Exact => column_determinant(3 * m, |j| {
            let x = unit_t(3 * d, (j / m) * d + j % m);
            let x = s.apply_inverse(&x);
            let x = r.apply_inverse(&x);
            let x = s.apply(&x);
            compress_vector(&r.apply(&x), m, d)
        }),
        InverseMode::TruncationMatrix => naive_commutator_of(&r.compressed(m), &s.compressed(m)),
    }
}

/// `delta` at `m0, 2 m0, ...` with the default buffer `4m + 64`.
pub fn converge_delta<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    m0: usize,
    tol: T,
    max_doublings: usize,
    mode: InverseMode,
) -> Result<ConvergenceReport<T>> {
    converge_determinant(|m| delta_with(phi, psi, m, default_buffer(m), mode), m0, tol, max_doublings)
}

/// Largest entry of `R R^{-1} - I`, probed column by column.
pub fn inverse_defect<T: Real>(lift: &LiftTriple<T>) -> T {
    let n = 3 * lift.dim;
    (0..n)
        .map(|j| {
            let e = unit_t(n, j);
            let y = lift.apply(&lift.apply_inverse(&e));
            y.iter()
                .zip(&e)
                .map(|(a, b)| (*a - *b).norm())
                .fold(T::zero(), T::max)
        })
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toeplitz::fourier_coeffs;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    fn sym(c: f64, f: &[(f64, i32)]) -> RationalSymbol<f64> {
        let f: Vec<_> = f.iter().map(|&(r, m)| (re(r), m)).collect();
        RationalSymbol::from_factors(re(c), &f).unwrap()
    }

    fn off_diagonal_max(b: &[[TruncatedOperator<f64>; 3]; 3]) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    worst = worst.max(b[i][j].entries.max_abs());
                }
            }
        }
        worst
    }

    #[test]
    fn holomorphic_lifts_are_diagonal() {
        let phi = sym(2.0, &[(-2.0, 1)]);
        let r = build_lift_r(&phi, 48).unwrap();
        let b = r.blocks();
        assert!(off_diagonal_max(&b) < 1e-12);
        let t = fourier_coeffs(&phi, 48).unwrap();
        let want = CMatrix::from_fn(48, 48, |j, k| t.coeff(j as i64 - k as i64));
        assert!(b[0][0].entries.sub(&want).max_abs() < 1e-12);
        assert!(b[2][2].entries.sub(&CMatrix::identity(48)).max_abs() == 0.0);

        let s = build_lift_s(&sym(3.0, &[(-3.0, 1)]), 48).unwrap();
        let b = s.blocks();
        assert!(off_diagonal_max(&b) < 1e-12);
        assert!(b[1][1].entries.sub(&CMatrix::identity(48)).max_abs() == 0.0);
    }

    #[test]
    fn linear_lift_corner_has_rank_one() {
        let r = build_lift_r(&sym(1.0, &[(0.3, 1)]), 40).unwrap();
        let b01 = &r.blocks()[0][1].entries;
        // T_phi T_{1/phi} - I maps f to -sum alpha^n c_n: only row 0 survives
        let rest = CMatrix::from_fn(39, 40, |i, j| b01[(i + 1, j)]);
        assert!(rest.max_abs() < 1e-12);
        assert!((b01[(0, 1)] - re(-0.3)).norm() < 1e-12);

        // T_{1/phi} T_phi = I on the operator level; at finite size only the
        // last column sees the cut
        let s = build_lift_s(&sym(1.0, &[(0.5, 1)]), 40).unwrap();
        assert!(s.blocks()[2][0].entries.top_left(40, 39).max_abs() < 1e-12);
    }

    #[test]
    fn closed_form_inverse() {
        let phi = RationalSymbol::from_factors(cx(0.7, 0.2), &[(re(0.4), 2), (cx(-1.5, 0.5), -1), (re(0.1), -1)]).unwrap();
        for lift in [build_lift_r(&phi, 64).unwrap(), build_lift_s(&phi, 64).unwrap()] {
            assert!(inverse_defect(&lift) < 1e-10);
        }
    }

    #[test]
    fn sigma_of_diagonal_blocks() {
        let phi = sym(1.5, &[(0.3, 1), (-0.5, 2), (2.0, -1)]);
        let r = build_lift_r(&phi, 96).unwrap();
        let b = r.blocks();
        let diag = r.symbol_diag();
        for (i, s) in diag.iter().enumerate() {
            let w = fourier_coeffs(s, 96).unwrap();
            // far from the corners the compact part has decayed
            for lag in -4i64..=4 {
                let (j, k) = ((48 + lag) as usize, 48usize);
                assert!((b[i][i].entries[(j, k)] - w.coeff(lag)).norm() < 1e-10, "block {i} lag {lag}");
            }
        }
    }

    #[test]
    fn delta_fixtures() {
        let d = delta(&sym(1.0, &[(0.3, 1)]), &sym(1.0, &[(0.5, 1)]), 16, 128).unwrap();
        assert!((d - re(-1.0)).norm() < 1e-10, "{d}");
        let d = delta(&sym(1.0, &[(-2.0, 1)]), &sym(1.0, &[(0.5, 1)]), 16, 128).unwrap();
        assert!((d - re(2.5)).norm() < 1e-10, "{d}");
    }

    #[test]
    fn perturbation_contract() {
        let r = build_lift_r(&sym(1.0, &[(0.3, 1), (-0.4, -1)]), 128).unwrap();
        let s = build_lift_s(&sym(1.0, &[(3.0, 1)]), 128).unwrap();
        let same = perturb_lift_with(&r, (0, 1), &CMatrix::zeros(8, 8)).unwrap();
        assert!(!same.is_perturbed());

        let mut k = CMatrix::zeros(8, 8);
        k[(0, 0)] = re(-1.0);
        assert!(matches!(perturb_lift_with(&r, (1, 1), &k), Err(Error::NotInvertible { .. })));

        let base = delta_of_lifts(&r, &s, 16).unwrap();
        for seed in 0..3 {
            let p = perturb_lift(&r, seed).unwrap();
            assert!(inverse_defect(&p) < 1e-10);
            let d = delta_of_lifts(&p, &s, 16).unwrap();
            assert!((d - base).norm() < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn truncation_mode_collapses() {
        let d = delta_with(&sym(1.0, &[(0.3, 1)]), &sym(1.0, &[(0.5, 1)]), 16, 128, InverseMode::TruncationMatrix).unwrap();
        assert!((d - re(1.0)).norm() < 1e-10);
    }
}
