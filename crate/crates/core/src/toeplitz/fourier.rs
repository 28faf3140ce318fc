//! Fourier coefficients of rational symbols on the unit circle.
//!
//! The analytic path splits the symbol into a part analytic inside the disk
//! (polynomial factors and poles outside) and a part analytic outside (poles
//! inside). Each part is a power series built from geometric series per
//! root; two-sided coefficients are their correlation, with both series
//! carried far enough past the window that the dropped tail is below double
//! precision. The FFT path samples the symbol on the circle and serves as an
//! independent cross-check.

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{cx, zero, Cx, Real};
use crate::symbolic::RationalSymbol;

/// Longest internal series the analytic path is allowed to build.
const MAX_SERIES_LEN: usize = 1 << 22;
/// Starting FFT grid for the sampling path.
pub const FFT_INITIAL_GRID: usize = 1024;
/// Aliasing tolerance for the sampling path, relative to the largest coefficient.
pub const FFT_TAIL_TOL: f64 = 1e-13;

/// Coefficients `c_n`, `-N <= n <= N`, with a geometric decay certificate
/// `|c_n| <= decay_const * decay_rho^|n|` over the stored window.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierWindow<T: Real> {
    coeffs: Vec<Cx<T>>,
    half_width: usize,
    decay_rho: T,
    decay_const: T,
}

impl<T: Real> FourierWindow<T> {
    fn from_coeffs(coeffs: Vec<Cx<T>>, half_width: usize, base_rate: T) -> Self {
        // multiple roots add polynomial prefactors n^k; inflate the rate slightly
        let decay_rho = if base_rate > T::zero() {
            base_rate.powf(T::lit(0.9))
        } else {
            T::zero()
        };
        let n = half_width as i64;
        let decay_const = if decay_rho > T::zero() {
            (-n..=n)
                .map(|k| {
                    let c = coeffs[(k + n) as usize].norm();
                    if c == T::zero() {
                        T::zero()
                    } else {
                        (c.ln() - T::from_count(k.unsigned_abs() as usize) * decay_rho.ln()).exp()
                    }
                })
                .fold(T::zero(), T::max)
        } else {
            coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
        };
        Self {
            coeffs,
            half_width,
            decay_rho,
            decay_const,
        }
    }

    /// `N`: the window holds indices `-N..=N`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `c_n`, or `None` outside the window.
    pub fn get(&self, n: i64) -> Option<Cx<T>> {
        let idx = n + self.half_width as i64;
        (idx >= 0).then(|| self.coeffs.get(idx as usize).copied()).flatten()
    }

    /// `c_n`; panics outside the window.
    pub fn coeff(&self, n: i64) -> Cx<T> {
        self.get(n).expect("index outside Fourier window")
    }

    pub fn decay_rho(&self) -> T {
        self.decay_rho
    }

    pub fn decay_const(&self) -> T {
        self.decay_const
    }

    /// All coefficients in index order `-N..=N`.
    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    /// Largest coefficient difference against another window on the shared range.
    pub fn max_discrepancy(&self, other: &Self) -> T {
        let n = self.half_width.min(other.half_width) as i64;
        (-n..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(T::zero(), T::max)
    }
}

/// Analytic Fourier coefficients of `phi` on `-n_buf..=n_buf`.
pub fn fourier_coeffs<T: Real>(phi: &RationalSymbol<T>, n_buf: usize) -> Result<FourierWindow<T>> {
    let rho = phi.decay_rate();
    let total_degree: usize = phi
        .factors()
        .iter()
        .map(|f| f.mult.unsigned_abs() as usize)
        .sum();
    let tail = if rho > T::zero() {
        // rho^tail * tail^(mult) below 1e-20
        let slack = 12 * phi.max_abs_mult() as usize;
        let steps = (T::lit(-46.0) / rho.ln()).ceil().to_usize().unwrap_or(usize::MAX);
        steps.saturating_add(slack)
    } else {
        0
    };
    let len = (2 * n_buf + 2)
        .saturating_add(tail)
        .saturating_add(total_degree);
    if len > MAX_SERIES_LEN {
        return Err(Error::BufferTooSmall {
            msg: format!(
                "decay rate {} needs a series of length {len} for window {n_buf}",
                rho
            ),
        });
    }

    // causal series in z, anticausal series in w = 1/z
    let mut causal = vec![zero::<T>(); len];
    causal[0] = phi.constant();
    let mut anti = vec![zero::<T>(); len];
    anti[0] = Cx::new(T::one(), T::zero());
    for f in phi.factors() {
        let inside = f.root.norm() < T::one();
        let k = f.mult.unsigned_abs();
        match (f.mult > 0, inside) {
            (true, _) => {
                for _ in 0..k {
                    mul_linear(&mut causal, f.root);
                }
            }
            (false, false) => {
                // (z - r)^-1 = (-1/r) * sum (z/r)^j
                let inv = Cx::new(T::one(), T::zero()) / f.root;
                for _ in 0..k {
                    scale(&mut causal, -inv);
                    geometric(&mut causal, inv);
                }
            }
            (false, true) => {
                // (z - r)^-1 = w * sum (r w)^j
                for _ in 0..k {
                    shift(&mut anti);
                    geometric(&mut anti, f.root);
                }
            }
        }
    }

    let n = n_buf as i64;
    let coeffs: Vec<Cx<T>> = (-n..=n)
        .map(|idx| {
            // c_idx = sum_{a >= 0} anti_a * causal_{idx + a}
            let start = if idx < 0 { (-idx) as usize } else { 0 };
            let mut acc = zero::<T>();
            for a in start..len {
                let b = (idx + a as i64) as usize;
                if b >= len {
                    break;
                }
                acc += anti[a] * causal[b];
            }
            acc
        })
        .collect();
    Ok(FourierWindow::from_coeffs(coeffs, n_buf, rho))
}

/// FFT-sampled Fourier coefficients on `-n_buf..=n_buf`, with the grid
/// doubled until successive grids agree to `FFT_TAIL_TOL`. Returns the window
/// and the last aliasing estimate.
pub fn fourier_coeffs_fft<T: Real>(
    phi: &RationalSymbol<T>,
    n_buf: usize,
) -> Result<(FourierWindow<T>, T)> {
    let mut grid = FFT_INITIAL_GRID.max((2 * n_buf + 2).next_power_of_two());
    let mut planner = FftPlanner::<T>::new();
    let mut prev = sampled_window(phi, n_buf, grid, &mut planner)?;
    loop {
        grid *= 2;
        let next = sampled_window(phi, n_buf, grid, &mut planner)?;
        let scale = next.iter().map(|c| c.norm()).fold(T::one(), T::max);
        let diff = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max);
        if diff <= T::lit(FFT_TAIL_TOL) * scale || grid >= MAX_SERIES_LEN {
            let window = FourierWindow::from_coeffs(next, n_buf, phi.decay_rate());
            return Ok((window, diff));
        }
        prev = next;
    }
}

fn sampled_window<T: Real>(
    phi: &RationalSymbol<T>,
    n_buf: usize,
    grid: usize,
    planner: &mut FftPlanner<T>,
) -> Result<Vec<Cx<T>>> {
    let mut buf: Vec<Cx<T>> = (0..grid)
        .map(|j| {
            let theta = T::TAU() * T::from_count(j) / T::from_count(grid);
            phi.eval(cx(theta.cos(), theta.sin()))
        })
        .collect::<Result<_>>()?;
    planner.plan_fft_forward(grid).process(&mut buf);
    let scale = T::one() / T::from_count(grid);
    let n = n_buf as i64;
    Ok((-n..=n)
        .map(|k| buf[k.rem_euclid(grid as i64) as usize] * scale)
        .collect())
}

fn mul_linear<T: Real>(series: &mut [Cx<T>], root: Cx<T>) {
    for j in (0..series.len()).rev() {
        let prev = if j > 0 { series[j - 1] } else { zero() };
        series[j] = prev - root * series[j];
    }
}

fn scale<T: Real>(series: &mut [Cx<T>], s: Cx<T>) {
    for c in series.iter_mut() {
        *c *= s;
    }
}

/// Multiplies by `1 / (1 - q x)`.
fn geometric<T: Real>(series: &mut [Cx<T>], q: Cx<T>) {
    for j in 1..series.len() {
        let prev = series[j - 1];
        series[j] += q * prev;
    }
}

fn shift<T: Real>(series: &mut [Cx<T>]) {
    for j in (1..series.len()).rev() {
        series[j] = series[j - 1];
    }
    series[0] = zero();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    fn sym(c: f64, f: &[(f64, i32)]) -> RationalSymbol<f64> {
        let f: Vec<_> = f.iter().map(|&(r, m)| (re(r), m)).collect();
        RationalSymbol::from_factors(re(c), &f).unwrap()
    }

    #[test]
    fn inner_pole_series() {
        let w = fourier_coeffs(&sym(1.0, &[(0.3, -1)]), 12).unwrap();
        for n in 1..=12 {
            assert!((w.coeff(-n) - re(0.3f64.powi(n as i32 - 1))).norm() < 1e-15);
        }
        for n in 0..=12 {
            assert_eq!(w.coeff(n), re(0.0));
        }
    }

    #[test]
    fn linear_factor() {
        let w = fourier_coeffs(&sym(1.0, &[(0.3, 1)]), 4).unwrap();
        assert_eq!(w.coeff(1), re(1.0));
        assert_eq!(w.coeff(0), re(-0.3));
        for n in [-4, -3, -2, -1, 2, 3, 4] {
            assert_eq!(w.coeff(n), re(0.0));
        }
    }

    #[test]
    fn outer_pole_series() {
        let w = fourier_coeffs(&sym(1.0, &[(3.0, -1)]), 10).unwrap();
        for n in 0..=10 {
            assert!((w.coeff(n) - re(-(3f64.powi(-n as i32 - 1)))).norm() < 1e-16);
        }
        for n in 1..=10 {
            assert_eq!(w.coeff(-n), re(0.0));
        }
    }

    #[test]
    fn decay_certificate_holds() {
        let phi = sym(0.7, &[(0.6, -2), (1.6, -1), (0.2, 1)]);
        let w = fourier_coeffs(&phi, 40).unwrap();
        for n in -40..=40i64 {
            let bound = w.decay_const() * w.decay_rho().powi(n.abs() as i32);
            assert!(w.coeff(n).norm() <= bound * (1.0 + 1e-12));
        }
        assert!(w.decay_rho() > 0.0 && w.decay_rho() < 1.0);
    }

    #[test]
    fn fft_path_agrees() {
        let phi = RationalSymbol::from_factors(
            cx(1.2, -0.4),
            &[(re(0.5), -2), (cx(-0.2, 0.6), 1), (cx(1.5, 1.0), -1), (re(2.5), 2)],
        )
        .unwrap();
        let exact = fourier_coeffs(&phi, 64).unwrap();
        let (sampled, tail) = fourier_coeffs_fft(&phi, 64).unwrap();
        assert!(tail < 1e-12);
        assert!(exact.max_discrepancy(&sampled) < 1e-13);
    }

    #[test]
    fn near_circle_root_needs_long_series() {
        let phi = RationalSymbol::from_factors_with(re(1.0), &[(re(1.0 - 1e-7), -1)], 1e-9).unwrap();
        assert!(matches!(fourier_coeffs(&phi, 16), Err(Error::BufferTooSmall { .. })));
    }
}
