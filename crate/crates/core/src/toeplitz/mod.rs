//! Toeplitz operators on `H^2` and determinants of their commutators.

pub mod commutator;
pub mod convergence;
pub mod fourier;
pub mod operator;
pub mod wiener_hopf;

pub use commutator::{
    commutator_determinant, commutator_determinant_with, converge_commutator, default_buffer, naive_truncation_commutator,
    perturbed_commutator_determinant, perturbed_commutator_determinant_with, InverseMode,
    PerturbedToeplitz, ToeplitzInverse, MAX_CORRECTION_SIZE,
};
pub use convergence::{converge_determinant, ConvergenceReport, ConvergenceSample};
pub use fourier::{fourier_coeffs, fourier_coeffs_fft, FourierWindow};
pub use operator::{toeplitz_apply, toeplitz_block, Provenance, ToeplitzOp, TruncatedOperator};
pub use wiener_hopf::{wiener_hopf, WhFactorization};
