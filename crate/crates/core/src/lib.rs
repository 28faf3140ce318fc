//! Tame symbols and determinants of Toeplitz multiplicative commutators for
//! rational symbols on the unit circle.
//!
//! The algebraic side (`tame`) is exact; the analytic side (`toeplitz`,
//! `ktheory`) computes buffered finite-section determinants. Everything is
//! generic over the real scalar; the aliases below fix it to `f64`.

pub mod checks;
pub mod error;
pub mod ktheory;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod symbolic;
pub mod tame;
pub mod toeplitz;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};
pub use symbolic::{parse_symbol, parse_symbol_with, Factor, LaurentLeading, Polynomial, RationalSymbol};

/// Complex double.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision rational symbol.
pub type Symbol = RationalSymbol<f64>;
/// Double-precision dense matrix.
pub type Matrix = linalg::CMatrix<f64>;
pub type PiReport = tame::PiReport<f64>;
pub type ConvergenceReport = toeplitz::ConvergenceReport<f64>;
pub type FourierWindow = toeplitz::FourierWindow<f64>;
pub type LiftTriple = ktheory::LiftTriple<f64>;
pub type PerturbedToeplitz = toeplitz::PerturbedToeplitz<f64>;
