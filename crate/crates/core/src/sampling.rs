//! Seeded random symbols and polynomials for property tests.
//!
//! Roots are drawn uniformly in modulus from `[0.05, 0.8] ∪ [1.25, 3]`
//! (so clearance is at least 0.2) and uniformly in angle; multiplicities
//! from `{-2, -1, 1, 2}`; constants with modulus in `[0.5, 2]` and a
//! uniform phase. Roots closer than [`MIN_SEPARATION`] to an earlier root
//! are redrawn.

use std::f64::consts::TAU;

use rand::Rng;

use crate::scalar::{cx, Cx, Real};
use crate::symbolic::{Polynomial, RationalSymbol};

pub const INNER_BAND: (f64, f64) = (0.05, 0.8);
pub const OUTER_BAND: (f64, f64) = (1.25, 3.0);
pub const MULTIPLICITIES: [i32; 4] = [-2, -1, 1, 2];
pub const CONSTANT_MODULUS: (f64, f64) = (0.5, 2.0);
pub const MIN_SEPARATION: f64 = 0.1;
/// Factors per random symbol, inclusive.
pub const FACTORS_PER_SYMBOL: (usize, usize) = (1, 3);

fn polar<T: Real>(r: f64, theta: f64) -> Cx<T> {
    cx(T::lit(r * theta.cos()), T::lit(r * theta.sin()))
}

fn band_root<R: Rng + ?Sized>(rng: &mut R, inside: bool) -> (f64, f64) {
    let (lo, hi) = if inside { INNER_BAND } else { OUTER_BAND };
    (rng.gen_range(lo..=hi), rng.gen_range(0.0..TAU))
}

/// Random root in either band, by total band length.
pub fn random_root<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Cx<T> {
    let inner = INNER_BAND.1 - INNER_BAND.0;
    let outer = OUTER_BAND.1 - OUTER_BAND.0;
    let inside = rng.gen_bool(inner / (inner + outer));
    let (r, t) = band_root(rng, inside);
    polar(r, t)
}

pub fn random_constant<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Cx<T> {
    polar(rng.gen_range(CONSTANT_MODULUS.0..=CONSTANT_MODULUS.1), rng.gen_range(0.0..TAU))
}

fn separated<T: Real>(roots: &[(Cx<T>, i32)], r: Cx<T>) -> bool {
    roots.iter().all(|(q, _)| (*q - r).norm() >= T::lit(MIN_SEPARATION))
}

fn push_root<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    roots: &mut Vec<(Cx<T>, i32)>,
    mut draw: impl FnMut(&mut R) -> Cx<T>,
    mult: i32,
) {
    loop {
        let r = draw(rng);
        if separated(roots, r) {
            roots.push((r, mult));
            return;
        }
    }
}

/// Random symbol with 1 to 3 factors of arbitrary winding.
pub fn random_symbol<T: Real, R: Rng + ?Sized>(rng: &mut R) -> RationalSymbol<T> {
    let n = rng.gen_range(FACTORS_PER_SYMBOL.0..=FACTORS_PER_SYMBOL.1);
    let mut roots = Vec::with_capacity(n);
    for _ in 0..n {
        let m = MULTIPLICITIES[rng.gen_range(0..MULTIPLICITIES.len())];
        push_root(rng, &mut roots, |g| random_root(g), m);
    }
    RationalSymbol::from_factors(random_constant(rng), &roots).expect("sampled symbol is valid")
}

/// Random symbol of winding number zero: an optional inner pair with
/// opposite multiplicities plus 0 to 2 outer factors, at least one factor.
pub fn random_winding_zero_symbol<T: Real, R: Rng + ?Sized>(rng: &mut R) -> RationalSymbol<T> {
    let mut roots = Vec::new();
    loop {
        if rng.gen_bool(0.7) {
            let m = MULTIPLICITIES[rng.gen_range(2..MULTIPLICITIES.len())];
            push_root(rng, &mut roots, |g| { let (r, t) = band_root(g, true); polar(r, t) }, m);
            push_root(rng, &mut roots, |g| { let (r, t) = band_root(g, true); polar(r, t) }, -m);
        }
        for _ in 0..rng.gen_range(0..=2) {
            let m = MULTIPLICITIES[rng.gen_range(0..MULTIPLICITIES.len())];
            push_root(rng, &mut roots, |g| { let (r, t) = band_root(g, false); polar(r, t) }, m);
        }
        if !roots.is_empty() {
            break;
        }
    }
    RationalSymbol::from_factors(random_constant(rng), &roots).expect("sampled symbol is valid")
}

/// Random polynomial of exact degree `degree` with roots in the annulus
/// `0.05 <= |r| <= 5`.
pub fn random_polynomial<T: Real, R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Polynomial<T> {
    let roots: Vec<(Cx<T>, u32)> = (0..degree)
        .map(|_| (polar(rng.gen_range(0.05..=5.0), rng.gen_range(0.0..TAU)), 1))
        .collect();
    Polynomial::from_roots(random_constant(rng), roots.iter())
}

/// Random point on the circle of radius `r`.
pub fn random_point<T: Real, R: Rng + ?Sized>(rng: &mut R, r: f64) -> Cx<T> {
    polar(r, rng.gen_range(0.0..TAU))
}

/// Dense random polynomial with coefficients in the unit square.
pub fn random_coefficients<T: Real, R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Polynomial<T> {
    Polynomial::new(
        (0..=degree)
            .map(|_| cx(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tame::winding_number;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symbols_respect_bands() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let s: RationalSymbol<f64> = random_symbol(&mut rng);
            assert!(s.clearance() >= 0.2 - 1e-12);
            assert!((1..=3).contains(&s.factors().len()));
            assert!((0.5..=2.0).contains(&s.constant().norm()));
            let w: RationalSymbol<f64> = random_winding_zero_symbol(&mut rng);
            assert_eq!(winding_number(&w), 0);
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a: RationalSymbol<f64> = random_symbol(&mut ChaCha8Rng::seed_from_u64(3));
        let b: RationalSymbol<f64> = random_symbol(&mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }
}
