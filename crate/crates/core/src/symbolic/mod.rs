//! Rational symbols in canonical factored form.
//!
//! A symbol is stored as `c * prod (z - r_i)^(m_i)` with distinct roots and
//! nonzero integer multiplicities. Orders, leading Laurent data and
//! Wiener–Hopf splits are read off this form directly; expanded input is
//! factored once by the root finder when it is parsed.

mod parser;
mod polynomial;
mod roots;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{cmp_re_im, format_complex, is_finite, one, powi, Cx, Real};

pub use parser::{parse_symbol, parse_symbol_with};
pub use polynomial::Polynomial;
pub use roots::{cluster_radius, roots_of_polynomial, MAX_ITERATIONS, TOL_ROOT};

/// Default circle clearance: roots with `| |r| - 1 | <= TAU_CIRCLE` are rejected.
pub const TAU_CIRCLE: f64 = 1e-6;

/// One factor `(z - root)^mult` of a rational symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor<T: Real> {
    pub root: Cx<T>,
    pub mult: i32,
}

impl<T: Real> Factor<T> {
    pub fn new(root: Cx<T>, mult: i32) -> Self {
        Self { root, mult }
    }
}

/// Rational function with no zeros or poles on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSymbol<T: Real> {
    constant: Cx<T>,
    factors: Vec<Factor<T>>,
    clearance: T,
}

/// Leading Laurent data `a (w - z)^m` of a symbol at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentLeading<T: Real> {
    pub order: i32,
    pub coeff: Cx<T>,
}

impl<T: Real> RationalSymbol<T> {
    /// Canonical symbol from a constant and a factor list, with the default
    /// circle clearance.
    pub fn from_factors(constant: Cx<T>, factors: &[(Cx<T>, i32)]) -> Result<Self> {
        Self::from_factors_with(constant, factors, T::lit(TAU_CIRCLE))
    }

    /// As [`from_factors`](Self::from_factors) with an explicit clearance.
    pub fn from_factors_with(constant: Cx<T>, factors: &[(Cx<T>, i32)], tau: T) -> Result<Self> {
        if !is_finite(constant) || factors.iter().any(|(r, _)| !is_finite(*r)) {
            return Err(Error::InvalidArgument("non-finite input".into()));
        }
        if constant.norm() == T::zero() {
            return Err(Error::ZeroConstant);
        }
        if let Some((r, _)) = factors.iter().find(|(_, m)| *m == 0) {
            return Err(Error::ZeroMultiplicity {
                root: format_complex(*r),
            });
        }
        let merged = merge_factors(factors.iter().map(|&(r, m)| Factor::new(r, m)));
        for f in &merged {
            let distance = (f.root.norm() - T::one()).abs();
            if distance <= tau {
                return Err(Error::CircleViolation {
                    root: format_complex(f.root),
                    distance: distance.as_f64(),
                    tau: tau.as_f64(),
                });
            }
        }
        Ok(Self::assemble(constant, merged))
    }

    /// The constant symbol `c`.
    pub fn constant_symbol(c: Cx<T>) -> Result<Self> {
        Self::from_factors(c, &[])
    }

    fn assemble(constant: Cx<T>, factors: Vec<Factor<T>>) -> Self {
        let clearance = factors
            .iter()
            .map(|f| (f.root.norm() - T::one()).abs())
            .fold(T::infinity(), T::min);
        Self {
            constant,
            factors,
            clearance,
        }
    }

    pub fn constant(&self) -> Cx<T> {
        self.constant
    }

    /// Factors sorted by (Re root, Im root).
    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    /// `min | |r| - 1 |` over roots; infinite for constants.
    pub fn clearance(&self) -> T {
        self.clearance
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// Evaluates `c * prod (w - r_i)^(m_i)` with integer powers only.
    pub fn eval(&self, w: Cx<T>) -> Result<Cx<T>> {
        let mut acc = self.constant;
        for f in &self.factors {
            let d = w - f.root;
            if f.mult < 0 && d.norm() <= T::epsilon() * T::lit(4.0) * f.root.norm().max(T::one()) {
                return Err(Error::PoleEvaluation {
                    point: format_complex(w),
                });
            }
            acc *= powi(d, f.mult);
        }
        Ok(acc)
    }

    /// Pointwise product; multiplicities at shared roots add and cancel.
    pub fn multiply(&self, other: &Self) -> Self {
        let merged = merge_factors(self.factors.iter().chain(other.factors.iter()).copied());
        Self::assemble(self.constant * other.constant, merged)
    }

    /// Pointwise reciprocal.
    pub fn invert(&self) -> Self {
        Self {
            constant: one::<T>() / self.constant,
            factors: self
                .factors
                .iter()
                .map(|f| Factor::new(f.root, -f.mult))
                .collect(),
            clearance: self.clearance,
        }
    }

    /// Same canonical form up to rounding: identical multiplicities, roots
    /// within the clustering radius, constants within `8 eps` relative.
    pub fn canonical_eq(&self, other: &Self) -> bool {
        let tol = T::epsilon() * T::lit(8.0);
        (self.constant - other.constant).norm() <= tol * self.constant.norm()
            && self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| {
                a.mult == b.mult && (a.root - b.root).norm() <= cluster_radius(a.root)
            })
    }

    /// Keeps only the factors selected by `keep`, with the given constant.
    pub(crate) fn restrict(&self, constant: Cx<T>, keep: impl Fn(&Factor<T>) -> bool) -> Self {
        Self::assemble(constant, self.factors.iter().copied().filter(keep).collect())
    }

    /// Order `v(phi, z)`: the multiplicity of `z` as a root, or 0.
    pub fn order_at(&self, z: Cx<T>) -> i32 {
        self.matching_factor(z).map_or(0, |f| f.mult)
    }

    /// Exact leading Laurent coefficient at `z` via the cofactor product.
    pub fn leading_laurent(&self, z: Cx<T>) -> LaurentLeading<T> {
        let hit = self.matching_factor(z).map(|f| f.root);
        let mut coeff = self.constant;
        let mut order = 0;
        for f in &self.factors {
            if Some(f.root) == hit {
                order = f.mult;
            } else {
                coeff *= powi(z - f.root, f.mult);
            }
        }
        LaurentLeading { order, coeff }
    }

    fn matching_factor(&self, z: Cx<T>) -> Option<&Factor<T>> {
        self.factors
            .iter()
            .find(|f| (f.root - z).norm() <= cluster_radius(f.root))
    }

    /// Largest `min(|r|, 1/|r|)` over roots: the geometric decay rate of the
    /// Fourier coefficients. Zero for constants.
    pub fn decay_rate(&self) -> T {
        self.factors
            .iter()
            .map(|f| {
                let r = f.root.norm();
                if r < T::one() {
                    r
                } else {
                    T::one() / r
                }
            })
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_mult(&self) -> u32 {
        self.factors
            .iter()
            .map(|f| f.mult.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Merges roots closer than the clustering radius, summing multiplicities
/// and dropping those that cancel. Output is sorted by (Re, Im).
fn merge_factors<T: Real>(items: impl Iterator<Item = Factor<T>>) -> Vec<Factor<T>> {
    // (weighted root sum, total |mult| weight, signed mult)
    let mut groups: Vec<(Cx<T>, T, i32, Cx<T>)> = Vec::new();
    for f in items {
        let w = T::from_count(f.mult.unsigned_abs() as usize);
        match groups
            .iter_mut()
            .find(|g| (g.3 - f.root).norm() <= cluster_radius(g.3).max(cluster_radius(f.root)))
        {
            Some(g) => {
                g.0 += f.root * w;
                g.1 += w;
                g.2 += f.mult;
                if f.root != g.3 {
                    g.3 = g.0 / g.1;
                }
            }
            None => groups.push((f.root * w, w, f.mult, f.root)),
        }
    }
    let mut out: Vec<Factor<T>> = groups
        .into_iter()
        .filter(|g| g.2 != 0)
        .map(|g| Factor::new(g.3, g.2))
        .collect();
    out.sort_by(|a, b| cmp_re_im(&a.root, &b.root));
    out
}

fn format_root_factor<T: Real>(root: Cx<T>) -> String {
    if root.im == T::zero() {
        if root.re < T::zero() {
            format!("(z+{})", -root.re)
        } else {
            format!("(z-{})", format_complex(root))
        }
    } else {
        format!("(z-({}))", format_complex(root))
    }
}

/// Canonical serialization, e.g. `1 * (z-0.3)^1 * (z+0.4)^-1`.
impl<T: Real> fmt::Display for RationalSymbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constant.im == T::zero() {
            write!(f, "{}", format_complex(self.constant))?;
        } else {
            write!(f, "({})", format_complex(self.constant))?;
        }
        for fac in &self.factors {
            write!(f, " * {}^{}", format_root_factor(fac.root), fac.mult)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    fn sym(c: f64, f: &[(f64, i32)]) -> RationalSymbol<f64> {
        let f: Vec<_> = f.iter().map(|&(r, m)| (re(r), m)).collect();
        RationalSymbol::from_factors(re(c), &f).unwrap()
    }

    #[test]
    fn from_factors_merges_repeats() {
        let s = sym(1.0, &[(0.3, 1), (0.3, 1)]);
        assert_eq!(s.factors(), &[Factor::new(re(0.3), 2)]);
    }

    #[test]
    fn constant_symbol() {
        let s = sym(2.0, &[]);
        assert!(s.is_constant());
        assert_eq!(s.constant(), re(2.0));
        assert!(s.clearance().is_infinite());
    }

    #[test]
    fn from_factors_errors() {
        assert!(matches!(
            RationalSymbol::from_factors(re(1.0), &[(re(1.0), 1)]),
            Err(Error::CircleViolation { .. })
        ));
        assert!(matches!(
            RationalSymbol::from_factors(re(0.0), &[(re(0.3), 1)]),
            Err(Error::ZeroConstant)
        ));
        assert!(matches!(
            RationalSymbol::from_factors(re(1.0), &[(re(0.3), 0)]),
            Err(Error::ZeroMultiplicity { .. })
        ));
        // clearance is configurable
        assert!(RationalSymbol::from_factors_with(re(1.0), &[(re(1.05), 1)], 0.1).is_err());
        assert!(RationalSymbol::from_factors_with(re(1.0), &[(re(1.05), 1)], 0.01).is_ok());
    }

    #[test]
    fn eval_examples() {
        let phi = sym(1.0, &[(0.3, 1), (-0.4, -1)]);
        assert_eq!(phi.eval(re(0.3)).unwrap(), re(0.0));
        let lin = sym(1.0, &[(-2.0, 1)]);
        assert!((lin.eval(re(0.5)).unwrap() - re(2.5)).norm() < 1e-15);
        let pole = sym(1.0, &[(0.5, -1)]);
        assert!((pole.eval(re(0.0)).unwrap() - re(-2.0)).norm() < 1e-15);
        assert!(matches!(pole.eval(re(0.5)), Err(Error::PoleEvaluation { .. })));
    }

    #[test]
    fn multiply_and_invert() {
        let a = sym(1.0, &[(0.3, 1)]);
        let id = a.multiply(&a.invert());
        assert!(id.is_constant());
        assert_eq!(id.constant(), re(1.0));

        let phi = sym(1.0, &[(0.3, 1), (-0.4, -1)]);
        let inv = phi.invert();
        assert_eq!(inv.factors(), &[Factor::new(re(-0.4), 1), Factor::new(re(0.3), -1)]);
        assert_eq!(inv.invert(), phi);

        let six = sym(2.0, &[]).multiply(&sym(3.0, &[]));
        assert_eq!(six.constant(), re(6.0));
    }

    #[test]
    fn orders_and_leading_laurent() {
        let phi = sym(1.0, &[(0.3, 2), (-0.4, -1)]);
        assert_eq!(phi.order_at(re(0.3)), 2);
        assert_eq!(phi.order_at(re(-0.4)), -1);
        assert_eq!(phi.order_at(re(0.0)), 0);

        let at = phi.leading_laurent(re(0.3));
        assert_eq!(at.order, 2);
        assert!((at.coeff - re(1.0 / 0.7)).norm() < 1e-14);
        let at = phi.leading_laurent(re(-0.4));
        assert_eq!(at.order, -1);
        assert!((at.coeff - re(0.49)).norm() < 1e-14);
        let at = phi.leading_laurent(re(0.0));
        assert_eq!(at.order, 0);
        assert!((at.coeff - re(0.225)).norm() < 1e-14);
    }

    #[test]
    fn canonical_serialization() {
        let phi = sym(1.0, &[(-0.4, -1), (0.3, 1)]);
        assert_eq!(phi.to_string(), "1 * (z+0.4)^-1 * (z-0.3)^1");
        let c = RationalSymbol::from_factors(cx(2.0, -1.0), &[(cx(-0.5, 0.2), 2)]).unwrap();
        assert_eq!(c.to_string(), "(2-1i) * (z-(-0.5+0.2i))^2");
    }
}
