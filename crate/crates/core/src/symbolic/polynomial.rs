use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{one, zero, Cx, Real};

/// Dense polynomial with complex coefficients in ascending degree.
///
/// The zero polynomial is stored with an empty coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Real> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> Polynomial<T> {
    /// Builds a polynomial, trimming exact trailing zeros.
    pub fn new(coeffs: Vec<Cx<T>>) -> Self {
        let mut p = Self { coeffs };
        p.trim_exact();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::new(vec![zero(), one()])
    }

    /// `(z - root)^mult` expanded.
    pub fn from_root(root: Cx<T>, mult: u32) -> Self {
        let mut coeffs = vec![one::<T>()];
        for _ in 0..mult {
            coeffs = mul_linear(&coeffs, root);
        }
        Self { coeffs }
    }

    /// Expanded product of `(z - root)^mult` over all pairs, times `constant`.
    pub fn from_roots<'a, I>(constant: Cx<T>, roots: I) -> Self
    where
        I: IntoIterator<Item = &'a (Cx<T>, u32)>,
    {
        let mut coeffs = vec![constant];
        for &(r, m) in roots {
            for _ in 0..m {
                coeffs = mul_linear(&coeffs, r);
            }
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Cx<T> {
        self.coeffs.last().copied().unwrap_or_else(zero)
    }

    /// Maximum coefficient modulus.
    pub fn norm_inf(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), T::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, w: Cx<T>) -> Cx<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(zero(), |acc, &c| acc * w + c)
    }

    /// `sum |a_k| |w|^k`, the scale against which a residual at `w` is judged.
    pub fn weighted_norm(&self, w: Cx<T>) -> T {
        let r = w.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_count(k))
                .collect(),
        )
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Drops trailing coefficients below `rel * norm_inf`; used after sums
    /// where cancellation leaves rounding debris in the top degree.
    pub fn trim_relative(&mut self, rel: T) {
        let cutoff = self.norm_inf() * rel;
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= cutoff {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    fn trim_exact(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.re == T::zero() && c.im == T::zero()) {
            self.coeffs.pop();
        }
    }
}

fn mul_linear<T: Real>(coeffs: &[Cx<T>], root: Cx<T>) -> Vec<Cx<T>> {
    let mut out = vec![zero::<T>(); coeffs.len() + 1];
    for (k, &c) in coeffs.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * root;
    }
    out
}

impl<T: Real> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or_else(zero)
                    + rhs.coeffs.get(k).copied().unwrap_or_else(zero)
            })
            .collect();
        Polynomial::new(coeffs)
    }
}

impl<T: Real> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl<T: Real> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        self + &(-rhs)
    }
}

impl<T: Real> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![zero::<T>(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    #[test]
    fn expansion_from_roots() {
        let p = Polynomial::from_roots(one(), &[(re(0.3), 1), (re(0.5), 1)]);
        let want = [re(0.15), re(-0.8), re(1.0)];
        for (a, b) in p.coeffs().iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = Polynomial::new(vec![re(1.0), re(2.0)]);
        let b = Polynomial::new(vec![re(-1.0), re(0.0), re(1.0)]);
        let w = cx(0.2, 0.7);
        assert!(((&a * &b).eval(w) - a.eval(w) * b.eval(w)).norm() < 1e-14);
        assert!(((&a + &b).eval(w) - a.eval(w) - b.eval(w)).norm() < 1e-14);
        assert!((&a - &a).is_zero());
        assert_eq!(b.derivative().coeffs(), &[re(0.0), re(2.0)]);
    }
}
