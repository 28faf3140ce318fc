use crate::error::{Error, Result};
use crate::scalar::{one, Cx, Real};
use crate::symbolic::RationalSymbol;
use crate::tame::winding_number;

/// `phi = minus * plus` for a symbol of winding number zero.
///
/// `plus` carries the constant and the factors with roots outside the disk,
/// so its Toeplitz section is lower triangular. `minus` carries the factors
/// with roots inside; because their multiplicities sum to zero it equals
/// `prod (1 - r/z)^m`, a series in `1/z` with constant term 1, and its
/// section is upper triangular. Then `T_phi^{-1} = T_{1/plus} T_{1/minus}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhFactorization<T: Real> {
    pub plus: RationalSymbol<T>,
    pub minus: RationalSymbol<T>,
    pub winding: i64,
}

pub fn wiener_hopf<T: Real>(phi: &RationalSymbol<T>) -> Result<WhFactorization<T>> {
    let winding = winding_number(phi);
    if winding != 0 {
        return Err(Error::WindingNonZero { winding });
    }
    Ok(WhFactorization {
        plus: phi.restrict(phi.constant(), |f| f.root.norm() > T::one()),
        minus: phi.restrict(one(), |f| f.root.norm() < T::one()),
        winding,
    })
}

impl<T: Real> WhFactorization<T> {
    /// Largest deviation of `minus * plus` from `phi` over `samples` circle points.
    pub fn reconstruction_error(&self, phi: &RationalSymbol<T>, samples: usize) -> Result<T> {
        let product = self.minus.multiply(&self.plus);
        let mut worst = T::zero();
        for j in 0..samples {
            let theta = T::TAU() * T::from_count(j) / T::from_count(samples);
            let w = Cx::new(theta.cos(), theta.sin());
            let want = phi.eval(w)?;
            worst = worst.max((product.eval(w)? - want).norm() / want.norm().max(T::one()));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;
    use crate::symbolic::Factor;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    fn sym(c: f64, f: &[(f64, i32)]) -> RationalSymbol<f64> {
        let f: Vec<_> = f.iter().map(|&(r, m)| (re(r), m)).collect();
        RationalSymbol::from_factors(re(c), &f).unwrap()
    }

    #[test]
    fn split_examples() {
        let phi = sym(1.0, &[(0.3, 1), (-0.4, -1)]);
        let wh = wiener_hopf(&phi).unwrap();
        assert!(wh.plus.is_constant());
        assert_eq!(wh.plus.constant(), re(1.0));
        assert_eq!(wh.minus, phi);
        assert!(wh.reconstruction_error(&phi, 64).unwrap() < 1e-12);

        let phi = sym(1.0, &[(3.0, 1)]);
        let wh = wiener_hopf(&phi).unwrap();
        assert_eq!(wh.plus.factors(), &[Factor::new(re(3.0), 1)]);
        assert!(wh.minus.is_constant());

        assert!(matches!(
            wiener_hopf(&sym(1.0, &[(0.3, 1)])),
            Err(Error::WindingNonZero { winding: 1 })
        ));
    }
}
