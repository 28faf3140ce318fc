//! Orders, tame symbols and their product over the open unit disk.
//!
//! The tame symbol at `z` is evaluated from leading Laurent data: with
//! `phi ~ a (w - z)^m` and `psi ~ b (w - z)^n`,
//! `(phi, psi)_z = (-1)^(m n) b^m / a^n`. No limits are taken numerically.

use serde_json::{json, Value};

use crate::scalar::{cmp_re_im, one, powi, Cx, Real};
use crate::symbolic::{cluster_radius, Factor, RationalSymbol};

/// Sign factor applied in the tame symbol. `Unsigned` drops `(-1)^(mn)` and
/// exists only to demonstrate that the sign is load-bearing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    #[default]
    Signed,
    Unsigned,
}

/// Orders and tame symbol at one point of the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointReport<T: Real> {
    pub z: Cx<T>,
    pub v_phi: i32,
    pub v_psi: i32,
    pub tame: Cx<T>,
}

/// `pi(phi, psi)` together with its contributing points.
#[derive(Debug, Clone, PartialEq)]
pub struct PiReport<T: Real> {
    pub points: Vec<PointReport<T>>,
    pub pi: Cx<T>,
    pub winding_phi: i64,
    pub winding_psi: i64,
}

/// Factors of `phi` with roots in the open unit disk.
pub fn singular_points<T: Real>(phi: &RationalSymbol<T>) -> Vec<Factor<T>> {
    phi.factors()
        .iter()
        .copied()
        .filter(|f| f.root.norm() < T::one())
        .collect()
}

/// Sum of multiplicities inside the disk (argument principle).
pub fn winding_number<T: Real>(phi: &RationalSymbol<T>) -> i64 {
    singular_points(phi).iter().map(|f| f.mult as i64).sum()
}

/// Tame symbol `(phi, psi)_z`.
pub fn tame_symbol_at<T: Real>(phi: &RationalSymbol<T>, psi: &RationalSymbol<T>, z: Cx<T>) -> Cx<T> {
    tame_symbol_with(phi, psi, z, SignConvention::Signed)
}

pub fn tame_symbol_with<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    z: Cx<T>,
    convention: SignConvention,
) -> Cx<T> {
    let a = phi.leading_laurent(z);
    let b = psi.leading_laurent(z);
    let (m, n) = (a.order, b.order);
    let value = powi(b.coeff, m) / powi(a.coeff, n);
    if convention == SignConvention::Signed && (m * n) % 2 != 0 {
        -value
    } else {
        value
    }
}

/// `pi(phi, psi) = prod over z in the disk of (phi, psi)_z^(-1)`.
pub fn pi_product<T: Real>(phi: &RationalSymbol<T>, psi: &RationalSymbol<T>) -> PiReport<T> {
    pi_product_with(phi, psi, SignConvention::Signed)
}

pub fn pi_product_with<T: Real>(
    phi: &RationalSymbol<T>,
    psi: &RationalSymbol<T>,
    convention: SignConvention,
) -> PiReport<T> {
    let mut sites: Vec<Cx<T>> = Vec::new();
    for f in singular_points(phi).into_iter().chain(singular_points(psi)) {
        if !sites
            .iter()
            .any(|s| (*s - f.root).norm() <= cluster_radius(f.root))
        {
            sites.push(f.root);
        }
    }
    sites.sort_by(cmp_re_im);
    let points: Vec<PointReport<T>> = sites
        .into_iter()
        .map(|z| PointReport {
            z,
            v_phi: phi.order_at(z),
            v_psi: psi.order_at(z),
            tame: tame_symbol_with(phi, psi, z, convention),
        })
        .collect();
    let pi = points
        .iter()
        .fold(one::<T>(), |acc, p| acc / p.tame);
    PiReport {
        points,
        pi,
        winding_phi: winding_number(phi),
        winding_psi: winding_number(psi),
    }
}

pub fn cx_json<T: Real>(z: Cx<T>) -> Value {
    json!([z.re.as_f64(), z.im.as_f64()])
}

impl<T: Real> PiReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.iter().map(|p| json!({
                "z": cx_json(p.z),
                "v_phi": p.v_phi,
                "v_psi": p.v_psi,
                "tame": cx_json(p.tame),
            })).collect::<Vec<_>>(),
            "pi": cx_json(self.pi),
            "winding_phi": self.winding_phi,
            "winding_psi": self.winding_psi,
        })
    }
}
