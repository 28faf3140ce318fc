//! Simultaneous polynomial root finding (Aberth–Ehrlich) with cluster merging.
//!
//! Multiple roots come out of the iteration as tight clusters whose spread is
//! roughly `eps^(1/m)`. Clusters within [`cluster_radius`] are merged into one
//! root at their centroid. Double roots merge reliably; multiplicities of
//! three or more usually do not, and are returned as nearby simple roots.

use crate::error::{Error, Result};
use crate::scalar::{cx, zero, Cx, Real};

use super::polynomial::Polynomial;

/// Iteration cap for the simultaneous iteration.
pub const MAX_ITERATIONS: usize = 200;
/// Relative step size below which a root is considered converged.
pub const TOL_ROOT: f64 = 1e-12;

/// Distance under which two numerical roots are treated as one.
pub fn cluster_radius<T: Real>(root: Cx<T>) -> T {
    T::lit(1e-7) * root.norm().max(T::one())
}

/// All complex roots of `p` with multiplicities; `sum(mult) == degree`.
pub fn roots_of_polynomial<T: Real>(p: &Polynomial<T>) -> Result<Vec<(Cx<T>, u32)>> {
    let degree = p.degree().ok_or(Error::ZeroSymbol)?;
    let coeffs = p.coeffs();
    let zero_mult = coeffs
        .iter()
        .take_while(|c| c.re == T::zero() && c.im == T::zero())
        .count();
    let reduced = Polynomial::new(coeffs[zero_mult..].to_vec());
    let mut raw = match degree - zero_mult {
        0 => Vec::new(),
        1 => vec![-reduced.coeffs()[0] / reduced.coeffs()[1]],
        _ => aberth(&reduced)?,
    };
    let mut out = merge_clusters(&mut raw);
    for (root, mult) in out.iter_mut() {
        *root = if *mult > 1 {
            polish_multiple(&reduced, *root, *mult)
        } else {
            polish_simple(&reduced, *root)
        };
    }
    if zero_mult > 0 {
        out.push((zero(), zero_mult as u32));
    }
    out.sort_by(|a, b| crate::scalar::cmp_re_im(&a.0, &b.0));
    Ok(out)
}

fn aberth<T: Real>(p: &Polynomial<T>) -> Result<Vec<Cx<T>>> {
    let dp = p.derivative();
    let n = p.degree().unwrap_or(0);
    let mut z = initial_guesses(p);
    let mut done = vec![false; n];
    let tol = T::lit(TOL_ROOT);
    let noise = T::epsilon() * T::lit(4.0) * T::from_count(n + 1);

    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let value = p.eval(zi);
            if value.norm() <= noise * p.weighted_norm(zi) {
                done[i] = true;
                continue;
            }
            let slope = dp.eval(zi);
            let newton = if slope.norm() == T::zero() {
                // stationary point: nudge off it
                cx(T::lit(1e-3), T::lit(1e-3)) * zi.norm().max(T::one())
            } else {
                value / slope
            };
            let repulsion = (0..n)
                .filter(|&j| j != i)
                .map(|j| Cx::<T>::new(T::one(), T::zero()) / (zi - z[j]))
                .fold(zero::<T>(), |a, b| a + b);
            let denom = Cx::new(T::one(), T::zero()) - newton * repulsion;
            let step = if denom.norm() == T::zero() || !crate::scalar::is_finite(denom) {
                newton
            } else {
                newton / denom
            };
            z[i] = zi - step;
            if step.norm() <= tol * z[i].norm().max(T::min_positive_value()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done && done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        what: "Aberth-Ehrlich root finder".into(),
        iterations: MAX_ITERATIONS,
    })
}

/// Starting points on circles read off the upper convex hull of the
/// Newton polygon `(k, log|a_k|)`.
fn initial_guesses<T: Real>(p: &Polynomial<T>) -> Vec<Cx<T>> {
    let a = p.coeffs();
    let n = a.len() - 1;
    let pts: Vec<(usize, f64)> = a
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > T::zero())
        .map(|(k, c)| (k, c.norm().as_f64().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let sigma = 0.7;
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, yi) = w[0];
        let (j, yj) = w[1];
        let count = j - i;
        let radius = ((yi - yj) / count as f64).exp();
        for m in 0..count {
            let angle = std::f64::consts::TAU * m as f64 / count as f64
                + std::f64::consts::TAU * i as f64 / n as f64
                + sigma;
            out.push(cx(
                T::lit(radius * angle.cos()),
                T::lit(radius * angle.sin()),
            ));
        }
    }
    out
}

/// The Aberth stopping rule leaves ~1e-13 relative error on large roots;
/// plain Newton steps on `p` take it to the rounding floor. Keeps whichever
/// iterate has the smallest residual.
fn polish_simple<T: Real>(p: &Polynomial<T>, root: Cx<T>) -> Cx<T> {
    let dp = p.derivative();
    let (mut best, mut best_res) = (root, p.eval(root).norm());
    let mut z = root;
    for _ in 0..3 {
        let slope = dp.eval(z);
        if slope.norm() == T::zero() {
            break;
        }
        z -= p.eval(z) / slope;
        let res = p.eval(z).norm();
        if !(res < best_res) {
            break;
        }
        best = z;
        best_res = res;
    }
    if (best - root).norm() <= cluster_radius(root) {
        best
    } else {
        root
    }
}

/// An `m`-fold root of `p` is a simple root of `p^(m-1)`; a few Newton steps
/// there move the cluster centroid to working precision.
fn polish_multiple<T: Real>(p: &Polynomial<T>, centroid: Cx<T>, mult: u32) -> Cx<T> {
    let mut d = p.clone();
    for _ in 1..mult {
        d = d.derivative();
    }
    let dd = d.derivative();
    let mut z = centroid;
    for _ in 0..8 {
        let slope = dd.eval(z);
        if slope.norm() == T::zero() {
            break;
        }
        let step = d.eval(z) / slope;
        z -= step;
        if step.norm() <= T::epsilon() * z.norm().max(T::one()) {
            break;
        }
    }
    if (z - centroid).norm() <= cluster_radius(centroid) {
        z
    } else {
        centroid
    }
}

fn merge_clusters<T: Real>(roots: &mut [Cx<T>]) -> Vec<(Cx<T>, u32)> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let radius = cluster_radius(roots[i]).max(cluster_radius(roots[j]));
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Cx<T>, u32)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += roots[i];
                g.2 += 1;
            }
            None => groups.push((root, roots[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, m)| (sum / T::from_count(m as usize), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::one;

    fn re(x: f64) -> Cx<f64> {
        cx(x, 0.0)
    }

    #[test]
    fn factorable_quadratic() {
        let p = Polynomial::new(vec![re(0.15), re(-0.8), re(1.0)]);
        let r = roots_of_polynomial(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - re(0.3)).norm() < 1e-14 && r[0].1 == 1);
        assert!((r[1].0 - re(0.5)).norm() < 1e-14 && r[1].1 == 1);
    }

    #[test]
    fn double_root_merges() {
        // z^2 - z + 0.25 = (z - 0.5)^2: the raw iterates split by ~sqrt(eps)
        let p = Polynomial::new(vec![re(0.25), re(-1.0), re(1.0)]);
        let mut raw = aberth(&p).unwrap();
        assert_eq!(raw.len(), 2);
        let spread = (raw[0] - raw[1]).norm();
        assert!(spread <= cluster_radius(raw[0]), "spread {spread:e}");
        let merged = merge_clusters(&mut raw);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].1, 2);
        assert!((merged[0].0 - re(0.5)).norm() < 1e-7);
        let polished = roots_of_polynomial(&p).unwrap();
        assert_eq!(polished.len(), 1);
        assert!((polished[0].0 - re(0.5)).norm() < 1e-14);
    }

    #[test]
    fn monomial_roots_exact() {
        let p = Polynomial::new(vec![re(0.0), re(0.0), re(0.0), re(1.0)]);
        assert_eq!(roots_of_polynomial(&p).unwrap(), vec![(re(0.0), 3)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(roots_of_polynomial(&Polynomial::<f64>::zero()).is_err());
    }

    #[test]
    fn constant_has_no_roots() {
        let p = Polynomial::constant(one::<f64>());
        assert!(roots_of_polynomial(&p).unwrap().is_empty());
    }

    #[test]
    fn complex_coefficients() {
        let roots = [(cx(0.3, 0.4), 1), (cx(-1.2, 0.1), 1), (cx(0.0, -2.0), 1)];
        let p = Polynomial::from_roots(cx(2.0, -1.0), &roots);
        let found = roots_of_polynomial(&p).unwrap();
        assert_eq!(found.len(), 3);
        for (r, _) in roots {
            assert!(found.iter().any(|(f, _)| (f - r).norm() < 1e-12));
        }
    }
}
