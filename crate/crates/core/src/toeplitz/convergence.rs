//! Doubling driver for sequences of compressed determinants.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use crate::tame::cx_json;

/// Smallest starting size accepted by [`converge_determinant`].
pub const MIN_M0: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceSample<T: Real> {
    pub m: usize,
    pub det: Cx<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T: Real> {
    /// Strictly increasing in `m`.
    pub samples: Vec<ConvergenceSample<T>>,
    pub limit: Cx<T>,
    /// Last successive difference; infinite with a single sample.
    pub err_estimate: T,
    pub converged: bool,
}

/// Evaluates at `m0, 2 m0, 4 m0, ...` (at most `max_doublings` doublings)
/// until successive values differ by less than `tol * max(1, |value|)`.
///
/// Running out of doublings is not an error: the report comes back with
/// `converged = false` and callers decide what to do with it.
pub fn converge_determinant<T, F>(
    mut evaluator: F,
    m0: usize,
    tol: T,
    max_doublings: usize,
) -> Result<ConvergenceReport<T>>
where
    T: Real,
    F: FnMut(usize) -> Result<Cx<T>>,
{
    if m0 < MIN_M0 {
        return Err(Error::InvalidArgument(format!("m0 must be at least {MIN_M0}, got {m0}")));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut samples = Vec::with_capacity(max_doublings + 1);
    let mut m = m0;
    let mut err = T::infinity();
    let mut converged = false;
    for step in 0..=max_doublings {
        let det = evaluator(m)?;
        if let Some(prev) = samples.last() {
            let prev: &ConvergenceSample<T> = prev;
            err = (det - prev.det).norm();
            samples.push(ConvergenceSample { m, det });
            if err < tol * det.norm().max(T::one()) {
                converged = true;
                break;
            }
        } else {
            samples.push(ConvergenceSample { m, det });
        }
        if step < max_doublings {
            m = m.checked_mul(2).ok_or_else(|| Error::InvalidArgument("size overflow".into()))?;
        }
    }
    let limit = samples.last().map(|s| s.det).expect("at least one sample");
    Ok(ConvergenceReport {
        samples,
        limit,
        err_estimate: err,
        converged,
    })
}

impl<T: Real> ConvergenceReport<T> {
    /// `NoConvergence` unless the run converged.
    pub fn require_converged(&self, what: &str) -> Result<&Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                what: what.to_string(),
                iterations: self.samples.len(),
            })
        }
    }

    /// `{"samples":[[M,[re,im]],...],"limit":[re,im],"err":x,"converged":b}`,
    /// plus `"method"` when given. A non-finite error estimate is `null`.
    pub fn to_json(&self, method: Option<&str>) -> Value {
        let samples: Vec<Value> = self
            .samples
            .iter()
            .map(|s| json!([s.m, cx_json(s.det)]))
            .collect();
        let err = self.err_estimate.as_f64();
        let mut v = json!({
            "samples": samples,
            "limit": cx_json(self.limit),
            "err": if err.is_finite() { json!(err) } else { Value::Null },
            "converged": self.converged,
        });
        if let Some(m) = method {
            v["method"] = json!(m);
        }
        v
    }

    /// One `M,re,im,abs_err` row per sample, `abs_err` measured against `reference`.
    pub fn to_csv_rows(&self, reference: Cx<T>) -> Vec<String> {
        self.samples
            .iter()
            .map(|s| {
                format!(
                    "{},{:e},{:e},{:e}",
                    s.m,
                    s.det.re.as_f64(),
                    s.det.im.as_f64(),
                    (s.det - reference).norm().as_f64()
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn constant_converges_after_two_samples() {
        let r = converge_determinant(|_| Ok(cx(2.5, -1.0)), 16, 1e-8, 6).unwrap();
        assert!(r.converged);
        assert_eq!(r.samples.len(), 2);
        assert_eq!(r.limit, cx(2.5, -1.0));
        assert_eq!(r.err_estimate, 0.0);
    }

    #[test]
    fn geometric_sequence() {
        let r = converge_determinant(|m| Ok(cx(2.0 + 0.5f64.powi(m as i32), 0.0)), 8, 1e-8, 6).unwrap();
        assert!(r.converged);
        assert!((r.limit - cx(2.0, 0.0)).norm() < 1e-8);
        assert!((r.limit - r.samples.last().unwrap().det).norm() <= r.err_estimate);
    }

    #[test]
    fn oscillation_does_not_converge() {
        let r = converge_determinant(
            |m| Ok(cx(if m.trailing_zeros() % 2 == 0 { 1.0 } else { -1.0 }, 0.0)),
            8,
            1e-8,
            4,
        )
        .unwrap();
        assert!(!r.converged);
        assert_eq!(r.samples.len(), 5);
        assert!(r.samples.windows(2).all(|w| w[0].m < w[1].m));
        assert!(matches!(r.require_converged("osc"), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn preconditions() {
        assert!(converge_determinant(|_| Ok(cx(1.0, 0.0)), 4, 1e-8, 3).is_err());
        assert!(converge_determinant(|_| Ok(cx(1.0, 0.0)), 8, 0.0, 3).is_err());
    }

    #[test]
    fn json_shape() {
        let r = converge_determinant(|_| Ok(cx(1.0, 0.0)), 8, 1e-8, 3).unwrap();
        let v = r.to_json(Some("delta3x3"));
        assert_eq!(v["method"], "delta3x3");
        assert_eq!(v["samples"][0][0], 8);
        assert_eq!(v["converged"], true);
        assert_eq!(r.to_csv_rows(cx(1.0, 0.0))[1], "16,1e0,0e0,0e0");
    }
}
