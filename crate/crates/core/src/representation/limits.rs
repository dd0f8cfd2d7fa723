//! Extrapolation of sampled limits.
//!
//! Samples `v(h_k)` with `h_k → 0` are extrapolated to `h = 0` with a Neville
//! table (polynomial in `h`). Each column removes one more power of `h`. The
//! reported estimate is the table entry whose difference from its predecessor
//! in the same column is smallest (a lone last entry is compared with the newest
//! entry of the previous column); that difference is the error estimate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HnError, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LimitOptions {
    /// Highest power of `h` eliminated.
    pub max_order: usize,
    /// The limit is rejected when the error estimate exceeds `tolerance · (1 + |value|)`.
    pub tolerance: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            max_order: 1,
            tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Extrapolation {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Column of the table the estimate came from.
    pub order: usize,
}

/// Extrapolate `values[k] ≈ v(h[k])` to `h = 0`.
pub fn extrapolate(h: &[f64], values: &[Complex64], opts: &LimitOptions) -> Result<Extrapolation> {
    if h.len() != values.len() || h.len() < 2 {
        return Err(HnError::input("extrapolation needs at least two samples"));
    }
    let m = h.len();
    let mut best: Option<Extrapolation> = None;
    let mut consider = |value: Complex64, diff: f64, order: usize| {
        if diff.is_finite() && best.as_ref().is_none_or(|b| diff <= b.error_estimate) {
            best = Some(Extrapolation {
                value,
                error_estimate: diff,
                order,
            });
        }
    };
    let mut column: Vec<Complex64> = values.to_vec();
    for w in column.windows(2) {
        consider(w[1], (w[1] - w[0]).norm(), 0);
    }
    for j in 1..=opts.max_order.min(m - 1) {
        let next: Vec<Complex64> = (0..m - j)
            .map(|k| {
                let (hk, hkj) = (h[k], h[k + j]);
                column[k + 1] + (column[k + 1] - column[k]) * (hkj / (hk - hkj))
            })
            .collect();
        if let [v] = next[..] {
            consider(v, (v - column[1]).norm(), j);
        }
        for w in next.windows(2) {
            consider(w[1], (w[1] - w[0]).norm(), j);
        }
        column = next;
    }
    let best = best.ok_or_else(|| HnError::NoConvergence("no finite samples".into()))?;
    if best.error_estimate > opts.tolerance * (1.0 + best.value.norm()) {
        return Err(HnError::NoConvergence(format!(
            "estimate {} with error {:.3e} exceeds tolerance",
            best.value, best.error_estimate
        )));
    }
    Ok(best)
}
