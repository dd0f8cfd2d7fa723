//! Values on the other components of (ℂ∖ℝ)ⁿ expressed through reflections.
//!
//! For a function given by a pure integral (a = 0, b = 0) the value at `z`
//! is a signed sum of conjugated values at the points `Ψ_D(z)`, where `Ψ_D`
//! conjugates the coordinates in `D` and sets the others to `i`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{classify, IndexSet, OffRealPoint, SymmetryClassification, UpperPoint, I};
use crate::error::{HnError, Result};
use crate::measures::QuadratureSpec;
use crate::representation::{DataOracle, FunctionOracle, RepresentationData};

/// A base point and the set of coordinates to reflect.
#[derive(Debug, Clone)]
pub struct ReflectionSpec {
    base: OffRealPoint,
    subset: IndexSet,
}

impl ReflectionSpec {
    /// `subset` must avoid the coordinates equal to `±i`.
    pub fn new(base: OffRealPoint, subset: IndexSet) -> Result<Self> {
        if subset.dim() != base.dim() {
            return Err(HnError::DimensionMismatch {
                expected: base.dim(),
                got: subset.dim(),
            });
        }
        let cls = classify(&base);
        if !subset.is_subset(&cls.generic()) {
            return Err(HnError::precondition(format!(
                "reflection set {subset} meets I+ ∪ I- of the base point"
            )));
        }
        Ok(ReflectionSpec { base, subset })
    }

    pub fn base(&self) -> &OffRealPoint {
        &self.base
    }

    pub fn subset(&self) -> &IndexSet {
        &self.subset
    }
}

/// `Ψ_B(z)`: `conj(z_ℓ)` for `ℓ ∈ B`, `i` otherwise. Defined for any `B`.
pub fn psi(z: &OffRealPoint, b: &IndexSet) -> OffRealPoint {
    let coords = z
        .coords()
        .iter()
        .enumerate()
        .map(|(l, zl)| if b.contains(l + 1) { zl.conj() } else { I })
        .collect();
    OffRealPoint::new(coords).expect("conjugates of off-real points are off-real")
}

pub fn psi_map(spec: &ReflectionSpec) -> OffRealPoint {
    psi(&spec.base, &spec.subset)
}

/// Right-hand side of the reflection formula for a pure-integral function `g`:
///
/// `(sgn|I₋| − 1) Σ_{D ⊆ C₋ ∪ C₊} (−1)^{|D|} (conj g(Ψ_D z) + conj g(i1)) + conj g(i1)`.
///
/// When `I₋ ≠ ∅` this is `conj g(i1)` and no other value is requested.
pub fn symmetric_value_g(g: &dyn FunctionOracle, z: &OffRealPoint) -> Result<Complex64> {
    if g.dim() != z.dim() {
        return Err(HnError::DimensionMismatch {
            expected: g.dim(),
            got: z.dim(),
        });
    }
    let n = z.dim();
    let at_i = g.eval(&UpperPoint::i_vector(n).to_off_real())?.conj();
    let cls = classify(z);
    if !cls.i_minus.is_empty() {
        return Ok(at_i);
    }
    let generic = cls.generic();
    let subsets: Vec<IndexSet> = generic.subsets().collect();
    let terms: Vec<Result<Complex64>> = subsets
        .par_iter()
        .map(|d| {
            let v = if d.is_empty() {
                at_i
            } else {
                g.eval(&psi(z, d))?.conj()
            };
            let sign = if d.len() % 2 == 0 { 1.0 } else { -1.0 };
            Ok((v + at_i) * sign)
        })
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for t in terms {
        sum += t?;
    }
    Ok(at_i - sum)
}

/// The linear part `a + Σ b_ℓ z_ℓ` written out by class: `b_ℓ z_ℓ` on `C₊`,
/// `i b_ℓ` on `I₊`, `−i b_ℓ` on `I₋`, and `b_ℓ z_ℓ` (the coordinate as given) on `C₋`.
pub fn linear_terms(
    a: f64,
    b: &[f64],
    z: &OffRealPoint,
    cls: &SymmetryClassification,
) -> Complex64 {
    let zc = z.coords();
    let mut acc = Complex64::new(a, 0.0);
    for l in cls.c_plus.iter() {
        acc += zc[l - 1] * b[l - 1];
    }
    for l in cls.i_plus.iter() {
        acc += I * b[l - 1];
    }
    for l in cls.i_minus.iter() {
        acc -= I * b[l - 1];
    }
    for l in cls.c_minus.iter() {
        acc += zc[l - 1] * b[l - 1];
    }
    acc
}

/// `q(z)` from `a`, `b`, and the pure-integral part `q0` through the reflection formula.
pub fn symmetric_value_q_with(
    a: f64,
    b: &[f64],
    q0: &dyn FunctionOracle,
    z: &OffRealPoint,
) -> Result<Complex64> {
    if b.len() != z.dim() {
        return Err(HnError::DimensionMismatch {
            expected: b.len(),
            got: z.dim(),
        });
    }
    let cls = classify(z);
    Ok(linear_terms(a, b, z, &cls) + symmetric_value_g(q0, z)?)
}

/// `q(z)` for data `(a, b, μ)`, with `q0` evaluated by quadrature.
pub fn symmetric_value_q(
    data: &RepresentationData,
    z: &OffRealPoint,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let q0 = DataOracle::new(
        RepresentationData::measure_only(data.mu.clone()),
        spec.clone(),
    );
    symmetric_value_q_with(data.a, &data.b, &q0, z)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sensitivity {
    /// 1-based coordinate in `C₊`.
    pub coordinate: usize,
    pub step: f64,
    /// `|q(z + h e_ℓ) − q(z − h e_ℓ)| / (2h)`.
    pub derivative: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub point: Vec<Complex64>,
    pub sensitivities: Vec<Sensitivity>,
    pub max_sensitivity: f64,
    pub tolerance: f64,
    pub independent: bool,
}

/// Default relative step for the central differences.
pub const INDEPENDENCE_STEP: f64 = 1e-4;
pub const INDEPENDENCE_TOLERANCE: f64 = 1e-6;

/// Central-difference sensitivity of `q` to each `C₊` coordinate of `z`
/// (which must have a coordinate in ℂ⁻). `rel_steps` are relative to `|z_ℓ|`.
pub fn check_cplus_independence_oracle(
    q: &dyn FunctionOracle,
    z: &OffRealPoint,
    rel_steps: &[f64],
) -> Result<IndependenceReport> {
    if z.is_upper() {
        return Err(HnError::precondition(
            "the point needs a coordinate in the lower half-plane",
        ));
    }
    if rel_steps.is_empty() || rel_steps.iter().any(|h| !(*h > 0.0)) {
        return Err(HnError::input("steps must be positive"));
    }
    let cls = classify(z);
    let upper: Vec<usize> = cls.c_plus.iter().chain(cls.i_plus.iter()).collect();
    let mut sensitivities = Vec::new();
    for &l in &upper {
        for &rel in rel_steps {
            let zl = z.coords()[l - 1];
            let h = rel * zl.norm();
            if h >= zl.im {
                return Err(HnError::domain(format!(
                    "step {h} would leave the upper half-plane at coordinate {l}"
                )));
            }
            let shifted = |d: f64| {
                let mut c = z.coords().to_vec();
                c[l - 1] += d;
                OffRealPoint::new(c)
            };
            let plus = q.eval(&shifted(h)?)?;
            let minus = q.eval(&shifted(-h)?)?;
            sensitivities.push(Sensitivity {
                coordinate: l,
                step: h,
                derivative: (plus - minus).norm() / (2.0 * h),
            });
        }
    }
    let max_sensitivity = sensitivities
        .iter()
        .map(|s| s.derivative)
        .fold(0.0, f64::max);
    Ok(IndependenceReport {
        point: z.coords().to_vec(),
        sensitivities,
        max_sensitivity,
        tolerance: INDEPENDENCE_TOLERANCE,
        independent: max_sensitivity <= INDEPENDENCE_TOLERANCE,
    })
}

/// Quadrature tolerances tight enough for differences at step `1e-4 |z|`.
pub fn independence_spec() -> QuadratureSpec {
    QuadratureSpec::with_tolerances(1e-11, 1e-13)
}

/// Sensitivity of the pure-integral part `q0` of `data` to its ℂ⁺ coordinates.
pub fn check_cplus_independence(
    data: &RepresentationData,
    z: &OffRealPoint,
    rel_steps: &[f64],
    spec: &QuadratureSpec,
) -> Result<IndependenceReport> {
    let q0 = DataOracle::new(
        RepresentationData::measure_only(data.mu.clone()),
        spec.clone(),
    );
    check_cplus_independence_oracle(&q0, z, rel_steps)
}
