//! Functions given by data `(a, b, μ)` and recovery of that data from values.

pub mod limits;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{
    random_upper_point, slot_fill, Anchor, NonTangentialPath, OffRealPoint, UpperPoint,
};
use crate::error::{HnError, Result};
use crate::kernels::{kernel_unchecked, poisson_unchecked};
use crate::measures::{integrate, Measure, QuadratureSpec};
use limits::{extrapolate, LimitOptions};

/// Tolerance on "nonnegative imaginary part" when validating oracle values.
pub const EPS_HN: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawData")]
pub struct RepresentationData {
    pub a: f64,
    pub b: Vec<f64>,
    pub mu: Measure,
}

#[derive(Deserialize)]
struct RawData {
    #[serde(default)]
    a: f64,
    #[serde(default)]
    b: Option<Vec<f64>>,
    mu: Measure,
}

impl TryFrom<RawData> for RepresentationData {
    type Error = HnError;
    fn try_from(r: RawData) -> Result<Self> {
        let n = r.mu.dim();
        RepresentationData::new(r.a, r.b.unwrap_or_else(|| vec![0.0; n]), r.mu)
    }
}

impl RepresentationData {
    pub fn new(a: f64, b: Vec<f64>, mu: Measure) -> Result<Self> {
        if !a.is_finite() {
            return Err(HnError::input("a must be finite"));
        }
        if b.len() != mu.dim() {
            return Err(HnError::DimensionMismatch {
                expected: mu.dim(),
                got: b.len(),
            });
        }
        if let Some(x) = b.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(HnError::input(format!(
                "b entries must be nonnegative, got {x}"
            )));
        }
        Ok(RepresentationData { a, b, mu })
    }

    /// Data `(0, 0, μ)`.
    pub fn measure_only(mu: Measure) -> Self {
        let n = mu.dim();
        RepresentationData {
            a: 0.0,
            b: vec![0.0; n],
            mu,
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    fn linear_part(&self, z: &[Complex64]) -> Complex64 {
        z.iter()
            .zip(&self.b)
            .fold(Complex64::new(self.a, 0.0), |acc, (zl, bl)| acc + zl * bl)
    }
}

/// A value of q together with the quadrature diagnostics behind it.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub converged: bool,
}

impl Evaluation {
    fn require(self) -> Result<Complex64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(HnError::NotConverged {
                value: self.value,
                error_estimate: self.error_estimate,
                panels: self.panels_used,
            })
        }
    }
}

fn check_dim(data: &RepresentationData, n: usize) -> Result<()> {
    if data.dim() != n {
        return Err(HnError::DimensionMismatch {
            expected: data.dim(),
            got: n,
        });
    }
    Ok(())
}

/// `a + Σ b_ℓ z_ℓ + π⁻ⁿ ∫ K_n(z, t) dμ(t)` with diagnostics, on (ℂ∖ℝ)ⁿ.
pub fn evaluate_q_report(
    data: &RepresentationData,
    z: &OffRealPoint,
    spec: &QuadratureSpec,
) -> Result<Evaluation> {
    check_dim(data, z.dim())?;
    spec.validate()?;
    let zc = z.coords();
    let scale = PI.powi(zc.len() as i32).recip();
    let r = integrate(&data.mu, &|t: &[f64]| kernel_unchecked(zc, t), spec);
    Ok(Evaluation {
        value: data.linear_part(zc) + r.value * scale,
        error_estimate: r.error_estimate * scale,
        panels_used: r.panels_used,
        converged: r.converged,
    })
}

pub fn evaluate_q(
    data: &RepresentationData,
    z: &UpperPoint,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    evaluate_q_report(data, &z.to_off_real(), spec)?.require()
}

pub fn evaluate_q_extended(
    data: &RepresentationData,
    z: &OffRealPoint,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    evaluate_q_report(data, z, spec)?.require()
}

/// `Σ b_ℓ Im z_ℓ + π⁻ⁿ ∫ P_n(z, t) dμ(t)`.
pub fn evaluate_im_q(
    data: &RepresentationData,
    z: &UpperPoint,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_dim(data, z.dim())?;
    spec.validate()?;
    let zc = z.coords();
    let scale = PI.powi(zc.len() as i32).recip();
    let r = integrate(
        &data.mu,
        &|t: &[f64]| Complex64::new(poisson_unchecked(zc, t), 0.0),
        spec,
    );
    let lin: f64 = zc.iter().zip(&data.b).map(|(zl, bl)| bl * zl.im).sum();
    let total = lin + r.value.re * scale;
    if r.converged {
        Ok(total)
    } else {
        Err(HnError::NotConverged {
            value: Complex64::new(total, 0.0),
            error_estimate: r.error_estimate * scale,
            panels: r.panels_used,
        })
    }
}

/// A function on (ℂ∖ℝ)ⁿ that can be queried pointwise.
pub trait FunctionOracle: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &OffRealPoint) -> Result<Complex64>;
}

/// Oracle backed by a closure on coordinate slices.
pub struct FnOracle<F> {
    n: usize,
    f: F,
}

pub fn oracle_fn<F>(n: usize, f: F) -> FnOracle<F>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    FnOracle { n, f }
}

impl<F> FunctionOracle for FnOracle<F>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, z: &OffRealPoint) -> Result<Complex64> {
        if z.dim() != self.n {
            return Err(HnError::DimensionMismatch {
                expected: self.n,
                got: z.dim(),
            });
        }
        Ok((self.f)(z.coords()))
    }
}

/// Oracle evaluating data by quadrature.
#[derive(Debug, Clone)]
pub struct DataOracle {
    pub data: RepresentationData,
    pub spec: QuadratureSpec,
}

impl DataOracle {
    pub fn new(data: RepresentationData, spec: QuadratureSpec) -> Self {
        DataOracle { data, spec }
    }
}

impl FunctionOracle for DataOracle {
    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn eval(&self, z: &OffRealPoint) -> Result<Complex64> {
        evaluate_q_extended(&self.data, z, &self.spec)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderSample {
    pub scale: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub quantity: String,
    pub value: f64,
    pub error_estimate: f64,
    pub extrapolation_order: usize,
    /// Imaginary part of the extrapolated (nominally real) limit.
    pub imaginary_residual: f64,
    pub samples: Vec<LadderSample>,
    pub herglotz_violations: usize,
    pub clamped: bool,
    pub warnings: Vec<String>,
}

fn eval_counting(q: &dyn FunctionOracle, z: Vec<Complex64>) -> Result<(Complex64, bool)> {
    let p = OffRealPoint::new(z)?;
    let v = q.eval(&p)?;
    let violation = p.is_upper() && v.im < -EPS_HN;
    Ok((v, violation))
}

/// Sample `transform(w, q(point(w)))` along the path and extrapolate.
fn limit_along<P, T>(
    quantity: &str,
    q: &dyn FunctionOracle,
    path: &NonTangentialPath,
    point: P,
    transform: T,
    opts: &LimitOptions,
) -> Result<RecoveryReport>
where
    P: Fn(Complex64) -> Vec<Complex64> + Sync,
    T: Fn(Complex64, Complex64) -> Complex64 + Sync,
{
    let ws = path.points();
    let evals: Vec<Result<(Complex64, bool)>> =
        ws.par_iter().map(|&w| eval_counting(q, point(w))).collect();
    let mut samples = Vec::with_capacity(ws.len());
    let mut violations = 0;
    for ((&w, &s), e) in ws.iter().zip(&path.ladder).zip(evals) {
        let (v, bad) = e?;
        violations += bad as usize;
        samples.push(LadderSample {
            scale: s,
            value: transform(w, v),
        });
    }
    let h: Vec<f64> = match path.anchor {
        Anchor::Infinity => path.ladder.iter().map(|s| s.recip()).collect(),
        Anchor::Finite(_) => path.ladder.clone(),
    };
    let values: Vec<Complex64> = samples.iter().map(|s| s.value).collect();
    let ex = extrapolate(&h, &values, opts)?;
    let mut warnings = Vec::new();
    if violations > 0 {
        warnings.push(format!(
            "{violations} oracle value(s) had imaginary part below -{EPS_HN:e}"
        ));
    }
    let imaginary_residual = ex.value.im.abs();
    if imaginary_residual > opts.tolerance * (1.0 + ex.value.re.abs()) {
        warnings.push(format!("limit has imaginary part {:.3e}", ex.value.im));
    }
    Ok(RecoveryReport {
        quantity: quantity.to_string(),
        value: ex.value.re,
        error_estimate: ex.error_estimate,
        extrapolation_order: ex.order,
        imaginary_residual,
        samples,
        herglotz_violations: violations,
        clamped: false,
        warnings,
    })
}

fn check_slot(q: &dyn FunctionOracle, j: usize) -> Result<()> {
    if j == 0 || j > q.dim() {
        return Err(HnError::input(format!(
            "slot {j} is outside 1..={}",
            q.dim()
        )));
    }
    Ok(())
}

/// `Re q(i, …, i)`.
pub fn recover_a(q: &dyn FunctionOracle) -> Result<f64> {
    Ok(q.eval(&UpperPoint::i_vector(q.dim()).to_off_real())?.re)
}

/// `lim q(⌊iy at j, i elsewhere⌉) / (iy)` as `y → ∞` along `path`.
pub fn recover_b(
    q: &dyn FunctionOracle,
    j: usize,
    path: &NonTangentialPath,
) -> Result<RecoveryReport> {
    recover_b_with(q, j, path, &LimitOptions::default())
}

pub fn recover_b_with(
    q: &dyn FunctionOracle,
    j: usize,
    path: &NonTangentialPath,
    opts: &LimitOptions,
) -> Result<RecoveryReport> {
    check_slot(q, j)?;
    if path.anchor != Anchor::Infinity {
        return Err(HnError::precondition("recover_b needs a path to infinity"));
    }
    let n = q.dim();
    let mut r = limit_along(
        &format!("b_{j}"),
        q,
        path,
        |w| slot_fill(n, j, w),
        |w, v| v / w,
        opts,
    )?;
    if r.value < 0.0 {
        if -r.value <= r.error_estimate.max(1e-8) {
            r.warnings
                .push(format!("negative estimate {:.3e} clamped to 0", r.value));
            r.value = 0.0;
            r.clamped = true;
        } else {
            r.warnings.push(
                "estimate is negative beyond its error bar; oracle may not be Herglotz".into(),
            );
        }
    }
    Ok(r)
}

/// `lim z_j q(⌊z_j at j, i elsewhere⌉)` as `z_j → 0` along `path`.
pub fn recover_c(
    q: &dyn FunctionOracle,
    j: usize,
    path: &NonTangentialPath,
) -> Result<RecoveryReport> {
    check_slot(q, j)?;
    if path.anchor != Anchor::Finite(0.0) {
        return Err(HnError::precondition(
            "recover_c needs a path anchored at 0",
        ));
    }
    let n = q.dim();
    let mut r = limit_along(
        &format!("c_{j}"),
        q,
        path,
        |w| slot_fill(n, j, w),
        |w, v| w * v,
        &LimitOptions::default(),
    )?;
    if r.value > r.error_estimate.max(1e-8) {
        r.warnings.push(
            "estimate is positive beyond its error bar; expected a non-positive limit".into(),
        );
    }
    Ok(r)
}

/// `π lim (t0 − z) q(z)` as `z → t0` — the mass of μ at `t0` (one variable).
pub fn recover_point_mass_1d(
    q: &dyn FunctionOracle,
    t0: f64,
    path: &NonTangentialPath,
) -> Result<RecoveryReport> {
    if q.dim() != 1 {
        return Err(HnError::precondition(
            "point-mass recovery is for one variable",
        ));
    }
    if path.anchor != Anchor::Finite(t0) {
        return Err(HnError::precondition("path must be anchored at t0"));
    }
    limit_along(
        "point_mass",
        q,
        path,
        |w| vec![w],
        |w, v| (Complex64::new(t0, 0.0) - w) * v * PI,
        &LimitOptions::default(),
    )
}

/// `lim q(z)/z` as `z → ∞` (one variable).
pub fn slope_at_infinity_1d(
    q: &dyn FunctionOracle,
    path: &NonTangentialPath,
) -> Result<RecoveryReport> {
    if q.dim() != 1 {
        return Err(HnError::precondition("slope recovery is for one variable"));
    }
    if path.anchor != Anchor::Infinity {
        return Err(HnError::precondition(
            "slope recovery needs a path to infinity",
        ));
    }
    limit_along(
        "slope",
        q,
        path,
        |w| vec![w],
        |w, v| v / w,
        &LimitOptions::default(),
    )
}

/// A test function ψ on ℝⁿ with `|ψ(x)| ≤ bound · Π (1 + x_ℓ²)⁻¹`.
pub struct TestFunction<'a> {
    pub f: &'a (dyn Fn(&[f64]) -> f64 + Sync),
    pub bound: f64,
}

/// `Π (1 + x_ℓ²)⁻¹`.
pub fn lorentzian_product(x: &[f64]) -> f64 {
    x.iter().map(|v| 1.0 / (1.0 + v * v)).product()
}

/// `y ↦ ∫ ψ(x) Im q(x + iy) dx` sampled on `y_ladder` and extrapolated to `y = 0`,
/// which is `∫ ψ dμ`.
pub fn stieltjes_inverse(
    q: &dyn FunctionOracle,
    psi: &TestFunction<'_>,
    y_ladder: &[f64],
    spec: &QuadratureSpec,
) -> Result<RecoveryReport> {
    if y_ladder.len() < 2
        || y_ladder.iter().any(|y| !(*y > 0.0))
        || y_ladder.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(HnError::input(
            "y ladder must be positive and strictly decreasing",
        ));
    }
    if !(psi.bound.is_finite() && psi.bound >= 0.0) {
        return Err(HnError::input("test-function bound must be finite"));
    }
    let n = q.dim();
    let leb = Measure::lebesgue(n);
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for &y in y_ladder {
        let f = |x: &[f64]| {
            let z: Vec<Complex64> = x.iter().map(|&xl| Complex64::new(xl, y)).collect();
            let p = OffRealPoint::new(z).expect("upper point");
            match q.eval(&p) {
                Ok(v) => Complex64::new((psi.f)(x) * v.im, 0.0),
                Err(_) => Complex64::new(f64::NAN, 0.0),
            }
        };
        let r = integrate(&leb, &f, spec);
        if !r.converged {
            warnings.push(format!(
                "quadrature at y = {y:e} did not converge (error estimate {:.3e})",
                r.error_estimate
            ));
        }
        samples.push(LadderSample {
            scale: y,
            value: r.value,
        });
    }
    let values: Vec<Complex64> = samples.iter().map(|s| s.value).collect();
    let opts = LimitOptions {
        max_order: 3,
        ..LimitOptions::default()
    };
    let ex = extrapolate(y_ladder, &values, &opts)?;
    Ok(RecoveryReport {
        quantity: "stieltjes".into(),
        value: ex.value.re,
        error_estimate: ex.error_estimate,
        extrapolation_order: ex.order,
        imaginary_residual: 0.0,
        samples,
        herglotz_violations: 0,
        clamped: false,
        warnings,
    })
}

/// Default y-ladder for Stieltjes inversion: `2⁻¹, …, 2⁻⁴`.
pub fn default_stieltjes_ladder() -> Vec<f64> {
    (1..=4).map(|k| 2f64.powi(-k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConstancyVerdict {
    /// `Im q(sample) > ε_hn`, so nothing follows.
    NotApplicable { im: f64 },
    Constant {
        value: Complex64,
        max_deviation: f64,
    },
    /// Imaginary part vanished but the function moved — not Herglotz.
    NotConstant {
        value: Complex64,
        max_deviation: f64,
    },
}

/// If `Im q(sample) ≤ ε_hn`, check on 50 random points that q is constant.
pub fn constancy_check(
    q: &dyn FunctionOracle,
    sample: &UpperPoint,
    seed: u64,
) -> Result<ConstancyVerdict> {
    let q0 = q.eval(&sample.to_off_real())?;
    if q0.im > EPS_HN {
        return Ok(ConstancyVerdict::NotApplicable { im: q0.im });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev: f64 = 0.0;
    for _ in 0..50 {
        let n = q.dim();
        let p = random_upper_point(&mut rng, n);
        max_dev = max_dev.max((q.eval(&p.to_off_real())? - q0).norm());
    }
    if max_dev <= 1e-8 * (1.0 + q0.norm()) {
        Ok(ConstancyVerdict::Constant {
            value: q0,
            max_deviation: max_dev,
        })
    } else {
        Ok(ConstancyVerdict::NotConstant {
            value: q0,
            max_deviation: max_dev,
        })
    }
}
