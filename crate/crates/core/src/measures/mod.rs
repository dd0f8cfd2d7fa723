//! Positive Borel measures on ℝᵏ and integration against them.
//!
//! Absolutely continuous and hyperplane-supported parts are integrated after the
//! substitution `t = tan s`, which maps ℝᵏ onto the box `(-π/2, π/2)ᵏ`.

pub mod cubature;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HnError, Result};
use crate::kernels::cayley_angle;
use cubature::{integrate_box, CubatureOptions, EmbeddedRule};

type DensityFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A nonnegative density on ℝᵏ with a decay certificate
/// `density(t) ≤ bound · Π (1 + t_ℓ²)^exponent`.
#[derive(Clone)]
pub struct Density {
    name: String,
    func: Arc<DensityFn>,
    pub bound: f64,
    pub exponent: f64,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("name", &self.name)
            .field("bound", &self.bound)
            .field("exponent", &self.exponent)
            .finish()
    }
}

/// Names accepted by [`Density::builtin`].
pub const BUILTIN_DENSITIES: [&str; 3] = ["one", "inv_one_plus_t2_product", "one_plus_t2_product"];

impl Density {
    pub fn builtin(name: &str) -> Result<Self> {
        let (func, bound, exponent): (Arc<DensityFn>, f64, f64) = match name {
            "one" => (Arc::new(|_: &[f64]| 1.0), 1.0, 0.0),
            "inv_one_plus_t2_product" => (
                Arc::new(|t: &[f64]| t.iter().map(|x| 1.0 / (1.0 + x * x)).product()),
                1.0,
                -1.0,
            ),
            // violates the growth condition; kept as a negative input
            "one_plus_t2_product" => (
                Arc::new(|t: &[f64]| t.iter().map(|x| 1.0 + x * x).product()),
                1.0,
                1.0,
            ),
            other => {
                return Err(HnError::input(format!(
                    "unknown density '{other}' (known: {})",
                    BUILTIN_DENSITIES.join(", ")
                )))
            }
        };
        Ok(Density {
            name: name.to_string(),
            func,
            bound,
            exponent,
        })
    }

    /// A caller-supplied density. It cannot be serialized back to JSON unless
    /// `name` is also a builtin.
    pub fn custom(
        name: impl Into<String>,
        func: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        bound: f64,
        exponent: f64,
    ) -> Self {
        Density {
            name: name.into(),
            func: Arc::new(func),
            bound,
            exponent,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        (self.func)(t)
    }
}

/// A positive Borel measure on ℝᵏ.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MeasureSpec", into = "MeasureSpec")]
pub enum Measure {
    LebesgueDensity {
        k: usize,
        density: Density,
    },
    /// `scale · δ(normal·t − offset) dt`, i.e. surface measure times `scale / |normal|`.
    HyperplaneLebesgue {
        normal: Vec<f64>,
        offset: f64,
        scale: f64,
    },
    PointMass {
        location: Vec<f64>,
        weight: f64,
    },
    Scaled {
        factor: f64,
        inner: Box<Measure>,
    },
    Sum {
        terms: Vec<Measure>,
    },
}

/// JSON form of [`Measure`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureSpec {
    LebesgueDensity {
        k: usize,
        #[serde(default = "default_density")]
        density: String,
    },
    Hyperplane {
        normal: Vec<f64>,
        #[serde(default)]
        offset: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    PointMass {
        location: Vec<f64>,
        weight: f64,
    },
    Scaled {
        factor: f64,
        inner: Box<MeasureSpec>,
    },
    Sum {
        terms: Vec<MeasureSpec>,
    },
}

fn default_density() -> String {
    "one".into()
}

fn one() -> f64 {
    1.0
}

impl TryFrom<MeasureSpec> for Measure {
    type Error = HnError;

    fn try_from(spec: MeasureSpec) -> Result<Self> {
        match spec {
            MeasureSpec::LebesgueDensity { k, density } => {
                Measure::with_density(k, Density::builtin(&density)?)
            }
            MeasureSpec::Hyperplane {
                normal,
                offset,
                scale,
            } => Measure::hyperplane(normal, offset, scale),
            MeasureSpec::PointMass { location, weight } => Measure::point_mass(location, weight),
            MeasureSpec::Scaled { factor, inner } => {
                Measure::scaled(factor, Measure::try_from(*inner)?)
            }
            MeasureSpec::Sum { terms } => Measure::sum(
                terms
                    .into_iter()
                    .map(Measure::try_from)
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

impl From<Measure> for MeasureSpec {
    fn from(mu: Measure) -> Self {
        match mu {
            Measure::LebesgueDensity { k, density } => MeasureSpec::LebesgueDensity {
                k,
                density: density.name,
            },
            Measure::HyperplaneLebesgue {
                normal,
                offset,
                scale,
            } => MeasureSpec::Hyperplane {
                normal,
                offset,
                scale,
            },
            Measure::PointMass { location, weight } => MeasureSpec::PointMass { location, weight },
            Measure::Scaled { factor, inner } => MeasureSpec::Scaled {
                factor,
                inner: Box::new((*inner).into()),
            },
            Measure::Sum { terms } => MeasureSpec::Sum {
                terms: terms.into_iter().map(Into::into).collect(),
            },
        }
    }
}

fn check_nonneg(what: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(HnError::input(format!(
            "{what} must be finite and nonnegative, got {x}"
        )))
    }
}

impl Measure {
    /// Lebesgue measure on ℝᵏ.
    pub fn lebesgue(k: usize) -> Self {
        Measure::LebesgueDensity {
            k,
            density: Density::builtin("one").expect("builtin"),
        }
    }

    pub fn with_density(k: usize, density: Density) -> Result<Self> {
        if k == 0 {
            return Err(HnError::input("measure dimension must be at least 1"));
        }
        Ok(Measure::LebesgueDensity { k, density })
    }

    pub fn hyperplane(normal: Vec<f64>, offset: f64, scale: f64) -> Result<Self> {
        if normal.is_empty() || normal.iter().any(|x| !x.is_finite()) {
            return Err(HnError::input(
                "hyperplane normal must be a finite nonempty vector",
            ));
        }
        if normal.iter().all(|&x| x == 0.0) {
            return Err(HnError::input("hyperplane normal must be nonzero"));
        }
        if !offset.is_finite() {
            return Err(HnError::input("hyperplane offset must be finite"));
        }
        check_nonneg("hyperplane scale", scale)?;
        Ok(Measure::HyperplaneLebesgue {
            normal,
            offset,
            scale,
        })
    }

    pub fn point_mass(location: Vec<f64>, weight: f64) -> Result<Self> {
        if location.is_empty() || location.iter().any(|x| !x.is_finite()) {
            return Err(HnError::input(
                "point mass location must be a finite nonempty vector",
            ));
        }
        check_nonneg("point mass weight", weight)?;
        Ok(Measure::PointMass { location, weight })
    }

    pub fn scaled(factor: f64, inner: Measure) -> Result<Self> {
        check_nonneg("scale factor", factor)?;
        Ok(Measure::Scaled {
            factor,
            inner: Box::new(inner),
        })
    }

    pub fn sum(terms: Vec<Measure>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(HnError::input("sum of measures needs at least one term"));
        };
        let k = first.dim();
        if let Some(bad) = terms.iter().find(|m| m.dim() != k) {
            return Err(HnError::DimensionMismatch {
                expected: k,
                got: bad.dim(),
            });
        }
        Ok(Measure::Sum { terms })
    }

    /// The zero measure on ℝᵏ.
    pub fn zero(k: usize) -> Self {
        Measure::Scaled {
            factor: 0.0,
            inner: Box::new(Measure::lebesgue(k)),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Measure::LebesgueDensity { k, .. } => *k,
            Measure::HyperplaneLebesgue { normal, .. } => normal.len(),
            Measure::PointMass { location, .. } => location.len(),
            Measure::Scaled { inner, .. } => inner.dim(),
            Measure::Sum { terms } => terms[0].dim(),
        }
    }

    /// True when the measure is zero by construction.
    pub fn is_trivially_zero(&self) -> bool {
        match self {
            Measure::LebesgueDensity { .. } => false,
            Measure::HyperplaneLebesgue { scale, .. } => *scale == 0.0,
            Measure::PointMass { weight, .. } => *weight == 0.0,
            Measure::Scaled { factor, inner } => *factor == 0.0 || inner.is_trivially_zero(),
            Measure::Sum { terms } => terms.iter().all(Measure::is_trivially_zero),
        }
    }

    /// Atoms with their effective weights (after scaling).
    pub fn atoms(&self) -> Vec<(Vec<f64>, f64)> {
        let mut out = Vec::new();
        self.collect_atoms(1.0, &mut out);
        out
    }

    fn collect_atoms(&self, factor: f64, out: &mut Vec<(Vec<f64>, f64)>) {
        match self {
            Measure::PointMass { location, weight } if factor * weight > 0.0 => {
                out.push((location.clone(), factor * weight))
            }
            Measure::Scaled { factor: c, inner } => inner.collect_atoms(factor * c, out),
            Measure::Sum { terms } => terms.iter().for_each(|m| m.collect_atoms(factor, out)),
            _ => {}
        }
    }

    /// A short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            Measure::LebesgueDensity { k, density } => {
                if density.name() == "one" {
                    format!("Lebesgue(R^{k})")
                } else {
                    format!("{}·dt on R^{k}", density.name())
                }
            }
            Measure::HyperplaneLebesgue {
                normal,
                offset,
                scale,
            } => format!("{scale}·δ({normal:?}·t − {offset})"),
            Measure::PointMass { location, weight } => format!("{weight}·δ_{location:?}"),
            Measure::Scaled { factor, inner } => format!("{factor}·[{}]", inner.describe()),
            Measure::Sum { terms } => terms
                .iter()
                .map(Measure::describe)
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// `None` picks 10⁶ for k ≤ 2 and 10⁷ otherwise.
    pub max_panels: Option<usize>,
    /// Recorded for reproducibility; the panel order itself is deterministic.
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_panels: None,
            seed: 0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(HnError::input("quadrature tolerances must be positive"));
        }
        if self.max_panels == Some(0) {
            return Err(HnError::input("max_panels must be positive"));
        }
        Ok(())
    }

    pub fn panels_for(&self, k: usize) -> usize {
        self.max_panels
            .unwrap_or(if k <= 2 { 1_000_000 } else { 10_000_000 })
    }

    fn options(&self, k: usize) -> CubatureOptions {
        CubatureOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_panels: self.panels_for(k),
            batch: if k <= 1 { 1 } else { 16 },
        }
    }
}

fn rule_for() -> EmbeddedRule {
    EmbeddedRule::gk15()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub converged: bool,
}

impl IntegralResult {
    pub fn exact(value: Complex64) -> Self {
        IntegralResult {
            value,
            error_estimate: 0.0,
            panels_used: 0,
            converged: value.re.is_finite() && value.im.is_finite(),
        }
    }

    /// Turn an unconverged result into `NotConverged`.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(HnError::NotConverged {
                value: self.value,
                error_estimate: self.error_estimate,
                panels: self.panels_used,
            })
        }
    }
}

/// Gram-Schmidt of the standard basis against `normal`; returns `dim-1` orthonormal vectors.
pub fn hyperplane_basis(normal: &[f64]) -> Vec<Vec<f64>> {
    let n = normal.len();
    let norm = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<f64>> = vec![normal.iter().map(|x| x / norm).collect()];
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-8 {
            v.iter_mut().for_each(|x| *x /= len);
            basis.push(v);
        }
    }
    basis.remove(0);
    basis
}

/// Point of the unit sphere in ℝᵏ at spherical angles `phi` (k−1 of them, the
/// last one azimuthal), written into `out`; returns the surface Jacobian.
fn sphere_point(phi: &[f64], out: &mut [f64]) -> f64 {
    let k = out.len();
    let mut prod = 1.0;
    let mut jac = 1.0;
    for (i, &p) in phi.iter().enumerate() {
        let (sn, cs) = p.sin_cos();
        out[i] = prod * cs;
        jac *= sn.powi((k - 2 - i) as i32);
        prod *= sn;
    }
    out[k - 1] = prod;
    jac
}

fn integrate_on_box<F>(lower: &[f64], upper: &[f64], g: &F, spec: &QuadratureSpec) -> IntegralResult
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let out = integrate_box(g, lower, upper, &rule_for(), &spec.options(lower.len()));
    IntegralResult {
        value: out.value,
        error_estimate: out.error,
        panels_used: out.panels,
        converged: out.converged,
    }
}

/// ∫ f dμ.
///
/// For absolutely continuous and hyperplane parts `f · density` should decay like
/// Π (1 + t²)⁻¹; otherwise the result comes back unconverged.
pub fn integrate<F>(mu: &Measure, f: &F, spec: &QuadratureSpec) -> IntegralResult
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    match mu {
        Measure::LebesgueDensity { k, density } => {
            let k = *k;
            let g = |s: &[f64]| {
                let mut t = [0.0f64; 8];
                let mut tv;
                let t: &mut [f64] = if k <= 8 {
                    &mut t[..k]
                } else {
                    tv = vec![0.0; k];
                    &mut tv
                };
                let mut jac = 1.0;
                for (tl, &sl) in t.iter_mut().zip(s) {
                    *tl = sl.tan();
                    jac *= 1.0 + *tl * *tl;
                }
                let w = density.eval(t);
                if w == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                f(t) * (w * jac)
            };
            integrate_on_box(&vec![-FRAC_PI_2; k], &vec![FRAC_PI_2; k], &g, spec)
        }
        Measure::HyperplaneLebesgue {
            normal,
            offset,
            scale,
        } => {
            if *scale == 0.0 {
                return IntegralResult::exact(Complex64::new(0.0, 0.0));
            }
            let n = normal.len();
            let norm2: f64 = normal.iter().map(|x| x * x).sum();
            let weight = scale / norm2.sqrt();
            let base: Vec<f64> = normal.iter().map(|x| x * offset / norm2).collect();
            if n == 1 {
                let mut r = IntegralResult::exact(f(&base) * weight);
                r.panels_used = 1;
                return r;
            }
            let basis = hyperplane_basis(normal);
            if n == 2 {
                let g = |s: &[f64]| {
                    let u = s[0].tan();
                    let t: Vec<f64> = base.iter().zip(&basis[0]).map(|(b, e)| b + u * e).collect();
                    f(&t) * (weight * (1.0 + u * u))
                };
                return integrate_on_box(&[-FRAC_PI_2], &[FRAC_PI_2], &g, spec);
            }
            // spherical coordinates about the foot of the normal, radius r = tan σ;
            // the kernel decays radially, not coordinatewise, on a hyperplane
            let k = n - 1;
            let g = |s: &[f64]| {
                let r = s[0].tan();
                let mut dir = vec![0.0; k];
                let ang = sphere_point(&s[1..], &mut dir);
                let mut t = base.clone();
                for (e, d) in basis.iter().zip(&dir) {
                    t.iter_mut().zip(e).for_each(|(x, y)| *x += r * d * y);
                }
                let jac = r.powi(k as i32 - 1) * (1.0 + r * r) * ang;
                if jac == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                f(&t) * (weight * jac)
            };
            let mut lower = vec![0.0; k];
            let mut upper = vec![FRAC_PI_2];
            upper.extend(std::iter::repeat_n(std::f64::consts::PI, k - 1));
            lower[k - 1] = -std::f64::consts::PI;
            integrate_on_box(&lower, &upper, &g, spec)
        }
        Measure::PointMass { location, weight } => {
            let value = if *weight == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                f(location) * *weight
            };
            IntegralResult {
                panels_used: 1,
                ..IntegralResult::exact(value)
            }
        }
        Measure::Scaled { factor, inner } => {
            if *factor == 0.0 {
                return IntegralResult::exact(Complex64::new(0.0, 0.0));
            }
            let r = integrate(inner, f, spec);
            IntegralResult {
                value: r.value * *factor,
                error_estimate: r.error_estimate * factor,
                ..r
            }
        }
        Measure::Sum { terms } => {
            let mut value = Complex64::new(0.0, 0.0);
            let mut err = 0.0;
            let mut panels = 0;
            let mut all = true;
            for m in terms {
                let r = integrate(m, f, spec);
                value += r.value;
                err += r.error_estimate;
                panels += r.panels_used;
                all &= r.converged;
            }
            let tol = spec.abs_tol.max(spec.rel_tol * value.norm());
            IntegralResult {
                value,
                error_estimate: err,
                panels_used: panels,
                converged: all && err <= tol,
            }
        }
    }
}

fn inv_one_plus_t2(t: &[f64]) -> f64 {
    t.iter().map(|x| 1.0 / (1.0 + x * x)).product()
}

/// ∫ Π (1 + t_ℓ²)⁻¹ dμ. `NotConverged` is the numerical sign of a violated growth condition.
pub fn growth_norm(mu: &Measure, spec: &QuadratureSpec) -> Result<IntegralResult> {
    spec.validate()?;
    integrate(
        mu,
        &|t: &[f64]| Complex64::new(inv_one_plus_t2(t), 0.0),
        spec,
    )
    .require_converged()
}

/// ∫ Π R²/(R² + t_ℓ²) dμ — a smooth window of width `radius` used to probe total mass.
pub fn window_mass(mu: &Measure, radius: f64, spec: &QuadratureSpec) -> IntegralResult {
    let r2 = radius * radius;
    integrate(
        mu,
        &|t: &[f64]| Complex64::new(t.iter().map(|x| r2 / (r2 + x * x)).product(), 0.0),
        spec,
    )
}

/// The image of μ under the boundary Cayley map, weighted by Π 2/(1 + t²).
#[derive(Debug, Clone)]
pub struct TorusMeasure {
    source: Measure,
}

pub fn transform_to_torus(mu: &Measure) -> TorusMeasure {
    TorusMeasure { source: mu.clone() }
}

impl TorusMeasure {
    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn source(&self) -> &Measure {
        &self.source
    }

    /// ∫ f(s) dν(s) over (0, 2π)ᵏ.
    pub fn integrate<F>(&self, f: &F, spec: &QuadratureSpec) -> IntegralResult
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let k = self.dim();
        integrate(
            &self.source,
            &|t: &[f64]| {
                let s: Vec<f64> = t.iter().map(|&x| cayley_angle(x)).collect();
                f(&s) * (2f64.powi(k as i32) * inv_one_plus_t2(t))
            },
            spec,
        )
    }

    pub fn total_mass(&self, spec: &QuadratureSpec) -> Result<IntegralResult> {
        self.integrate(&|_: &[f64]| Complex64::new(1.0, 0.0), spec)
            .require_converged()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::kernel_unchecked;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn arctangent_integral() {
        let r = integrate(
            &Measure::lebesgue(1),
            &|t: &[f64]| c(1.0 / (1.0 + t[0] * t[0])),
            &spec(),
        );
        assert!(r.converged);
        assert!((r.value.re - PI).abs() < 1e-12);
    }

    #[test]
    fn atom_evaluation() {
        let z = Complex64::new(0.0, 2.0);
        let mu = Measure::point_mass(vec![0.0], PI).unwrap();
        let r = integrate(
            &mu,
            &|t: &[f64]| 1.0 / (t[0] - z) - t[0] / (1.0 + t[0] * t[0]),
            &spec(),
        );
        let want = -PI / Complex64::new(0.0, 2.0);
        assert!((r.value - want).norm() < 1e-15);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn growth_norms() {
        for k in 1..=3 {
            let g = growth_norm(&Measure::lebesgue(k), &spec()).unwrap();
            assert!((g.value.re - PI.powi(k as i32)).abs() < 1e-8 * PI.powi(k as i32));
        }
        let mu =
            Measure::with_density(2, Density::builtin("inv_one_plus_t2_product").unwrap()).unwrap();
        let g = growth_norm(&mu, &spec()).unwrap();
        assert!((g.value.re - PI * PI / 4.0).abs() < 1e-8);
        let h = Measure::hyperplane(vec![1.0, 1.0, 1.0], 0.0, PI).unwrap();
        let g = growth_norm(&h, &spec()).unwrap();
        assert!(g.value.re.is_finite() && g.value.re > 0.0);
    }

    #[test]
    fn violated_growth_is_reported() {
        let mu =
            Measure::with_density(1, Density::builtin("one_plus_t2_product").unwrap()).unwrap();
        let s = QuadratureSpec {
            max_panels: Some(2000),
            ..spec()
        };
        assert!(matches!(
            growth_norm(&mu, &s),
            Err(HnError::NotConverged { .. })
        ));
    }

    #[test]
    fn hyperplane_in_two_dimensions() {
        // δ(t1 + t2) dt: ∫ 1/((1+t²)(1+t²)) dt = π/2
        let h = Measure::hyperplane(vec![1.0, 1.0], 0.0, 1.0).unwrap();
        let g = growth_norm(&h, &spec()).unwrap();
        assert!((g.value.re - PI / 2.0).abs() < 1e-9);
        // shifted line t1 − t2 = 2: ∫ dt /((1+t²)(1+(t−2)²)) = 2π/(2²+4)·... checked by 1-D quadrature
        let h = Measure::hyperplane(vec![1.0, -1.0], 2.0, 1.0).unwrap();
        let g = growth_norm(&h, &spec()).unwrap();
        let direct = integrate(
            &Measure::lebesgue(1),
            &|t: &[f64]| c(inv_one_plus_t2(&[t[0], t[0] - 2.0])),
            &spec(),
        );
        assert!((g.value - direct.value).norm() < 1e-9);
    }

    #[test]
    fn hyperplane_in_one_dimension_is_an_atom() {
        let h = Measure::hyperplane(vec![2.0], 1.0, 3.0).unwrap();
        let r = integrate(&h, &|t: &[f64]| c(t[0]), &spec());
        assert!((r.value.re - 1.5 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = hyperplane_basis(&[1.0, 2.0, -0.5, 0.0]);
        assert_eq!(b.len(), 3);
        for (i, u) in b.iter().enumerate() {
            let dn: f64 = u
                .iter()
                .zip([1.0, 2.0, -0.5, 0.0])
                .map(|(x, y)| x * y)
                .sum();
            assert!(dn.abs() < 1e-14);
            for (j, v) in b.iter().enumerate() {
                let d: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sphere_jacobian_gives_surface_area() {
        // area of S² is 4π, of S³ is 2π²
        for (k, want) in [
            (3usize, 4.0 * std::f64::consts::PI),
            (4, 2.0 * std::f64::consts::PI.powi(2)),
        ] {
            let mut lower = vec![0.0; k - 1];
            let mut upper = vec![std::f64::consts::PI; k - 1];
            lower[k - 2] = -std::f64::consts::PI;
            upper[k - 2] = std::f64::consts::PI;
            let g = |p: &[f64]| {
                let mut d = vec![0.0; k];
                let j = sphere_point(p, &mut d);
                let len: f64 = d.iter().map(|x| x * x).sum();
                assert!((len - 1.0).abs() < 1e-14);
                c(j)
            };
            let r = integrate_on_box(&lower, &upper, &g, &spec());
            assert!((r.value.re - want).abs() < 1e-9, "{k}: {}", r.value.re);
        }
    }

    #[test]
    fn zero_measure_short_circuits() {
        let r = integrate(&Measure::zero(2), &|_: &[f64]| c(f64::NAN), &spec());
        assert_eq!(r.value, c(0.0));
        assert!(r.converged);
    }

    #[test]
    fn linearity_and_scaling() {
        let z = [Complex64::new(0.3, 1.1), Complex64::new(-0.4, 0.7)];
        let f = |t: &[f64]| kernel_unchecked(&z, t);
        let m1 = Measure::lebesgue(2);
        let m2 = Measure::hyperplane(vec![1.0, 1.0], 0.5, 2.0).unwrap();
        let sum = Measure::sum(vec![m1.clone(), m2.clone()]).unwrap();
        let a = integrate(&m1, &f, &spec());
        let b = integrate(&m2, &f, &spec());
        let s = integrate(&sum, &f, &spec());
        let tol = 2.0 * (a.error_estimate + b.error_estimate + s.error_estimate) + 1e-12;
        assert!((s.value - a.value - b.value).norm() <= tol);
        let sc = integrate(&Measure::scaled(3.5, m2).unwrap(), &f, &spec());
        assert!((sc.value - b.value * 3.5).norm() <= 1e-8 * sc.value.norm());
    }

    #[test]
    fn lebesgue_kernel_integral_is_pi_n_i() {
        // (1/πⁿ) ∫ K_n dt = i on ℂ⁺ⁿ
        let z = [Complex64::new(0.7, 0.4), Complex64::new(-1.5, 2.0)];
        let r = integrate(
            &Measure::lebesgue(2),
            &|t: &[f64]| kernel_unchecked(&z, t),
            &spec(),
        );
        assert!(r.converged);
        assert!((r.value / (PI * PI) - Complex64::new(0.0, 1.0)).norm() < 1e-7);
    }

    #[test]
    fn torus_transport() {
        let tm = transform_to_torus(&Measure::lebesgue(1));
        let m = tm.total_mass(&spec()).unwrap();
        assert!((m.value.re - 2.0 * PI).abs() < 1e-10);
        let atom = transform_to_torus(&Measure::point_mass(vec![0.0], PI).unwrap());
        let f = |s: &[f64]| c(s[0].sin() + 2.0);
        let r = atom.integrate(&f, &spec());
        assert!((r.value.re - 2.0 * PI * (PI.sin() + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let mu = Measure::sum(vec![
            Measure::scaled(
                PI,
                Measure::hyperplane(vec![1.0, 1.0, 1.0], 0.0, 1.0).unwrap(),
            )
            .unwrap(),
            Measure::point_mass(vec![0.0, 1.0, 2.0], 0.5).unwrap(),
            Measure::with_density(3, Density::builtin("inv_one_plus_t2_product").unwrap()).unwrap(),
        ])
        .unwrap();
        let s = serde_json::to_string(&mu).unwrap();
        let back: Measure = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let bad = r#"{"type":"lebesgue_density","k":1,"density":"nope"}"#;
        assert!(serde_json::from_str::<Measure>(bad).is_err());
        let neg = r#"{"type":"point_mass","location":[0.0],"weight":-1.0}"#;
        assert!(serde_json::from_str::<Measure>(neg).is_err());
    }

    #[test]
    fn stable_under_panel_doubling() {
        let mu = Measure::hyperplane(vec![1.0, 1.0, 1.0], 0.0, PI).unwrap();
        let a = growth_norm(&mu, &spec()).unwrap();
        let s2 = QuadratureSpec {
            max_panels: Some(2 * spec().panels_for(2)),
            ..spec()
        };
        let b = growth_norm(&mu, &s2).unwrap();
        assert!((a.value - b.value).norm() <= 1e-8 * a.value.norm());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn torus_preserves_positivity(a in 0.0f64..3.0, b in -2.0f64..2.0, w in 0.1f64..4.0) {
            let mu = Measure::sum(vec![
                Measure::lebesgue(1),
                Measure::point_mass(vec![b], w).unwrap(),
            ]).unwrap();
            let f = move |s: &[f64]| c((a * s[0]).cos().powi(2));
            let r = transform_to_torus(&mu).integrate(&f, &QuadratureSpec::with_tolerances(1e-6, 1e-10));
            prop_assert!(r.value.re >= 0.0);
        }
    }
}
