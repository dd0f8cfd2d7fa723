//! Admissibility of measures: the growth condition, four equivalent forms of
//! the Nevanlinna condition, the torus moment form, and structural properties.
//!
//! Every check is a finite certificate: residuals are computed at a fixed set
//! of witnesses (sample points, multi-indices, index pairs). A witness only
//! counts against a measure when its residual exceeds the tolerance by more
//! than its own quadrature error estimate.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{
    enumerate_admissible_rho, quasi_random_upper_points, RhoVector, UpperPoint, I,
};
use crate::error::{HnError, Result};
use crate::kernels::rho_product_unchecked;
use crate::measures::{
    growth_norm, integrate, transform_to_torus, window_mass, IntegralResult, Measure,
    QuadratureSpec,
};

pub const DEFAULT_SAMPLES: usize = 16;
pub const DEFAULT_DEGREE_CUTOFF: i32 = 3;
/// Relative tolerance; the absolute tolerance is this times `1 + growth_norm`.
pub const TOLERANCE_FACTOR: f64 = 1e-6;
/// Witness integrals are resolved to this fraction of the tolerance.
pub const WITNESS_ACCURACY: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    SumA,
    PerRhoB,
    MomentC,
    PluriharmonicD,
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessTag {
    Z(Vec<Complex64>),
    M(Vec<i32>),
    Pair {
        j1: usize,
        j2: usize,
        z: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    #[serde(flatten)]
    pub witness: WitnessTag,
    pub residual: f64,
    pub error_estimate: f64,
    /// `max(0, residual − error_estimate)`.
    pub certified: f64,
    pub converged: bool,
}

impl Witness {
    fn new(witness: WitnessTag, r: &IntegralResult, scale: f64) -> Self {
        let residual = r.value.norm() * scale;
        let error_estimate = r.error_estimate * scale;
        Witness {
            witness,
            residual,
            error_estimate,
            certified: (residual - error_estimate).max(0.0),
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    pub form: Form,
    /// The ρ-vector for form (b).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<i8>>,
    pub witnesses: Vec<Witness>,
    /// Largest certified residual; the verdict compares this with `tolerance`.
    pub max_residual: f64,
    pub max_raw_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub unconverged: usize,
}

impl ConditionReport {
    fn assemble(form: Form, rho: Option<Vec<i8>>, witnesses: Vec<Witness>, tolerance: f64) -> Self {
        let max_residual = witnesses.iter().map(|w| w.certified).fold(0.0, f64::max);
        let max_raw_residual = witnesses.iter().map(|w| w.residual).fold(0.0, f64::max);
        let unconverged = witnesses.iter().filter(|w| !w.converged).count();
        ConditionReport {
            form,
            rho,
            witnesses,
            max_residual,
            max_raw_residual,
            tolerance,
            verdict: Verdict::from_bool(max_residual <= tolerance),
            unconverged,
        }
    }
}

/// A multi-index `m ∈ ℤⁿ` for the moment forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentIndex(pub Vec<i32>);

impl MomentIndex {
    pub fn new(m: Vec<i32>) -> Self {
        MomentIndex(m)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Has a positive and a negative entry.
    pub fn is_admissible(&self) -> bool {
        self.0.iter().any(|&x| x > 0) && self.0.iter().any(|&x| x < 0)
    }

    /// All admissible indices with `|m_ℓ| ≤ cutoff`, keeping one of each `±m`
    /// pair (the one whose first nonzero entry is positive): for a positive
    /// measure the two moments are complex conjugates.
    pub fn enumerate(n: usize, cutoff: i32) -> Vec<MomentIndex> {
        let side = (2 * cutoff + 1) as usize;
        let mut out = Vec::new();
        for code in 0..side.pow(n as u32) {
            let mut c = code;
            let mut m = vec![0i32; n];
            for x in m.iter_mut() {
                *x = (c % side) as i32 - cutoff;
                c /= side;
            }
            m.reverse();
            let idx = MomentIndex(m);
            let leading_positive = idx.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
            if idx.is_admissible() && leading_positive {
                out.push(idx);
            }
        }
        out
    }
}

/// Shared state for a batch of checks on one measure.
struct Checker<'a> {
    mu: &'a Measure,
    /// Absolute accuracy tied to the verdict tolerance: residuals that should
    /// vanish only need resolving well below it.
    spec: QuadratureSpec,
    tolerance: f64,
}

impl<'a> Checker<'a> {
    fn new(mu: &'a Measure, spec: &QuadratureSpec) -> Result<(Self, IntegralResult)> {
        let g = growth_norm(mu, spec)?;
        let tolerance = TOLERANCE_FACTOR * (1.0 + g.value.re);
        let spec = QuadratureSpec {
            abs_tol: spec.abs_tol.max(WITNESS_ACCURACY * tolerance),
            ..spec.clone()
        };
        Ok((
            Checker {
                mu,
                spec,
                tolerance,
            },
            g,
        ))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.mu.dim() != n {
            return Err(HnError::DimensionMismatch {
                expected: self.mu.dim(),
                got: n,
            });
        }
        Ok(())
    }

    fn sum_form(&self, samples: &[UpperPoint]) -> Result<ConditionReport> {
        let n = self.mu.dim();
        samples.iter().try_for_each(|z| self.check_dim(z.dim()))?;
        let rhos: Vec<Vec<i8>> = enumerate_admissible_rho(n)
            .into_iter()
            .map(|r| r.entries().to_vec())
            .collect();
        let witnesses = samples
            .par_iter()
            .map(|z| {
                let zc = z.coords();
                let r = if rhos.is_empty() {
                    IntegralResult::exact(Complex64::new(0.0, 0.0))
                } else {
                    integrate(
                        self.mu,
                        &|t: &[f64]| {
                            rhos.iter()
                                .map(|rho| rho_product_unchecked(rho, zc, t))
                                .sum()
                        },
                        &self.spec,
                    )
                };
                Witness::new(WitnessTag::Z(zc.to_vec()), &r, 1.0)
            })
            .collect();
        Ok(ConditionReport::assemble(
            Form::SumA,
            None,
            witnesses,
            self.tolerance,
        ))
    }

    fn per_rho_form(&self, rho: &RhoVector, samples: &[UpperPoint]) -> Result<ConditionReport> {
        if !rho.is_admissible() {
            return Err(HnError::precondition(format!(
                "rho {:?} needs both a +1 and a -1 entry",
                rho.entries()
            )));
        }
        self.check_dim(rho.dim())?;
        samples.iter().try_for_each(|z| self.check_dim(z.dim()))?;
        let entries = rho.entries();
        let witnesses = samples
            .par_iter()
            .map(|z| {
                let zc = z.coords();
                let r = integrate(
                    self.mu,
                    &|t: &[f64]| rho_product_unchecked(entries, zc, t),
                    &self.spec,
                );
                Witness::new(WitnessTag::Z(zc.to_vec()), &r, 1.0)
            })
            .collect();
        Ok(ConditionReport::assemble(
            Form::PerRhoB,
            Some(entries.to_vec()),
            witnesses,
            self.tolerance,
        ))
    }

    fn moment_witness(&self, m: &MomentIndex) -> Witness {
        let r = integrate(
            self.mu,
            &|t: &[f64]| {
                t.iter()
                    .zip(&m.0)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&tl, &ml)| {
                        let u = Complex64::new(tl, -1.0) / Complex64::new(tl, 1.0);
                        acc * u.powi(ml) / (1.0 + tl * tl)
                    })
            },
            &self.spec,
        );
        Witness::new(WitnessTag::M(m.0.clone()), &r, 1.0)
    }

    fn moment_form(&self, ms: &[MomentIndex]) -> Result<ConditionReport> {
        for m in ms {
            guard_moment(m)?;
            self.check_dim(m.dim())?;
        }
        let witnesses = ms.par_iter().map(|m| self.moment_witness(m)).collect();
        Ok(ConditionReport::assemble(
            Form::MomentC,
            None,
            witnesses,
            self.tolerance,
        ))
    }

    fn torus_form(&self, ms: &[MomentIndex]) -> Result<ConditionReport> {
        for m in ms {
            guard_moment(m)?;
            self.check_dim(m.dim())?;
        }
        let torus = transform_to_torus(self.mu);
        let scale = 2f64.powi(self.mu.dim() as i32);
        let witnesses = ms
            .par_iter()
            .map(|m| {
                let r = torus.integrate(
                    &|s: &[f64]| {
                        let phase: f64 = s.iter().zip(&m.0).map(|(sl, &ml)| sl * ml as f64).sum();
                        Complex64::from_polar(1.0, phase)
                    },
                    &self.spec,
                );
                Witness::new(WitnessTag::M(m.0.clone()), &r, 1.0)
            })
            .collect();
        Ok(ConditionReport::assemble(
            Form::Torus,
            None,
            witnesses,
            scale * self.tolerance,
        ))
    }

    fn pluriharmonic_form(
        &self,
        pairs: &[(usize, usize)],
        samples: &[UpperPoint],
    ) -> Result<ConditionReport> {
        let n = self.mu.dim();
        for &(j1, j2) in pairs {
            if !(1 <= j1 && j1 < j2 && j2 <= n) {
                return Err(HnError::precondition(format!(
                    "index pair ({j1}, {j2}) must satisfy 1 <= j1 < j2 <= {n}"
                )));
            }
        }
        samples.iter().try_for_each(|z| self.check_dim(z.dim()))?;
        let jobs: Vec<(usize, usize, &UpperPoint)> = pairs
            .iter()
            .flat_map(|&(a, b)| samples.iter().map(move |z| (a, b, z)))
            .collect();
        let witnesses = jobs
            .par_iter()
            .map(|&(j1, j2, z)| {
                let zc = z.coords();
                let r = integrate(
                    self.mu,
                    &|t: &[f64]| pluriharmonic_integrand(j1, j2, zc, t),
                    &self.spec,
                );
                Witness::new(
                    WitnessTag::Pair {
                        j1,
                        j2,
                        z: zc.to_vec(),
                    },
                    &r,
                    1.0,
                )
            })
            .collect();
        Ok(ConditionReport::assemble(
            Form::PluriharmonicD,
            None,
            witnesses,
            self.tolerance,
        ))
    }
}

fn guard_moment(m: &MomentIndex) -> Result<()> {
    if m.is_admissible() {
        Ok(())
    } else {
        Err(HnError::precondition(format!(
            "moment index {:?} needs a positive and a negative entry",
            m.0
        )))
    }
}

fn pluriharmonic_integrand(j1: usize, j2: usize, z: &[Complex64], t: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (l, (&zl, &tl)) in z.iter().zip(t).enumerate() {
        let idx = l + 1;
        acc *= if idx == j1 {
            let d = tl - zl;
            1.0 / (d * d)
        } else if idx == j2 {
            let d = tl - zl.conj();
            1.0 / (d * d)
        } else {
            1.0 / (tl - zl) - 1.0 / (tl - zl.conj())
        };
    }
    acc
}

/// The default witness set: 16 Halton points in `{Re ∈ [−3, 3], Im ∈ [0.5, 4]}ⁿ`.
pub fn default_samples(n: usize, count: usize, seed: u64) -> Vec<UpperPoint> {
    quasi_random_upper_points(n, count, seed)
}

/// Form (a): `|Σ_ρ ∫ Π N_{ρ_j, j} dμ|` at each sample.
pub fn check_sum_form(
    mu: &Measure,
    z_samples: &[UpperPoint],
    spec: &QuadratureSpec,
) -> Result<ConditionReport> {
    Checker::new(mu, spec)?.0.sum_form(z_samples)
}

/// Form (b): `|∫ Π N_{ρ_j, j} dμ|` for one admissible ρ.
pub fn check_per_rho_form(
    mu: &Measure,
    rho: &RhoVector,
    z_samples: &[UpperPoint],
    spec: &QuadratureSpec,
) -> Result<ConditionReport> {
    Checker::new(mu, spec)?.0.per_rho_form(rho, z_samples)
}

/// Form (c): `|∫ Π ((t−i)/(t+i))^{m_ℓ} (1+t_ℓ²)⁻¹ dμ|`.
pub fn check_moment_form(
    mu: &Measure,
    m: &MomentIndex,
    spec: &QuadratureSpec,
) -> Result<ConditionReport> {
    guard_moment(m)?;
    Checker::new(mu, spec)?
        .0
        .moment_form(std::slice::from_ref(m))
}

/// Form (d) for one index pair.
pub fn check_pluriharmonic_form(
    mu: &Measure,
    j1: usize,
    j2: usize,
    z_samples: &[UpperPoint],
    spec: &QuadratureSpec,
) -> Result<ConditionReport> {
    Checker::new(mu, spec)?
        .0
        .pluriharmonic_form(&[(j1, j2)], z_samples)
}

/// `|∫ e^{i m·s} dν|` for the Cayley image ν; equals `2ⁿ` times the form (c) residual.
pub fn check_torus_moments(
    mu: &Measure,
    m: &MomentIndex,
    spec: &QuadratureSpec,
) -> Result<ConditionReport> {
    guard_moment(m)?;
    Checker::new(mu, spec)?
        .0
        .torus_form(std::slice::from_ref(m))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuralReport {
    pub applicable: bool,
    /// `(R, ∫ Π R²/(R²+t²) dμ)` for growing R.
    pub window_masses: Vec<(f64, f64)>,
    pub zero_measure: bool,
    pub finite_mass: bool,
    pub atoms: Vec<(Vec<f64>, f64)>,
    pub violations: Vec<String>,
    pub verdict: Verdict,
}

/// Representing measures in two or more variables are atomless and, unless zero,
/// of infinite mass. Mass is probed with the window `Π R²/(R² + t_ℓ²)`,
/// `R = 1, 2, …, 256`; it is called finite when the last doubling adds less than 10%.
pub fn structural_checks(mu: &Measure, spec: &QuadratureSpec) -> StructuralReport {
    let n = mu.dim();
    let atoms = mu.atoms();
    if n < 2 {
        return StructuralReport {
            applicable: false,
            window_masses: vec![],
            zero_measure: mu.is_trivially_zero(),
            finite_mass: false,
            atoms,
            violations: vec![],
            verdict: Verdict::Pass,
        };
    }
    let probe_spec = QuadratureSpec {
        rel_tol: spec.rel_tol.max(1e-6),
        ..spec.clone()
    };
    let window_masses: Vec<(f64, f64)> = (0..=8)
        .map(|k| {
            let r = 2f64.powi(k);
            (r, window_mass(mu, r, &probe_spec).value.re)
        })
        .collect();
    let last = window_masses[window_masses.len() - 1].1;
    let prev = window_masses[window_masses.len() - 2].1;
    let zero_measure = mu.is_trivially_zero() || last.abs() <= spec.abs_tol;
    let finite_mass = !zero_measure && last.is_finite() && (last - prev) < 0.1 * last;
    let mut violations = Vec::new();
    if finite_mass {
        violations.push(format!(
            "nonzero measure with finite mass (window mass ≈ {last:.6})"
        ));
    }
    if !atoms.is_empty() {
        violations.push(format!("{} atom(s) of positive mass", atoms.len()));
    }
    StructuralReport {
        applicable: true,
        window_masses,
        zero_measure,
        finite_mass,
        atoms,
        verdict: Verdict::from_bool(violations.is_empty()),
        violations,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthSummary {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub dimension: usize,
    pub growth: GrowthSummary,
    pub reports: Vec<ConditionReport>,
    pub structural: Option<StructuralReport>,
    /// Conjunction of the growth condition and every condition report.
    pub verdict: Verdict,
    pub unconverged_witnesses: usize,
}

impl AdmissibilityReport {
    pub fn report(&self, form: Form) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| r.form == form)
    }
}

#[derive(Debug, Clone)]
pub struct AdmissibilityOptions {
    pub degree_cutoff: i32,
    pub samples: usize,
    pub seed: u64,
    /// Also run forms (b) and torus, which the aggregate does not need.
    pub all_forms: bool,
    pub structural: bool,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        AdmissibilityOptions {
            degree_cutoff: DEFAULT_DEGREE_CUTOFF,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            all_forms: false,
            structural: false,
        }
    }
}

/// Growth condition, form (a) on the sample set, form (c) for all admissible
/// `|m_ℓ| ≤ degree_cutoff`, and form (d) on all index pairs.
pub fn full_admissibility(
    mu: &Measure,
    spec: &QuadratureSpec,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityReport> {
    spec.validate()?;
    let n = mu.dim();
    let structural = opts.structural.then(|| structural_checks(mu, spec));
    let (checker, g) = match Checker::new(mu, spec) {
        Ok(x) => x,
        Err(HnError::NotConverged {
            value,
            error_estimate,
            ..
        }) => {
            return Ok(AdmissibilityReport {
                dimension: n,
                growth: GrowthSummary {
                    value: value.re,
                    error_estimate,
                    converged: false,
                },
                reports: vec![],
                structural,
                verdict: Verdict::Fail,
                unconverged_witnesses: 0,
            })
        }
        Err(e) => return Err(e),
    };
    let mut reports = Vec::new();
    if n >= 2 {
        let samples = default_samples(n, opts.samples, opts.seed);
        let ms = MomentIndex::enumerate(n, opts.degree_cutoff);
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
            .collect();
        reports.push(checker.sum_form(&samples)?);
        if opts.all_forms {
            for rho in enumerate_admissible_rho(n) {
                reports.push(checker.per_rho_form(&rho, &samples)?);
            }
        }
        reports.push(checker.moment_form(&ms)?);
        reports.push(checker.pluriharmonic_form(&pairs, &samples)?);
        if opts.all_forms {
            reports.push(checker.torus_form(&ms)?);
        }
    }
    let verdict = Verdict::from_bool(reports.iter().all(|r| r.verdict.passed()));
    let unconverged_witnesses = reports.iter().map(|r| r.unconverged).sum();
    Ok(AdmissibilityReport {
        dimension: n,
        growth: GrowthSummary {
            value: g.value.re,
            error_estimate: g.error_estimate,
            converged: true,
        },
        reports,
        structural,
        verdict,
        unconverged_witnesses,
    })
}

/// Verdicts of each form, for comparing them against one another.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormVerdicts {
    pub sum_a: Verdict,
    pub per_rho_b: Verdict,
    pub moment_c: Verdict,
    pub pluriharmonic_d: Verdict,
    pub torus: Verdict,
}

impl FormVerdicts {
    pub fn all_agree(&self) -> bool {
        let v = [
            self.per_rho_b,
            self.moment_c,
            self.pluriharmonic_d,
            self.torus,
        ];
        v.iter().all(|&x| x == self.sum_a)
    }
}

/// Run every form with all witnesses and collect the verdicts.
pub fn form_verdicts(
    mu: &Measure,
    spec: &QuadratureSpec,
    opts: &AdmissibilityOptions,
) -> Result<FormVerdicts> {
    let opts = AdmissibilityOptions {
        all_forms: true,
        ..opts.clone()
    };
    let rep = full_admissibility(mu, spec, &opts)?;
    let pass = |f: Form| {
        Verdict::from_bool(
            rep.growth.converged
                && rep
                    .reports
                    .iter()
                    .filter(|r| r.form == f)
                    .all(|r| r.verdict.passed()),
        )
    };
    Ok(FormVerdicts {
        sum_a: pass(Form::SumA),
        per_rho_b: pass(Form::PerRhoB),
        moment_c: pass(Form::MomentC),
        pluriharmonic_d: pass(Form::PluriharmonicD),
        torus: pass(Form::Torus),
    })
}

/// `(i, …, i)` — the canonical sample.
pub fn i_sample(n: usize) -> UpperPoint {
    UpperPoint::new(vec![I; n]).expect("i is in the upper half-plane")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::n_factor_unchecked;
    use crate::measures::Density;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn density2() -> Measure {
        Measure::with_density(2, Density::builtin("inv_one_plus_t2_product").unwrap()).unwrap()
    }

    fn hyper3() -> Measure {
        Measure::hyperplane(vec![1.0, 1.0, 1.0], 0.0, PI).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn enumerates_moment_indices() {
        let ms = MomentIndex::enumerate(2, 1);
        assert_eq!(ms, vec![MomentIndex(vec![1, -1])]);
        // admissible count for n = 2, cutoff 3 is 2·3·3 = 18, halved
        assert_eq!(MomentIndex::enumerate(2, 3).len(), 9);
    }

    #[test]
    fn lebesgue_passes_sum_and_moment() {
        let mu = Measure::lebesgue(2);
        let s = default_samples(2, 4, 0);
        let a = check_sum_form(&mu, &s, &spec()).unwrap();
        assert!(a.verdict.passed(), "{a:?}");
        let c = check_moment_form(&mu, &MomentIndex(vec![1, -1]), &spec()).unwrap();
        assert!(c.verdict.passed());
        let d = check_pluriharmonic_form(&mu, 1, 2, &s, &spec()).unwrap();
        assert!(d.verdict.passed());
    }

    #[test]
    fn density_moment_residual_is_pi_squared_over_16() {
        let r = check_moment_form(&density2(), &MomentIndex(vec![1, -1]), &spec()).unwrap();
        assert!((r.max_raw_residual - PI * PI / 16.0).abs() < 1e-8);
        assert_eq!(r.verdict, Verdict::Fail);
        let t = check_torus_moments(&density2(), &MomentIndex(vec![1, -1]), &spec()).unwrap();
        assert!((t.max_raw_residual - 4.0 * PI * PI / 16.0).abs() < 1e-7);
    }

    #[test]
    fn atom_per_rho_residual() {
        let mu = Measure::point_mass(vec![0.0, 0.0], 1.0).unwrap();
        let z = UpperPoint::new(vec![c(0.0, 2.0), c(0.0, 2.0)]).unwrap();
        let rho = RhoVector::new(vec![1, -1]).unwrap();
        let r = check_per_rho_form(&mu, &rho, &[z], &spec()).unwrap();
        let want = (n_factor_unchecked(1, c(0.0, 2.0), 0.0)
            * n_factor_unchecked(-1, c(0.0, 2.0), 0.0))
        .norm();
        assert!((r.max_raw_residual - want).abs() < 1e-15);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            check_moment_form(&Measure::lebesgue(2), &MomentIndex(vec![1, 1]), &spec()),
            Err(HnError::Precondition(_))
        ));
        assert!(matches!(
            check_torus_moments(&Measure::lebesgue(1), &MomentIndex(vec![1]), &spec()),
            Err(HnError::Precondition(_))
        ));
    }

    #[test]
    fn one_variable_is_growth_only() {
        let r = full_admissibility(&Measure::lebesgue(1), &spec(), &Default::default()).unwrap();
        assert!(r.verdict.passed());
        assert!(r.reports.is_empty());
        let s = check_sum_form(&Measure::lebesgue(1), &default_samples(1, 3, 0), &spec()).unwrap();
        assert!(s.verdict.passed() && s.max_raw_residual == 0.0);
    }

    #[test]
    fn hyperplane_passes_per_rho() {
        let z = UpperPoint::new(vec![c(0.0, 1.0), c(0.0, 2.0), c(0.0, 3.0)]).unwrap();
        for rho in enumerate_admissible_rho(3) {
            let r = check_per_rho_form(&hyper3(), &rho, std::slice::from_ref(&z), &spec()).unwrap();
            assert!(r.verdict.passed(), "{rho:?} {}", r.max_raw_residual);
        }
    }

    #[test]
    fn structural() {
        let s = structural_checks(&hyper3(), &spec());
        assert!(s.verdict.passed() && !s.finite_mass, "{s:?}");
        let s = structural_checks(&Measure::point_mass(vec![0.0, 0.0], 1.0).unwrap(), &spec());
        assert_eq!(s.verdict, Verdict::Fail);
        let s = structural_checks(&Measure::zero(2), &spec());
        assert!(s.verdict.passed() && s.zero_measure);
        let s = structural_checks(&density2(), &spec());
        assert!(s.finite_mass);
    }

    #[test]
    fn aggregate_discriminates() {
        let o = AdmissibilityOptions {
            samples: 4,
            degree_cutoff: 2,
            ..Default::default()
        };
        assert!(full_admissibility(&Measure::lebesgue(2), &spec(), &o)
            .unwrap()
            .verdict
            .passed());
        assert_eq!(
            full_admissibility(&density2(), &spec(), &o)
                .unwrap()
                .verdict,
            Verdict::Fail
        );
    }

    #[test]
    fn violated_growth_fails_aggregate() {
        let mu =
            Measure::with_density(2, Density::builtin("one_plus_t2_product").unwrap()).unwrap();
        let s = QuadratureSpec {
            max_panels: Some(3000),
            ..spec()
        };
        let r = full_admissibility(&mu, &s, &Default::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.growth.converged);
    }

    #[test]
    fn report_json_shape() {
        let r = check_moment_form(&density2(), &MomentIndex(vec![1, -1]), &spec()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["form"], "moment_c");
        assert_eq!(v["verdict"], "fail");
        assert!(v["witnesses"][0]["m"].is_array());
        assert!(v["witnesses"][0]["residual"].is_number());
    }
}
