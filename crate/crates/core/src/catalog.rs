//! Worked examples with known closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{OffRealPoint, I};
use crate::error::{HnError, Result};
use crate::kernels::kernel_unchecked;
use crate::measures::{integrate, Density, Measure, QuadratureSpec};
use crate::representation::{FunctionOracle, RepresentationData};

type ClosedForm = fn(&[Complex64]) -> Option<Complex64>;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub n: usize,
    pub data: RepresentationData,
    pub admissible: bool,
    pub notes: &'static str,
    /// Components on which `closed_form` is known, as sign patterns (`true` = ℂ⁺).
    pub known_components: &'static str,
    closed_form: ClosedForm,
}

impl CatalogEntry {
    /// The closed form at `z`, if known on its component.
    pub fn closed_form(&self, z: &[Complex64]) -> Option<Complex64> {
        if z.len() != self.n {
            return None;
        }
        (self.closed_form)(z)
    }

    /// The closed form minus `a + Σ b_ℓ z_ℓ`.
    pub fn closed_form_pure(&self, z: &[Complex64]) -> Option<Complex64> {
        let lin = z
            .iter()
            .zip(&self.data.b)
            .fold(Complex64::new(self.data.a, 0.0), |acc, (zl, bl)| {
                acc + zl * bl
            });
        self.closed_form(z).map(|v| v - lin)
    }

    pub fn oracle(&self) -> ClosedFormOracle<'_> {
        ClosedFormOracle {
            entry: self,
            pure: false,
        }
    }

    /// Oracle for the pure-integral part (data with `a`, `b` set to zero).
    pub fn pure_oracle(&self) -> ClosedFormOracle<'_> {
        ClosedFormOracle {
            entry: self,
            pure: true,
        }
    }

    pub fn summary(&self) -> EntrySummary {
        EntrySummary {
            name: self.name.to_string(),
            n: self.n,
            data: self.data.clone(),
            admissible: self.admissible,
            closed_form_components: self.known_components.to_string(),
            notes: self.notes.to_string(),
        }
    }
}

/// JSON view of a catalog entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntrySummary {
    pub name: String,
    pub n: usize,
    pub data: RepresentationData,
    pub admissible: bool,
    pub closed_form_components: String,
    pub notes: String,
}

pub struct ClosedFormOracle<'a> {
    entry: &'a CatalogEntry,
    pure: bool,
}

impl FunctionOracle for ClosedFormOracle<'_> {
    fn dim(&self) -> usize {
        self.entry.n
    }

    fn eval(&self, z: &OffRealPoint) -> Result<Complex64> {
        let v = if self.pure {
            self.entry.closed_form_pure(z.coords())
        } else {
            self.entry.closed_form(z.coords())
        };
        v.ok_or_else(|| {
            HnError::domain(format!(
                "no closed form for {} on the component of {:?}",
                self.entry.name,
                z.coords()
            ))
        })
    }
}

fn all_upper(z: &[Complex64]) -> bool {
    z.iter().all(|w| w.im > 0.0)
}

fn const_i(z: &[Complex64]) -> Option<Complex64> {
    Some(if all_upper(z) { I } else { -I })
}

fn three_var(z: &[Complex64]) -> Option<Complex64> {
    all_upper(z).then(|| 1.0 - 1.0 / (z[0] + z[1] + z[2]))
}

fn two_var(z: &[Complex64]) -> Option<Complex64> {
    let (w1, w2) = (z[0], z[1]);
    let pure = match (w1.im > 0.0, w2.im > 0.0) {
        (true, true) => -1.0 / (w1 + w2),
        (false, true) => 1.0 / (I - w1),
        (true, false) => 1.0 / (I - w2),
        (false, false) => 1.0 / (I - w1) + 1.0 / (I - w2) + 1.0 / (w1 + w2),
    };
    Some(2.0 * w2 + pure)
}

fn density(z: &[Complex64]) -> Option<Complex64> {
    let (w1, w2) = (z[0], z[1]);
    Some(match (w1.im > 0.0, w2.im > 0.0) {
        (true, true) => -(7.0 * I + w1 + w2 + I * w1 * w2) / (8.0 * (w1 + I) * (w2 + I)),
        (false, true) => -(5.0 * I + w1 + 3.0 * w2 + I * w1 * w2) / (8.0 * (w1 - I) * (w2 + I)),
        (true, false) => -(5.0 * I + 3.0 * w1 + w2 + I * w1 * w2) / (8.0 * (w1 + I) * (w2 - I)),
        (false, false) => -(-I + 3.0 * w1 + 3.0 * w2 + I * w1 * w2) / (8.0 * (w1 - I) * (w2 - I)),
    })
}

fn reciprocal(z: &[Complex64]) -> Option<Complex64> {
    Some(-1.0 / z[0])
}

fn hyperplane(n: usize) -> Measure {
    Measure::scaled(
        PI,
        Measure::hyperplane(vec![1.0; n], 0.0, 1.0).expect("valid normal"),
    )
    .expect("positive factor")
}

/// All built-in entries.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for (n, name) in [(1, "const_i_1"), (2, "const_i_2"), (3, "const_i_3")] {
        out.push(CatalogEntry {
            name,
            n,
            data: RepresentationData::measure_only(Measure::lebesgue(n)),
            admissible: true,
            notes: "Lebesgue measure; the constant i on the poly-upper half-plane, -i on every other component",
            known_components: "all",
            closed_form: const_i,
        });
    }
    out.push(CatalogEntry {
        name: "three_var_inverse",
        n: 3,
        data: RepresentationData::new(1.0, vec![0.0; 3], hyperplane(3)).expect("valid data"),
        admissible: true,
        notes: "pi times the coordinate Lebesgue measure on t1+t2+t3=0; q = 1 - 1/(z1+z2+z3)",
        known_components: "+++",
        closed_form: three_var,
    });
    out.push(CatalogEntry {
        name: "two_var_shifted",
        n: 2,
        data: RepresentationData::new(0.0, vec![0.0, 2.0], hyperplane(2)).expect("valid data"),
        admissible: true,
        notes: "q = 2 z2 - 1/(z1+z2); measure pi dt1 on t2=-t1, certified by the closed-form match",
        known_components: "all",
        closed_form: two_var,
    });
    out.push(CatalogEntry {
        name: "nonadmissible_density",
        n: 2,
        data: RepresentationData::measure_only(
            Measure::with_density(2, Density::builtin("inv_one_plus_t2_product").expect("builtin"))
                .expect("dimension 2"),
        ),
        admissible: false,
        notes: "density prod 1/(1+t^2): satisfies the growth condition but not the Nevanlinna condition",
        known_components: "all",
        closed_form: density,
    });
    out.push(CatalogEntry {
        name: "one_var_reciprocal",
        n: 1,
        data: RepresentationData::measure_only(
            Measure::point_mass(vec![0.0], PI).expect("valid atom"),
        ),
        admissible: true,
        notes: "q = -1/z; atom of mass pi at 0 (recovered as pi * lim (0 - z) q(z))",
        known_components: "all",
        closed_form: reciprocal,
    });
    out
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| {
            let names: Vec<&str> = entries().iter().map(|e| e.name).collect();
            HnError::input(format!(
                "unknown catalog entry '{name}' (known: {})",
                names.join(", ")
            ))
        })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CascadeReport {
    pub n: usize,
    pub z: Vec<Complex64>,
    pub t_rest: Vec<f64>,
    /// `upper` when `z_1 ∈ ℂ⁺`, `lower` otherwise.
    pub branch: String,
    pub integral: Complex64,
    pub expected: Complex64,
    pub residual: f64,
    pub error_estimate: f64,
}

/// Integrate `K_n(z, (t_1, t_rest))` over `t_1` and compare with `π K_{n−1}(z_rest, t_rest)`
/// (`z_1` upper) or `−π K_{n−1}(i, …, i; t_rest)` (`z_1` lower).
pub fn residue_cascade_check(
    z: &OffRealPoint,
    t_rest: &[f64],
    spec: &QuadratureSpec,
) -> Result<CascadeReport> {
    let n = z.dim();
    if t_rest.len() + 1 != n {
        return Err(HnError::DimensionMismatch {
            expected: n - 1,
            got: t_rest.len(),
        });
    }
    let zc = z.coords();
    let r = integrate(
        &Measure::lebesgue(1),
        &|t1: &[f64]| {
            let mut t = Vec::with_capacity(n);
            t.push(t1[0]);
            t.extend_from_slice(t_rest);
            kernel_unchecked(zc, &t)
        },
        spec,
    )
    .require_converged()?;
    let upper = zc[0].im > 0.0;
    let expected = if upper {
        PI * kernel_unchecked(&zc[1..], t_rest)
    } else {
        -PI * kernel_unchecked(&vec![I; n - 1], t_rest)
    };
    Ok(CascadeReport {
        n,
        z: zc.to_vec(),
        t_rest: t_rest.to_vec(),
        branch: if upper { "upper" } else { "lower" }.into(),
        integral: r.value,
        expected,
        residual: (r.value - expected).norm(),
        error_estimate: r.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{components, random_point_in_component};
    use crate::representation::evaluate_q_extended;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        let e = entry("const_i_2").unwrap();
        assert_eq!(e.closed_form(&[I, c(0.0, 2.0)]), Some(I));
        let d = entry("nonadmissible_density").unwrap();
        assert!((d.closed_form(&[I, I]).unwrap() - c(0.0, 0.25)).norm() < 1e-15);
        let t = entry("two_var_shifted").unwrap();
        let (z1, z2) = (c(0.3, 1.0), c(-1.0, 0.5));
        let (w1, w2) = (z1.conj(), z2.conj());
        let want = 1.0 / (I - w1) + 1.0 / (I - w2) + 1.0 / (w1 + w2);
        assert!((t.closed_form_pure(&[w1, w2]).unwrap() - want).norm() < 1e-15);
        assert!(entry("nope").is_err());
        assert_eq!(entries().len(), 7);
    }

    #[test]
    fn quadrature_matches_closed_forms_in_two_variables() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["two_var_shifted", "nonadmissible_density", "const_i_2"] {
            let e = entry(name).unwrap();
            for signs in components(2) {
                let z = random_point_in_component(&mut rng, &signs);
                let q = evaluate_q_extended(&e.data, &z, &QuadratureSpec::default()).unwrap();
                let want = e.closed_form(z.coords()).unwrap();
                assert!((q - want).norm() < 1e-6, "{name} {signs:?} {q} {want}");
            }
        }
    }

    #[test]
    fn one_variable_reciprocal_everywhere() {
        let e = entry("one_var_reciprocal").unwrap();
        for z in [c(0.5, 1.0), c(-2.0, -0.3)] {
            let p = OffRealPoint::new(vec![z]).unwrap();
            let q = evaluate_q_extended(&e.data, &p, &QuadratureSpec::default()).unwrap();
            assert!((q + 1.0 / z).norm() < 1e-14);
        }
    }

    #[test]
    fn cascade_branches() {
        let s = QuadratureSpec::with_tolerances(1e-10, 1e-13);
        let r = residue_cascade_check(&OffRealPoint::new(vec![I]).unwrap(), &[], &s).unwrap();
        assert!((r.integral - PI * I).norm() < 1e-8);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=3 {
            for _ in 0..10 {
                let signs: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
                let z = random_point_in_component(&mut rng, &signs);
                let t_rest: Vec<f64> = (1..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let r = residue_cascade_check(&z, &t_rest, &s).unwrap();
                assert!(r.residual <= 1e-7, "{r:?}");
            }
        }
    }

    #[test]
    fn summaries_serialize() {
        let v = serde_json::to_value(entries().iter().map(|e| e.summary()).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(v[3]["name"], "three_var_inverse");
        assert_eq!(v[3]["data"]["mu"]["type"], "scaled");
    }
}
