//! Check growth and the Nevanlinna condition in its equivalent forms.

use hnkit::catalog::entry;
use hnkit::conditions::{form_verdicts, full_admissibility, AdmissibilityOptions, Form};
use hnkit::measures::{Density, Measure, QuadratureSpec};

fn main() -> hnkit::Result<()> {
    let spec = QuadratureSpec::default();
    let opts = AdmissibilityOptions {
        structural: true,
        ..Default::default()
    };
    let measures = [
        ("Lebesgue on R^2", Measure::lebesgue(2)),
        ("pi x plane t1+t2+t3=0", entry("three_var_inverse")?.data.mu),
        (
            "density prod 1/(1+t^2)",
            Measure::with_density(2, Density::builtin("inv_one_plus_t2_product")?)?,
        ),
        (
            "density prod (1+t^2)",
            Measure::with_density(2, Density::builtin("one_plus_t2_product")?)?,
        ),
    ];
    for (label, mu) in &measures {
        let rep = full_admissibility(mu, &spec, &opts)?;
        println!(
            "{label}: {:?} (growth {:.6}, converged {})",
            rep.verdict, rep.growth.value, rep.growth.converged
        );
        for r in &rep.reports {
            println!(
                "  {:?}: max certified residual {:.3e} vs tol {:.1e} -> {:?}",
                r.form, r.max_residual, r.tolerance, r.verdict
            );
        }
        if let Some(m) = rep.report(Form::MomentC) {
            if let Some(w) = m
                .witnesses
                .iter()
                .max_by(|a, b| a.residual.total_cmp(&b.residual))
            {
                println!(
                    "  worst moment witness: {:?} residual {:.9}",
                    w.witness, w.residual
                );
            }
        }
        if let Some(s) = &rep.structural {
            println!("  structural: {s:?}");
        }
        if rep.growth.converged {
            let v = form_verdicts(mu, &spec, &opts)?;
            println!("  all forms agree: {} {v:?}", v.all_agree());
        }
    }
    Ok(())
}
