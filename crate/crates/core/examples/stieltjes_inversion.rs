//! Recover ∫ ψ dμ from boundary behaviour of Im q.

use std::f64::consts::PI;

use hnkit::catalog::entry;
use hnkit::measures::{integrate, QuadratureSpec};
use hnkit::representation::{
    default_stieltjes_ladder, lorentzian_product, stieltjes_inverse, TestFunction,
};
use num_complex::Complex64;

fn main() -> hnkit::Result<()> {
    let spec = QuadratureSpec::with_tolerances(1e-4, 1e-10);
    let psi = TestFunction {
        f: &lorentzian_product,
        bound: 1.0,
    };
    let ladder = default_stieltjes_ladder();
    for (name, exact) in [("const_i_2", Some(PI * PI)), ("three_var_inverse", None)] {
        let e = entry(name)?;
        let r = stieltjes_inverse(&e.oracle(), &psi, &ladder, &spec)?;
        let reference = match exact {
            Some(v) => v,
            None => {
                integrate(
                    &e.data.mu,
                    &|t: &[f64]| Complex64::new(lorentzian_product(t), 0.0),
                    &QuadratureSpec::default(),
                )
                .require_converged()?
                .value
                .re
            }
        };
        println!("{name}:");
        for s in &r.samples {
            println!("  y = {:<8} I(y) = {:.8}", s.scale, s.value.re);
        }
        println!(
            "  extrapolated {:.6} (order {}, ± {:.1e}) vs {:.6}",
            r.value, r.extrapolation_order, r.error_estimate, reference
        );
    }
    Ok(())
}
