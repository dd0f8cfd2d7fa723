//! Values off the poly-upper half-plane from values on it.

use hnkit::catalog::entry;
use hnkit::domain::IndexSet;
use hnkit::domain::{classify, OffRealPoint, I};
use hnkit::measures::QuadratureSpec;
use hnkit::representation::evaluate_q_extended;
use hnkit::symmetry::{
    check_cplus_independence, independence_spec, psi, symmetric_value_g, symmetric_value_q,
    INDEPENDENCE_STEP,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> hnkit::Result<()> {
    let z = OffRealPoint::new(vec![I, -I, c(1.0, 2.0), I, c(-5.0, -1.0), c(2.0, -1.0)])?;
    let cls = classify(&z);
    println!("classification of {:?}:\n  {cls:?}", z.coords());
    let b = IndexSet::new(6, [3, 5])?;
    println!("Psi_{{3,5}} = {:?}", psi(&z, &b).coords());

    let spec = QuadratureSpec::default();
    let e = entry("two_var_shifted")?;
    for p in [
        vec![c(1.0, 1.0), c(-2.0, -0.5)],
        vec![c(-1.0, -2.0), c(0.5, -1.0)],
        vec![-I, c(3.0, 1.0)],
    ] {
        let z = OffRealPoint::new(p)?;
        let sym = symmetric_value_q(&e.data, &z, &spec)?;
        let direct = evaluate_q_extended(&e.data, &z, &spec)?;
        let g = symmetric_value_g(&e.pure_oracle(), &z)?;
        println!(
            "{:?}: formula {sym:.10}, direct {direct:.10}, closed form {:.10}, pure part {g:.6}",
            z.coords(),
            e.closed_form(z.coords()).unwrap()
        );
    }

    // dependence on upper coordinates at a mixed point
    let z = OffRealPoint::new(vec![c(0.3, 1.2), c(-0.7, -0.5)])?;
    for name in ["two_var_shifted", "nonadmissible_density"] {
        let r = check_cplus_independence(
            &entry(name)?.data,
            &z,
            &[INDEPENDENCE_STEP],
            &independence_spec(),
        )?;
        println!(
            "{name}: max |dq/dz_upper| = {:.3e} -> independent {}",
            r.max_sensitivity, r.independent
        );
    }
    Ok(())
}
