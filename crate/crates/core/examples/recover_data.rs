//! Recover a, b, c and point masses from function values alone.

use hnkit::catalog::entry;
use hnkit::domain::NonTangentialPath;
use hnkit::measures::QuadratureSpec;
use hnkit::representation::{
    oracle_fn, recover_a, recover_b, recover_c, recover_point_mass_1d, slope_at_infinity_1d,
    DataOracle,
};
use num_complex::Complex64;

fn main() -> hnkit::Result<()> {
    let inf = NonTangentialPath::to_infinity();
    let zero = NonTangentialPath::to_point(0.0);

    let e = entry("two_var_shifted")?;
    let q = e.oracle();
    println!("{} (closed form): a = {:.6}", e.name, recover_a(&q)?);
    for j in 1..=e.n {
        let b = recover_b(&q, j, &inf)?;
        let c = recover_c(&q, j, &zero)?;
        println!(
            "  b_{j} = {:.6} ± {:.1e}   c_{j} = {:.6} ± {:.1e}",
            b.value, b.error_estimate, c.value, c.error_estimate
        );
    }

    // the same from quadrature values
    let tv = entry("three_var_inverse")?;
    let q = DataOracle::new(tv.data.clone(), QuadratureSpec::default());
    println!("{} (quadrature): a = {:.9}", tv.name, recover_a(&q)?);
    for j in 1..=3 {
        let b = recover_b(&q, j, &inf)?;
        println!(
            "  b_{j} = {:.2e} ± {:.1e} {:?}",
            b.value, b.error_estimate, b.warnings
        );
    }

    let r = entry("one_var_reciprocal")?;
    let q = r.oracle();
    for t0 in [0.0, 1.0] {
        let m = recover_point_mass_1d(&q, t0, &NonTangentialPath::to_point(t0))?;
        println!("-1/z: mass at {t0} = {:.6}", m.value);
    }
    let affine = oracle_fn(1, |z: &[Complex64]| 0.5 + 3.0 * z[0] - 1.0 / z[0]);
    println!(
        "0.5 + 3z - 1/z: slope = {:.9}",
        slope_at_infinity_1d(&affine, &inf)?.value
    );
    Ok(())
}
