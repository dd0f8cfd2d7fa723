//! Evaluate q = a + Σ b_ℓ z_ℓ + π⁻ⁿ ∫ K_n(z, t) dμ(t) by quadrature and compare
//! with known closed forms, on the upper component and off it.

use hnkit::catalog::entry;
use hnkit::domain::{components, random_point_in_component};
use hnkit::measures::QuadratureSpec;
use hnkit::representation::evaluate_q_report;
use rand::SeedableRng;

fn main() -> hnkit::Result<()> {
    let spec = QuadratureSpec::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for name in ["const_i_2", "two_var_shifted", "three_var_inverse"] {
        let e = entry(name)?;
        println!("{name}: {}", e.notes);
        for signs in components(e.n) {
            let z = random_point_in_component(&mut rng, &signs);
            let r = evaluate_q_report(&e.data, &z, &spec)?;
            let closed = e.closed_form(z.coords());
            let dev = closed.map(|c| format!("{:.1e}", (c - r.value).norm()));
            println!(
                "  z = {:?}\n    q = {:.10}  (err est {:.1e}, {} panels, closed-form dev {})",
                z.coords(),
                r.value,
                r.error_estimate,
                r.panels_used,
                dev.as_deref().unwrap_or("n/a")
            );
        }
    }
    Ok(())
}
