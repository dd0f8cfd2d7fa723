//! The kernel, its Poisson part and the mixed-sign N-products.

use hnkit::domain::{enumerate_admissible_rho, random_upper_point, OffRealPoint, I};
use hnkit::kernels::{
    cayley, decomposition_scale, eval_k, eval_poisson, im_k_decomposition_residual, inverse_cayley,
    mixed_sign_sum, KernelPoint,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn main() -> hnkit::Result<()> {
    let p = KernelPoint::new(OffRealPoint::new(vec![I, I])?, vec![0.0, 0.0])?;
    println!(
        "K_2(i,i; 0,0) = {}   P_2 = {}",
        eval_k(&p)?,
        eval_poisson(&p)?
    );
    println!(
        "admissible rho for n = 3: {}",
        enumerate_admissible_rho(3).len()
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for n in 1..=5 {
        let mut worst: f64 = 0.0;
        for _ in 0..500 {
            let z = random_upper_point(&mut rng, n).to_off_real();
            let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let p = KernelPoint::new(z, t)?;
            worst = worst.max(im_k_decomposition_residual(&p)? / decomposition_scale(&p)?);
        }
        println!("n = {n}: max |Im K - P + (2i)^-n sum N| / scale = {worst:.2e}");
    }

    let z = Complex64::new(0.7, 0.4);
    let p = KernelPoint::new(
        OffRealPoint::new(vec![z, Complex64::new(-1.0, 2.0)])?,
        vec![0.3, -2.0],
    )?;
    println!(
        "mixed-sign tail at a sample point: {:.6}",
        mixed_sign_sum(&p)?
    );
    let w = cayley(z)?;
    println!("cayley({z}) = {w:.6}, back: {:.12}", inverse_cayley(w)?);
    Ok(())
}
