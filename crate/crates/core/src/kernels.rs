//! Closed-form kernels: the representation kernel `K_n`, the Poisson kernel of
//! the poly-upper half-plane, the `N` factors, the reflection helper `f`, and
//! the Cayley transform.
//!
//! Every difference of simple fractions is evaluated as a single fraction, so
//! each factor keeps full relative precision for large `|t|` where it decays
//! like `1 / (1 + t^2)`.

use num_complex::Complex64;

use crate::domain::{enumerate_admissible_rho, OffRealPoint, RhoVector, I};
use crate::error::{HnError, Result};

/// A pair `(z, t)` with `z in (C \ R)^n` and `t in R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPoint {
    pub z: OffRealPoint,
    pub t: Vec<f64>,
}

impl KernelPoint {
    pub fn new(z: OffRealPoint, t: Vec<f64>) -> Result<Self> {
        if z.dim() != t.len() {
            return Err(HnError::DimensionMismatch {
                expected: z.dim(),
                got: t.len(),
            });
        }
        if t.iter().any(|x| !x.is_finite()) {
            return Err(HnError::domain("t must be finite"));
        }
        Ok(KernelPoint { z, t })
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }
}

/// A point of the unit polydisk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskPoint(Vec<Complex64>);

impl DiskPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.iter().any(|w| !(w.norm() < 1.0)) {
            return Err(HnError::domain("disk coordinates must have modulus < 1"));
        }
        Ok(DiskPoint(coords))
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    /// Coordinatewise inverse Cayley image in the poly-upper half-plane.
    pub fn to_upper(&self) -> Vec<Complex64> {
        self.0
            .iter()
            .map(|&w| inverse_cayley_unchecked(w))
            .collect()
    }
}

#[inline]
fn inv_two_i_pow(n: usize) -> Complex64 {
    // (2i)^{-n}
    let mag = 0.5f64.powi(n as i32);
    let phase = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    phase * mag
}

/// `K_n(z, t)` without argument checks. `z` and `t` must have equal length;
/// the empty case returns `K_0 = i`.
#[inline]
pub fn kernel_unchecked(z: &[Complex64], t: &[f64]) -> Complex64 {
    let n = z.len();
    let mut holo = Complex64::new(1.0, 0.0);
    let mut sym = 1.0;
    for (&zl, &tl) in z.iter().zip(t) {
        // 1/(t - z) - 1/(t + i) = (z + i) / ((t - z)(t + i))
        holo *= (zl + I) / ((tl - zl) * Complex64::new(tl, 1.0));
        sym /= 1.0 + tl * tl;
    }
    // (2i)^{-n} prod (1/(t-i) - 1/(t+i)) = prod 1/(1+t^2)
    I * (2.0 * inv_two_i_pow(n) * holo - sym)
}

/// `K_n(z, t)` times `prod (1 + t_l^2)`: bounded for large `|t|`.
#[inline]
pub fn kernel_weighted_unchecked(z: &[Complex64], t: &[f64]) -> Complex64 {
    let n = z.len();
    let mut holo = Complex64::new(1.0, 0.0);
    for (&zl, &tl) in z.iter().zip(t) {
        // (z + i)(1 + t^2) / ((t - z)(t + i)) = (z + i)(t - i) / (t - z)
        holo *= (zl + I) * Complex64::new(tl, -1.0) / (tl - zl);
    }
    I * (2.0 * inv_two_i_pow(n) * holo - 1.0)
}

/// The kernel `K_0 = i`.
pub fn kernel_zero() -> Complex64 {
    I
}

pub fn eval_k(p: &KernelPoint) -> Result<Complex64> {
    for (l, (z, t)) in p.z.coords().iter().zip(&p.t).enumerate() {
        if z.im == 0.0 || (z.re == *t && z.im == 0.0) {
            return Err(HnError::domain(format!(
                "K_n is undefined at coordinate {}: z = {z}, t = {t}",
                l + 1
            )));
        }
    }
    Ok(kernel_unchecked(p.z.coords(), &p.t))
}

#[inline]
pub fn poisson_unchecked(z: &[Complex64], t: &[f64]) -> f64 {
    z.iter()
        .zip(t)
        .map(|(&zl, &tl)| zl.im / (tl - zl).norm_sqr())
        .product()
}

/// `P_n(z, t)` times `prod (1 + t_l^2)`.
#[inline]
pub fn poisson_weighted_unchecked(z: &[Complex64], t: &[f64]) -> f64 {
    z.iter()
        .zip(t)
        .map(|(&zl, &tl)| zl.im * (1.0 + tl * tl) / (tl - zl).norm_sqr())
        .product()
}

/// Poisson kernel of the poly-upper half-plane, `prod Im z_l / |t_l - z_l|^2`.
pub fn eval_poisson(p: &KernelPoint) -> Result<f64> {
    if let Some((l, z)) = p.z.coords().iter().enumerate().find(|(_, z)| z.im <= 0.0) {
        return Err(HnError::domain(format!(
            "Poisson kernel needs Im z > 0, coordinate {} is {z}",
            l + 1
        )));
    }
    Ok(poisson_unchecked(p.z.coords(), &p.t))
}

#[inline]
pub fn n_factor_unchecked(rho: i8, z: Complex64, t: f64) -> Complex64 {
    match rho {
        // 1/(t - z) - 1/(t - i)
        -1 => (z - I) / ((t - z) * Complex64::new(t, -1.0)),
        // 1/(t - i) - 1/(t + i)
        0 => Complex64::new(0.0, 2.0 / (1.0 + t * t)),
        // 1/(t + i) - 1/(t - conj z)
        _ => -(z.conj() + I) / (Complex64::new(t, 1.0) * (t - z.conj())),
    }
}

/// One factor `N_{rho, j}` evaluated at `(z_j, t_j)`.
pub fn eval_n(rho: i8, z: Complex64, t: f64) -> Result<Complex64> {
    if !(-1..=1).contains(&rho) {
        return Err(HnError::domain(format!(
            "rho entry {rho} is not in {{-1, 0, 1}}"
        )));
    }
    if rho != 0 && z.im == 0.0 {
        return Err(HnError::domain(format!(
            "N_{{{rho}}} needs a non-real z, got {z}"
        )));
    }
    Ok(n_factor_unchecked(rho, z, t))
}

#[inline]
pub fn rho_product_unchecked(rho: &[i8], z: &[Complex64], t: &[f64]) -> Complex64 {
    rho.iter()
        .zip(z.iter().zip(t))
        .map(|(&r, (&zl, &tl))| n_factor_unchecked(r, zl, tl))
        .product()
}

/// `prod_j N_{rho_j, j}(z_j, t_j)`.
pub fn eval_rho_product(rho: &RhoVector, p: &KernelPoint) -> Result<Complex64> {
    if rho.dim() != p.dim() {
        return Err(HnError::DimensionMismatch {
            expected: p.dim(),
            got: rho.dim(),
        });
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for (&r, (&z, &t)) in rho.entries().iter().zip(p.z.coords().iter().zip(&p.t)) {
        acc *= eval_n(r, z, t)?;
    }
    Ok(acc)
}

/// `(2i)^{-n} * sum over admissible rho of prod N_{rho_j, j}`.
pub fn mixed_sign_sum(p: &KernelPoint) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for rho in enumerate_admissible_rho(p.dim()) {
        sum += eval_rho_product(&rho, p)?;
    }
    Ok(inv_two_i_pow(p.dim()) * sum)
}

/// `| Im K_n - P_n + (2i)^{-n} sum_rho prod N |`, which vanishes identically on
/// the poly-upper half-plane.
pub fn im_k_decomposition_residual(p: &KernelPoint) -> Result<f64> {
    let k = eval_k(p)?;
    let pois = eval_poisson(p)?;
    let tail = mixed_sign_sum(p)?;
    Ok((Complex64::new(k.im - pois, 0.0) + tail).norm())
}

/// Scale against which [`im_k_decomposition_residual`] is judged: `|Im K| + P + 1`.
pub fn decomposition_scale(p: &KernelPoint) -> Result<f64> {
    Ok(eval_k(p)?.im.abs() + eval_poisson(p)? + 1.0)
}

/// `f(z, t) = (z + i)(t - i) / (2i (t - z))`.
pub fn eval_f(z: Complex64, t: f64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(HnError::domain(format!(
            "f(z, t) needs a non-real z, got {z}"
        )));
    }
    Ok((z + I) * Complex64::new(t, -1.0) / (2.0 * I * (t - z)))
}

/// `C(z)` with `|K_n(z, t)| <= C(z) prod 1/(1 + t_l^2)` for every real `t`.
///
/// Uses `|t - z|^2 >= c(z)^2 (1 + t^2)` where `c(z)^2` is the smaller
/// eigenvalue of `[[1, -x], [-x, x^2 + y^2]]`.
pub fn kernel_bound_constant(z: &[Complex64]) -> f64 {
    let n = z.len();
    let holo: f64 = z
        .iter()
        .map(|zl| {
            let (x, y) = (zl.re, zl.im);
            let tr = 1.0 + x * x + y * y;
            let det = y * y;
            let lam_min = 2.0 * det / (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
            (zl + I).norm() / lam_min.sqrt()
        })
        .product();
    2.0 * 0.5f64.powi(n as i32) * holo + 1.0
}

pub fn cayley(z: Complex64) -> Result<Complex64> {
    if z == -I {
        return Err(HnError::domain("the Cayley transform is singular at -i"));
    }
    Ok((z - I) / (z + I))
}

pub fn inverse_cayley(w: Complex64) -> Result<Complex64> {
    if w == Complex64::new(1.0, 0.0) {
        return Err(HnError::domain(
            "the inverse Cayley transform is singular at 1",
        ));
    }
    Ok(inverse_cayley_unchecked(w))
}

#[inline]
fn inverse_cayley_unchecked(w: Complex64) -> Complex64 {
    I * (1.0 + w) / (1.0 - w)
}

/// Boundary angle `s in (0, 2 pi)` with `e^{is} = (t - i)/(t + i)`.
pub fn cayley_angle(t: f64) -> f64 {
    let w = Complex64::new(t, -1.0) / Complex64::new(t, 1.0);
    let a = w.arg();
    if a < 0.0 {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kp(z: Vec<Complex64>, t: Vec<f64>) -> KernelPoint {
        KernelPoint::new(OffRealPoint::new(z).unwrap(), t).unwrap()
    }

    /// The defining formula written out term by term, without factoring.
    fn kernel_expanded(z: &[Complex64], t: &[f64]) -> Complex64 {
        let n = z.len() as i32;
        let two_i_n = c(0.0, 2.0).powi(n);
        let mut p1 = c(1.0, 0.0);
        let mut p2 = c(1.0, 0.0);
        for (&zl, &tl) in z.iter().zip(t) {
            p1 *= 1.0 / (tl - zl) - 1.0 / c(tl, 1.0);
            p2 *= 1.0 / c(tl, -1.0) - 1.0 / c(tl, 1.0);
        }
        I * (2.0 / two_i_n * p1 - 1.0 / two_i_n * p2)
    }

    #[test]
    fn kernel_base_cases() {
        assert_eq!(kernel_unchecked(&[], &[]), I);
        assert_eq!(kernel_zero(), I);
        let k1 = eval_k(&kp(vec![I], vec![0.0])).unwrap();
        assert!((k1 - I).norm() < 1e-15);
    }

    #[test]
    fn kernel_two_variables_matches_expansion() {
        let z = [I, I];
        let t = [1.0, -1.0];
        let k = eval_k(&kp(z.to_vec(), t.to_vec())).unwrap();
        // frozen from an independent high-precision evaluation: 0.25 i
        assert!((k - c(0.0, 0.25)).norm() < 1e-15);
        assert!((k - kernel_expanded(&z, &t)).norm() < 1e-15);
    }

    #[test]
    fn kernel_one_variable_is_classical_integrand() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
            let t = rng.gen_range(-20.0..20.0);
            let classical = 1.0 / (t - z) - t / (1.0 + t * t);
            let k = kernel_unchecked(&[z], &[t]);
            assert!((k - classical).norm() < 1e-13 * (1.0 + classical.norm()));
        }
    }

    #[test]
    fn weighted_kernel_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..20 {
                let z: Vec<_> = (0..n)
                    .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect();
                let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
                let w: f64 = t.iter().map(|x| 1.0 + x * x).product();
                let a = kernel_unchecked(&z, &t) * w;
                let b = kernel_weighted_unchecked(&z, &t);
                assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()));
                let pa = poisson_unchecked(&z, &t) * w;
                let pb = poisson_weighted_unchecked(&z, &t);
                assert!((pa - pb).abs() < 1e-12 * (1.0 + pb.abs()));
            }
        }
    }

    #[test]
    fn kernel_matches_expansion_randomly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=5 {
            for _ in 0..50 {
                let z: Vec<_> = (0..n)
                    .map(|_| {
                        let y = rng.gen_range(0.2..3.0);
                        c(
                            rng.gen_range(-3.0..3.0),
                            if rng.gen_bool(0.5) { y } else { -y },
                        )
                    })
                    .collect();
                let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let a = kernel_unchecked(&z, &t);
                let b = kernel_expanded(&z, &t);
                assert!((a - b).norm() < 1e-11 * (1.0 + b.norm()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn poisson_examples() {
        assert!((eval_poisson(&kp(vec![I], vec![0.0])).unwrap() - 1.0).abs() < 1e-15);
        let p = eval_poisson(&kp(vec![I, c(0.0, 2.0)], vec![0.0, 0.0])).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(eval_poisson(&kp(vec![-I], vec![0.0])).is_err());
    }

    #[test]
    fn n_factor_examples() {
        assert!((eval_n(0, I, 0.0).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
        for t in [-3.0, 0.0, 0.5, 10.0] {
            assert!(eval_n(-1, I, t).unwrap().norm() < 1e-15);
            assert!(eval_n(1, I, t).unwrap().norm() < 1e-15);
        }
        assert!(eval_n(1, c(1.0, 0.0), 0.0).is_err());
        assert!(eval_n(2, I, 0.0).is_err());
        // naive difference of fractions
        let z = c(0.7, 1.3);
        let t = -0.4;
        let naive_m = 1.0 / (t - z) - 1.0 / c(t, -1.0);
        let naive_p = 1.0 / c(t, 1.0) - 1.0 / (t - z.conj());
        assert!((eval_n(-1, z, t).unwrap() - naive_m).norm() < 1e-14);
        assert!((eval_n(1, z, t).unwrap() - naive_p).norm() < 1e-14);
    }

    #[test]
    fn rho_product_examples() {
        let p = kp(vec![I, I, c(0.3, 2.0)], vec![0.1, -2.0, 4.0]);
        let rho = RhoVector::new(vec![-1, 1, 0]).unwrap();
        assert!(eval_rho_product(&rho, &p).unwrap().norm() < 1e-15);

        // N_{-1}(2i, 0) = -i/2 and N_{+1}(2i, 0) = -i/2, so the product is -1/4
        let p = kp(vec![c(0.0, 2.0), c(0.0, 2.0)], vec![0.0, 0.0]);
        let rho = RhoVector::new(vec![-1, 1]).unwrap();
        let v = eval_rho_product(&rho, &p).unwrap();
        assert!((v - c(-0.25, 0.0)).norm() < 1e-15);
        let direct = (1.0 / c(0.0, -2.0) - 1.0 / c(0.0, -1.0)) * (1.0 / I - 1.0 / c(0.0, 2.0));
        assert!((v - direct).norm() < 1e-15);
    }

    #[test]
    fn decomposition_identity_small_cases() {
        let p = kp(vec![c(0.4, 0.9)], vec![2.0]);
        assert!(im_k_decomposition_residual(&p).unwrap() < 1e-15);
        let p = kp(vec![I, c(0.0, 2.0)], vec![0.5, -1.0]);
        let r = im_k_decomposition_residual(&p).unwrap() / decomposition_scale(&p).unwrap();
        assert!(r <= 1e-12, "{r}");
    }

    #[test]
    fn decomposition_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            for _ in 0..100 {
                let z: Vec<_> = (0..n)
                    .map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..4.0)))
                    .collect();
                let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
                let p = kp(z, t);
                let r = im_k_decomposition_residual(&p).unwrap() / decomposition_scale(&p).unwrap();
                assert!(r <= 1e-12, "n={n} residual {r}");
            }
        }
    }

    #[test]
    fn kernel_is_holomorphic_in_each_variable() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 1e-5;
        for n in 1..=4 {
            for _ in 0..20 {
                let z: Vec<_> = (0..n)
                    .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(0.5..2.0)))
                    .collect();
                let t: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                for l in 0..n {
                    let shift = |d: Complex64| {
                        let mut w = z.clone();
                        w[l] += d;
                        kernel_unchecked(&w, &t)
                    };
                    let dx = (shift(c(h, 0.0)) - shift(c(-h, 0.0))) / (2.0 * h);
                    let dy = (shift(c(0.0, h)) - shift(c(0.0, -h))) / (2.0 * h);
                    // Cauchy-Riemann: d/dx + i d/dy = 0
                    assert!((dx + I * dy).norm() <= 1e-6, "{}", (dx + I * dy).norm());
                }
            }
        }
    }

    #[test]
    fn kernel_decay_bound_holds_for_large_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            for _ in 0..200 {
                let z: Vec<_> = (0..n)
                    .map(|_| {
                        let y = rng.gen_range(0.2..3.0);
                        c(
                            rng.gen_range(-3.0..3.0),
                            if rng.gen_bool(0.5) { y } else { -y },
                        )
                    })
                    .collect();
                let t: Vec<f64> = (0..n)
                    .map(|_| {
                        let e = rng.gen_range(-1.0..6.0);
                        let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        s * 10f64.powf(e)
                    })
                    .collect();
                let bound = kernel_bound_constant(&z)
                    * t.iter().map(|x| 1.0 / (1.0 + x * x)).product::<f64>();
                let k = kernel_unchecked(&z, &t).norm();
                assert!(k <= bound * (1.0 + 1e-12), "{k} > {bound}");
            }
        }
    }

    #[test]
    fn f_helper_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let t = rng.gen_range(-10.0..10.0);
            assert!((eval_f(I, t).unwrap() - 1.0).norm() < 1e-14);
            assert!(eval_f(-I, t).unwrap().norm() < 1e-14);
            let y = rng.gen_range(0.1..4.0);
            let z = c(
                rng.gen_range(-4.0..4.0),
                if rng.gen_bool(0.5) { y } else { -y },
            );
            let s = eval_f(z, t).unwrap().conj() + eval_f(z.conj(), t).unwrap();
            assert!((s - 1.0).norm() < 1e-13);
        }
        assert!(eval_f(c(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn cayley_pair() {
        assert!(cayley(I).unwrap().norm() < 1e-16);
        assert!((inverse_cayley(c(0.0, 0.0)).unwrap() - I).norm() < 1e-16);
        assert!(cayley(-I).is_err());
        assert!(inverse_cayley(c(1.0, 0.0)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let t = rng.gen_range(-50.0..50.0);
            let w = cayley(c(t, 0.0)).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-14);
            assert!((w - 1.0).norm() > 1e-6);
            let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
            let back = inverse_cayley(cayley(z).unwrap()).unwrap();
            assert!(
                (back - z).norm() < 1e-12 * (1.0 + z.norm_sqr()) / z.im,
                "{z} {back}"
            );
            let dz = DiskPoint::new(vec![cayley(z).unwrap()]).unwrap();
            assert!((dz.to_upper()[0] - z).norm() < 1e-12 * (1.0 + z.norm_sqr()) / z.im);
        }
    }

    #[test]
    fn cayley_angle_matches_arctangent_form() {
        for &t in &[-100.0, -1.0, 0.0, 0.3, 7.0, 1e4] {
            let s = cayley_angle(t);
            let expected = 2.0 * f64::atan(t) + std::f64::consts::PI;
            assert!((s - expected).abs() < 1e-12, "{t}: {s} vs {expected}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn upper() -> impl Strategy<Value = Complex64> {
            (-5.0..5.0f64, 0.05..5.0f64).prop_map(|(x, y)| c(x, y))
        }

        fn off_real() -> impl Strategy<Value = Complex64> {
            (upper(), any::<bool>()).prop_map(|(z, up)| if up { z } else { z.conj() })
        }

        proptest! {
            #[test]
            fn im_k_decomposes(
                z in prop::collection::vec(upper(), 1..=5),
                seed in prop::collection::vec(-20.0..20.0f64, 5),
            ) {
                let t = seed[..z.len()].to_vec();
                let p = kp(z, t);
                let r = im_k_decomposition_residual(&p).unwrap() / decomposition_scale(&p).unwrap();
                prop_assert!(r <= 1e-12, "{r}");
            }

            #[test]
            fn kernel_obeys_decay_bound(
                z in prop::collection::vec(off_real(), 1..=3),
                e in prop::collection::vec((-1.0..6.0f64, any::<bool>()), 3),
            ) {
                let t: Vec<f64> = e[..z.len()]
                    .iter()
                    .map(|&(p, neg)| if neg { -10f64.powf(p) } else { 10f64.powf(p) })
                    .collect();
                let bound = kernel_bound_constant(&z) * t.iter().map(|x| 1.0 / (1.0 + x * x)).product::<f64>();
                prop_assert!(kernel_unchecked(&z, &t).norm() <= bound * (1.0 + 1e-12));
            }

            #[test]
            fn cayley_round_trip(z in upper()) {
                let w = cayley(z).unwrap();
                prop_assert!(w.norm() < 1.0);
                let back = inverse_cayley(w).unwrap();
                prop_assert!((back - z).norm() < 1e-12 * (1.0 + z.norm_sqr()) / z.im);
            }

            #[test]
            fn boundary_maps_to_circle(t in -1e3..1e3f64) {
                let w = cayley(c(t, 0.0)).unwrap();
                prop_assert!((w.norm() - 1.0).abs() < 1e-14);
                prop_assert!((w - Complex64::from_polar(1.0, cayley_angle(t))).norm() < 1e-12);
            }
        }
    }
}
