//! Seeded test-field families with exact coefficient data.

use super::coeffs::SpectralCoefficients;
use super::grid::LambdaGrid;
use crate::error::{domain, Result};
use crate::quadrature::gauss_laguerre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::ln_gamma;
use std::sync::Arc;

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Independent complex Gaussian amplitudes on k <= k_top and on the central
/// `fraction` of the grid; zero elsewhere.
pub fn random_band(
    d: usize,
    kmax: usize,
    grid: Arc<LambdaGrid>,
    k_top: usize,
    fraction: f64,
    seed: u64,
    index: usize,
) -> Result<SpectralCoefficients> {
    if k_top > kmax {
        return Err(domain("k_top exceeds kmax"));
    }
    let mut rng = rng_for(seed, index);
    let mut c = SpectralCoefficients::zeros(d, kmax, grid.clone())?;
    for j in grid.central(fraction) {
        for k in 0..=k_top {
            c.set(k, j, complex_normal(&mut rng));
        }
    }
    Ok(c)
}

/// Radial structure shared by every fibre of a smooth field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialProfile {
    /// Random amplitudes on k <= top, decaying like 0.7^k.
    Laguerre { top: usize },
    /// u^order Q(u) e^{-u/2} with u = 2|lambda| r^2 and Q a random
    /// polynomial of the given degree; supported on k <= order + degree.
    Vanishing { order: usize, degree: usize },
}

/// Fields c_kj = b_k g(lambda_j): a Gaussian envelope in |lambda| times a
/// quadratic, with independent amplitudes on the two signs.
///
/// The basis depends on |lambda|, so the field decays rapidly in t only if
/// the envelope is negligible at lambda = 0 (centre / width >= 6 keeps it
/// below 1e-8) and narrow enough in t for the box (width * t_box >= 7).
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothFamily {
    pub d: usize,
    pub kmax: usize,
    pub grid: Arc<LambdaGrid>,
    pub centre: (f64, f64),
    pub width: f64,
    pub profile: RadialProfile,
    /// Restrict all amplitudes to real values.
    pub real: bool,
    /// Use only lambda > 0.
    pub positive_only: bool,
}

impl SmoothFamily {
    pub fn new(d: usize, kmax: usize, grid: Arc<LambdaGrid>, profile: RadialProfile) -> Self {
        Self { d, kmax, grid, centre: (3.0, 5.0), width: 0.5, profile, real: false, positive_only: false }
    }

    pub fn sample(&self, seed: u64, index: usize) -> Result<SpectralCoefficients> {
        let mut rng = rng_for(seed, index);
        let draw = |rng: &mut ChaCha8Rng| {
            let z = complex_normal(rng);
            if self.real {
                Complex64::new(z.re * std::f64::consts::SQRT_2, 0.0)
            } else {
                z
            }
        };
        let b = match self.profile {
            RadialProfile::Laguerre { top } => {
                if top > self.kmax {
                    return Err(domain("profile top exceeds kmax"));
                }
                (0..=top).map(|k| draw(&mut rng) * 0.7f64.powi(k as i32)).collect::<Vec<_>>()
            }
            RadialProfile::Vanishing { order, degree } => {
                if order + degree > self.kmax {
                    return Err(domain("vanishing profile exceeds kmax"));
                }
                let q: Vec<Complex64> = (0..=degree).map(|_| draw(&mut rng)).collect();
                vanishing_coefficients(self.d, order, &q)?
            }
        };
        let (lo, hi) = self.centre;
        let centre = lo + (hi - lo) * rng.random::<f64>();
        let p1: f64 = 0.3 * rng.sample::<f64, _>(StandardNormal);
        let p2: f64 = 0.1 * rng.sample::<f64, _>(StandardNormal);
        let amp_pos = draw(&mut rng);
        let amp_neg = if self.positive_only { Complex64::new(0.0, 0.0) } else { draw(&mut rng) };
        let w = self.width;
        SpectralCoefficients::from_fn(self.d, self.kmax, self.grid.clone(), |k, j| {
            if k >= b.len() {
                return Complex64::new(0.0, 0.0);
            }
            let lambda = self.grid.points()[j];
            let x = (lambda.abs() - centre) / w;
            let env = (-0.5 * x * x).exp() * (1.0 + p1 * x + p2 * x * x);
            let amp = if lambda > 0.0 { amp_pos } else { amp_neg };
            b[k] * amp * env
        })
    }
}

/// Coefficients of u^order Q(u) e^{-u/2} in the orthonormal Laguerre
/// functions of type d-1 on (0, inf) with measure u^{d-1} du.
pub fn vanishing_coefficients(d: usize, order: usize, q: &[Complex64]) -> Result<Vec<Complex64>> {
    let alpha = d as f64 - 1.0;
    let top = order + q.len().saturating_sub(1);
    let rule = gauss_laguerre(top + 4, alpha)?;
    let mut out = vec![Complex64::new(0.0, 0.0); top + 1];
    for (u, w) in rule.nodes.iter().zip(&rule.weights) {
        let qv: Complex64 = q.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c);
        let h = u.powi(order as i32) * qv * *w;
        // Orthonormal recurrence for sqrt(k!/Gamma(k+a+1)) L_k^a(u).
        let mut prev = 0.0;
        let mut cur = (-ln_gamma(alpha + 1.0)).exp().sqrt();
        out[0] += h * cur;
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let kf = k as f64;
            let s1 = (kf / (kf + alpha)).sqrt();
            let s2 = if k >= 2 { ((kf * (kf - 1.0)) / ((kf + alpha) * (kf - 1.0 + alpha))).sqrt() } else { 0.0 };
            let next = ((2.0 * kf - 1.0 + alpha - u) * s1 * cur - (kf - 1.0 + alpha) * s2 * prev) / kf;
            prev = cur;
            cur = next;
            *slot += h * cur;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laguerre_basis::basis_eval;
    use approx::assert_relative_eq;

    #[test]
    fn vanishing_expansion_reconstructs_profile() {
        for d in 1..=3 {
            let q = [Complex64::new(1.0, 0.5), Complex64::new(-0.3, 0.0), Complex64::new(0.05, 0.1)];
            let b = vanishing_coefficients(d, 5, &q).unwrap();
            assert_eq!(b.len(), 8);
            // phi_k^lambda with lambda = 1/2 has argument u = r^2; its
            // normalisation differs from the u-measure one by a constant.
            let lam = 0.5;
            let ratio = basis_eval(0, d, lam, 0.0).unwrap() * (ln_gamma(d as f64)).exp().sqrt();
            for r in [0.3, 1.0, 2.2, 3.5] {
                let u: f64 = r * r;
                let direct = u.powi(5) * (q[0] + q[1] * u + q[2] * u * u) * (-0.5 * u).exp();
                let s: Complex64 = b.iter().enumerate().map(|(k, c)| c * basis_eval(k, d, lam, r).unwrap()).sum();
                assert_relative_eq!((s / ratio).re, direct.re, epsilon = 1e-9, max_relative = 1e-12);
                assert_relative_eq!((s / ratio).im, direct.im, epsilon = 1e-9, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn families_are_reproducible_and_distinct() {
        let g = Arc::new(LambdaGrid::uniform_for_box(10.0, 8.0).unwrap());
        let fam = SmoothFamily::new(1, 12, g.clone(), RadialProfile::Vanishing { order: 5, degree: 3 });
        assert_eq!(fam.sample(7, 3).unwrap(), fam.sample(7, 3).unwrap());
        assert_ne!(fam.sample(7, 3).unwrap(), fam.sample(7, 4).unwrap());
        let a = random_band(2, 10, g.clone(), 2, 0.8, 1, 0).unwrap();
        assert_eq!(a, random_band(2, 10, g, 2, 0.8, 1, 0).unwrap());
        assert!(a.get(3, g_mid(&a)) == Complex64::new(0.0, 0.0));
    }

    fn g_mid(c: &SpectralCoefficients) -> usize {
        c.grid().count_per_sign()
    }
}
