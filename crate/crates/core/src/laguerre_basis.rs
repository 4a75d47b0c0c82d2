//! Scaled Laguerre functions of type d-1 on the radial half line.
//!
//! The lambda-fibre basis is
//! `phi_k(r) = n_{k,d,lambda} L_k^{d-1}(2|lambda| r^2) exp(-|lambda| r^2)`,
//! orthonormal for the radial measure `Omega_{2d-1} r^{2d-1} dr` with
//! `Omega_{2d-1} = 2 pi^d / Gamma(d)`.

use crate::error::{domain, Result};
pub use crate::quadrature::{gauss_laguerre, QuadRule};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// Index data of one basis function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    pub k: usize,
    pub d: usize,
    pub lambda: f64,
}

impl BasisParams {
    pub fn new(k: usize, d: usize, lambda: f64) -> Result<Self> {
        check_d_lambda(d, lambda)?;
        Ok(Self { k, d, lambda })
    }

    /// Laguerre type alpha = d - 1.
    pub fn alpha(&self) -> f64 {
        self.d as f64 - 1.0
    }

    pub fn norm(&self) -> f64 {
        norm_unchecked(self.k, self.d, self.lambda)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let mut out = vec![0.0; self.k + 1];
        basis_eval_all(self.d, self.lambda, r, &mut out);
        out[self.k]
    }
}

fn check_d_lambda(d: usize, lambda: f64) -> Result<()> {
    if d == 0 {
        return Err(domain("dimension d must be at least 1"));
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain(format!("lambda = {lambda} must be finite and nonzero")));
    }
    Ok(())
}

/// Surface measure Omega_{2d-1} of the unit sphere in R^{2d}.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powi(d as i32) / ln_gamma(d as f64).exp()
}

/// L_k^alpha(x) by the three-term recurrence.
pub fn laguerre_poly(k: usize, alpha: f64, x: f64) -> Result<f64> {
    if alpha <= -1.0 || !alpha.is_finite() {
        return Err(domain(format!("Laguerre type alpha = {alpha} must exceed -1")));
    }
    let (mut l0, mut l1) = (1.0, 1.0 + alpha - x);
    if k == 0 {
        return Ok(1.0);
    }
    for j in 1..k {
        let jf = j as f64;
        let l2 = ((2.0 * jf + 1.0 + alpha - x) * l1 - (jf + alpha) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    Ok(l1)
}

/// The normalisation n_{k,d,lambda}.
///
/// With u = 2|lambda| r^2 the squared norm of the unnormalised function is
/// `Omega / (2 (2|lambda|)^d) * Gamma(k+d) / k!`.
pub fn basis_norm(k: usize, d: usize, lambda: f64) -> Result<f64> {
    check_d_lambda(d, lambda)?;
    Ok(norm_unchecked(k, d, lambda))
}

pub(crate) fn norm_unchecked(k: usize, d: usize, lambda: f64) -> f64 {
    let df = d as f64;
    let ln_n2 = df * (2.0 * lambda.abs()).ln() + ln_gamma(df) + ln_gamma(k as f64 + 1.0)
        - df * PI.ln()
        - ln_gamma(k as f64 + df);
    (0.5 * ln_n2).exp()
}

/// phi_k^lambda(r).
pub fn basis_eval(k: usize, d: usize, lambda: f64, r: f64) -> Result<f64> {
    check_d_lambda(d, lambda)?;
    if !(r >= 0.0) {
        return Err(domain(format!("radius r = {r} must be nonnegative")));
    }
    Ok(BasisParams { k, d, lambda }.eval(r))
}

/// Fills `out[k] = phi_k^lambda(r)` for k = 0..out.len().
///
/// Runs the recurrence on the orthonormal functions directly, with the
/// Gaussian folded into the starting values, so nothing overflows for large r.
pub fn basis_eval_all(d: usize, lambda: f64, r: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let alpha = d as f64 - 1.0;
    let u = 2.0 * lambda.abs() * r * r;
    let mut prev = 0.0;
    let mut cur = norm_unchecked(0, d, lambda) * (-0.5 * u).exp();
    out[0] = cur;
    for k in 1..out.len() {
        // L_k = ((2k-1+a-u) L_{k-1} - (k-1+a) L_{k-2}) / k, rescaled by n_k.
        let kf = k as f64;
        let s1 = (kf / (kf + alpha)).sqrt();
        let s2 = if k >= 2 {
            ((kf * (kf - 1.0)) / ((kf + alpha) * (kf - 1.0 + alpha))).sqrt()
        } else {
            0.0
        };
        let next =
            ((2.0 * kf - 1.0 + alpha - u) * s1 * cur - (kf - 1.0 + alpha) * s2 * prev) / kf;
        prev = cur;
        cur = next;
        out[k] = cur;
    }
}

/// Radial quadrature for one lambda fibre: the generalised Gauss-Laguerre rule
/// of type d-1 mapped to r, weights absorbing the radial measure and the
/// Gaussian so that `sum w_i F(r_i)` approximates `int F dmu`.
pub fn fibre_rule(n: usize, d: usize, lambda: f64) -> Result<QuadRule> {
    check_d_lambda(d, lambda)?;
    let base = crate::quadrature::gauss_laguerre_log(n, d as f64 - 1.0)?;
    let two_l = 2.0 * lambda.abs();
    let scale = sphere_area(d) / (2.0 * two_l.powi(d as i32));
    Ok(QuadRule {
        nodes: base.nodes.iter().map(|u| (u / two_l).sqrt()).collect(),
        weights: base
            .nodes
            .iter()
            .zip(&base.ln_weights)
            .map(|(u, lw)| scale * (lw + u).exp())
            .collect(),
    })
}
