//! Quadrature rules: Gauss-Legendre, generalised Gauss-Laguerre and an
//! adaptive Gauss-Kronrod (10/21) integrator.

use crate::error::{domain, Error, Result};
use std::f64::consts::PI;

/// Nodes and weights of a one-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        pairwise_sum(
            &self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x))
                .collect::<Vec<_>>(),
        )
    }
}

/// Pairwise summation, so that reductions do not depend on how work was split.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// n-point Gauss-Legendre rule on [-1, 1], nodes increasing.
pub fn gauss_legendre(n: usize) -> Result<QuadRule> {
    if n == 0 {
        return Err(domain("Gauss-Legendre rule needs n >= 1"));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!(
                "Gauss-Legendre node {i} of {n}"
            )));
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadRule { nodes, weights })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Result<QuadRule> {
    let base = gauss_legendre(n)?;
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    Ok(QuadRule {
        nodes: base.nodes.iter().map(|x| c + h * x).collect(),
        weights: base.weights.iter().map(|w| h * w).collect(),
    })
}

/// n-point generalised Gauss-Laguerre rule for the weight e^{-u} u^alpha on
/// (0, inf).
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<QuadRule> {
    Ok(gauss_laguerre_log(n, alpha)?.to_rule())
}

/// Golub-Welsch nodes polished by Newton steps, weights from the
/// Christoffel formula.
pub fn gauss_laguerre_log(n: usize, alpha: f64) -> Result<LaguerreRule> {
    if n == 0 {
        return Err(domain("Gauss-Laguerre rule needs n >= 1"));
    }
    if alpha <= -1.0 || !alpha.is_finite() {
        return Err(domain(format!("Gauss-Laguerre alpha = {alpha} must exceed -1")));
    }
    let jacobi = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0 + alpha
        } else if i.abs_diff(j) == 1 {
            let m = i.max(j) as f64;
            (m * (m + alpha)).sqrt()
        } else {
            0.0
        }
    });
    let eig = nalgebra::SymmetricEigen::try_new(jacobi, 1e-15, 10_000)
        .ok_or_else(|| Error::Convergence(format!("Jacobi eigenproblem, n = {n}")))?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (l, lm1) = laguerre_pair(n, alpha, *x);
            let dl = (n as f64 * l - (n as f64 + alpha) * lm1) / *x;
            if !dl.is_finite() || dl == 0.0 {
                break;
            }
            let step = l / dl;
            if !step.is_finite() || step.abs() > 1e-6 * x.abs().max(1e-3) {
                break;
            }
            *x -= step;
        }
    }
    let ln_weights = laguerre_ln_weights(n, alpha, &nodes);
    if nodes.iter().any(|&x| !(x > 0.0)) || ln_weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Convergence(format!(
            "Gauss-Laguerre rule n = {n}, alpha = {alpha} produced a degenerate node"
        )));
    }
    Ok(LaguerreRule { nodes, ln_weights })
}

/// Gauss-Laguerre nodes with weights kept in log form, so that `w_i e^{u_i}`
/// stays accurate for the far nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreRule {
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

impl LaguerreRule {
    pub fn to_rule(&self) -> QuadRule {
        QuadRule {
            nodes: self.nodes.clone(),
            weights: self.ln_weights.iter().map(|w| w.exp()).collect(),
        }
    }
}

/// w_i = Gamma(n+a+1) x_i / (n! (n+a)^2 L_{n-1}^a(x_i)^2), evaluated in logs.
fn laguerre_ln_weights(n: usize, alpha: f64, nodes: &[f64]) -> Vec<f64> {
    use statrs::function::gamma::ln_gamma;
    let nf = n as f64;
    let c = ln_gamma(nf + alpha + 1.0) - ln_gamma(nf + 1.0) - 2.0 * (nf + alpha).ln();
    nodes
        .iter()
        .map(|&x| c + x.ln() - 2.0 * ln_abs_laguerre(n - 1, alpha, x))
        .collect()
}

/// ln |L_k^alpha(x)| with rescaling inside the recurrence.
fn ln_abs_laguerre(k: usize, alpha: f64, x: f64) -> f64 {
    let (mut l0, mut l1) = (1.0f64, 1.0 + alpha - x);
    if k == 0 {
        return 0.0;
    }
    let mut ln_scale = 0.0;
    for j in 1..k {
        let jf = j as f64;
        let l2 = ((2.0 * jf + 1.0 + alpha - x) * l1 - (jf + alpha) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = l2;
        if l1.abs() > 1e100 {
            l0 *= 1e-100;
            l1 *= 1e-100;
            ln_scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    l1.abs().ln() + ln_scale
}

fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let (mut l0, mut l1) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + alpha - x) * l1 - (kf + alpha) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    (l1, l0)
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_690_532_875,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One Gauss-Kronrod 10/21 panel: (Kronrod estimate, |Kronrod - Gauss|).
pub fn gk21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive Gauss-Kronrod integration of `f` over [a, b]: the panel
/// with the largest error estimate is bisected until the summed error is
/// below max(abs_tol, rel_tol * |value|).
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    const MAX_PANELS: usize = 4000;
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut panels = vec![{
        let (v, e) = gk21(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let error: f64 = panels.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::Convergence("integrand produced a non-finite value".into()));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Convergence(format!(
                "adaptive quadrature on [{a}, {b}] stalled at error {error:.3e}"
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if !(mid > pa.min(pb) && mid < pa.max(pb)) {
            return Err(Error::Convergence(format!(
                "adaptive quadrature cannot bisect [{pa}, {pb}] further"
            )));
        }
        let (v1, e1) = gk21(&f, pa, mid);
        let (v2, e2) = gk21(&f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_is_exact_to_degree_2n_minus_1() {
        let rule = gauss_legendre(8).unwrap();
        for p in 0..16 {
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            let got = rule.integrate(|x| x.powi(p));
            assert!((got - exact).abs() < 1e-14, "degree {p}: {got} vs {exact}");
        }
    }

    #[test]
    fn laguerre_one_point_rule_sits_at_the_mean() {
        let rule = gauss_laguerre(1, 0.0).unwrap();
        assert_relative_eq!(rule.nodes[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn laguerre_moments() {
        let rule = gauss_laguerre(16, 0.0).unwrap();
        assert!((rule.integrate(|u| u.powi(3)) - 6.0).abs() < 1e-12);
        let rule = gauss_laguerre(16, 1.0).unwrap();
        assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for alpha in [0.0, 0.5, 2.0, 5.0] {
            let rule = gauss_laguerre(40, alpha).unwrap();
            for p in 0..20 {
                let exact = statrs::function::gamma::ln_gamma(alpha + 1.0 + p as f64).exp();
                let got = rule.integrate(|u| u.powi(p));
                assert_relative_eq!(got, exact, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn laguerre_nodes_increasing_and_positive() {
        let rule = gauss_laguerre(128, 2.0).unwrap();
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes[0] > 0.0 && rule.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn kronrod_panel_exact_for_degree_31() {
        for p in 0..=31 {
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            let (v, _) = gk21(&|x: f64| x.powi(p), -1.0, 1.0);
            assert!((v - exact).abs() < 1e-14, "degree {p}");
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let est = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-13).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert_relative_eq!(est.value, exact, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_laguerre(0, 0.0).is_err());
        assert!(gauss_laguerre(4, -1.0).is_err());
        assert!(gauss_legendre(0).is_err());
    }
}
