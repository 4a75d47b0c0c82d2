//! Sandwiched resolvents G (H - sigma)^{-1} G^*, the Kato smoothing
//! integral and the Birman-Schwinger norm.
//!
//! Weights act exactly over the periodic box through [`WeightKernel`]; the
//! only truncation is the single Galerkin projection of w f onto the
//! coefficient space, whose energy defect is reported and gated.

use super::{max_of, GWeightSpec, VerificationReport, PROJECTION_GATE, TAIL_GATE};
use crate::constants::{resolvent_bound, stability_threshold, Bound, Case, StabilityCase};
use crate::error::{domain, Error, Result};
use crate::field::{
    random_band, Analyzer, LambdaGrid, PhysicalGrid, RadialProfile, SmoothFamily, SpectralCoefficients,
    WeightKernel,
};
use crate::laguerre_basis::basis_norm;
use crate::quadrature::pairwise_sum;
use crate::spectral_calculus::{apply, comparability_range, multiplier, OperatorSpec};
use crate::weights::{WeightBase, WeightSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

/// The operator H of the resolvent estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HClass {
    /// L^s.
    Pure(f64),
    /// The conformal power L_s.
    Conformal(f64),
}

impl HClass {
    pub fn s(&self) -> f64 {
        match *self {
            HClass::Pure(s) | HClass::Conformal(s) => s,
        }
    }

    pub fn op(&self) -> OperatorSpec {
        match *self {
            HClass::Pure(s) if s == 1.0 => OperatorSpec::SubLaplacian,
            HClass::Pure(s) => OperatorSpec::PureFractional(s),
            HClass::Conformal(s) => OperatorSpec::Conformal(s),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            HClass::Pure(s) if s == 1.0 => "L".into(),
            HClass::Pure(s) => format!("L^{s}"),
            HClass::Conformal(s) => format!("L_{s}"),
        }
    }

    /// Constants C1 <= H / L^s <= C2 over k <= kmax. For L_s these are the
    /// sampled range of the conformal ratio extended by its limit 1.
    pub fn comparability(&self, d: usize, kmax: usize) -> Result<(f64, f64)> {
        match *self {
            HClass::Pure(_) => Ok((1.0, 1.0)),
            HClass::Conformal(s) if s == 1.0 => Ok((1.0, 1.0)),
            HClass::Conformal(s) => Ok(comparability_range(s, d, kmax, &[1.0])?.with_limit()),
        }
    }
}

/// Bound for sup ||G (H - sigma)^{-1} G^*|| from the constants module.
pub fn sandwich_bound(h: &HClass, g: &GWeightSpec, d: usize, kmax: usize) -> Result<Bound> {
    let (c1, c2) = h.comparability(d, kmax)?;
    resolvent_bound(g.case, d, h.s(), g.mu, c1, c2)
}

/// Grid, kernels and field family of the sandwich computations.
#[derive(Clone)]
pub struct SandwichSetup {
    pub d: usize,
    pub analyzer: Arc<Analyzer>,
    pub family: SmoothFamily,
}

impl SandwichSetup {
    /// kmax = 24 on the uniform grid of the box |t| <= 18 up to |lambda| = 9.
    /// Fields vanish to order 10 in r at the origin, so that w f stays
    /// smooth there, and have envelopes centred in [3.2, 3.6] of width 0.42.
    pub fn new(d: usize) -> Result<Self> {
        Self::with_grid(d, 24, 18.0, 9.0)
    }

    pub fn with_grid(d: usize, kmax: usize, t_box: f64, lambda_max: f64) -> Result<Self> {
        let grid = Arc::new(LambdaGrid::uniform_for_box(t_box, lambda_max)?);
        let pg = PhysicalGrid::for_grid(d, &grid, kmax, 2)?;
        let analyzer = Arc::new(Analyzer::new(d, kmax, grid.clone(), pg)?);
        let mut family = SmoothFamily::new(d, kmax, grid, RadialProfile::Vanishing { order: 5, degree: 3 });
        family.centre = (3.2, 3.6);
        family.width = 0.42;
        Ok(Self { d, analyzer, family })
    }

    pub fn kmax(&self) -> usize {
        self.analyzer.bank().kmax()
    }

    /// Norm of the field on the slab t = +-T relative to its L2 norm.
    pub fn box_tail(&self, c: &SpectralCoefficients) -> Result<f64> {
        let s = self.analyzer.synthesize_grid(c)?;
        let pg = self.analyzer.pgrid();
        let edge: Vec<f64> = (0..s.n_r).map(|i| pg.radial.weights[i] * s.row(i)[0].norm_sqr()).collect();
        let norm = c.norm_sqr();
        Ok(if norm > 0.0 { (pairwise_sum(&edge) / norm).sqrt() } else { 0.0 })
    }
}

/// Kernels of w (projection) and w^2 (norms) for one weight, with the
/// multipliers of H and S^2 tabulated on the coefficient grid.
#[derive(Clone)]
pub struct Sandwich {
    pub g: GWeightSpec,
    pub h: HClass,
    multiply: WeightKernel,
    norm: WeightKernel,
    /// (H, S^2) per grid index j and level k, laid out like the coefficients.
    symbols: Vec<(f64, f64)>,
}

/// P(w f) for one field, with its projection residual.
#[derive(Debug, Clone)]
pub struct Projected {
    pub coeffs: SpectralCoefficients,
    pub f_norm: f64,
    pub residual: f64,
}

impl Sandwich {
    pub fn new(setup: &SandwichSetup, g: GWeightSpec, h: HClass) -> Result<Self> {
        let bank = setup.analyzer.bank().clone();
        let multiply = WeightKernel::new(bank.clone(), g.weight(), 1)?;
        let norm = WeightKernel::new(bank.clone(), g.weight(), 2)?;
        let (h_op, s2_op) = (h.op(), g.spectral_squared());
        let mut symbols = Vec::with_capacity(bank.grid().len() * (bank.kmax() + 1));
        for &lambda in bank.grid().points() {
            for k in 0..=bank.kmax() {
                let hv = multiplier(&h_op, k, lambda, bank.d())?.re;
                let sv = multiplier(&s2_op, k, lambda, bank.d())?.re;
                symbols.push((hv, sv));
            }
        }
        Ok(Self { g, h, multiply, norm, symbols })
    }

    /// Coefficients of P(w f) and |‖w f‖^2 - ‖P(w f)‖^2| / ‖w f‖^2.
    pub fn project(&self, c: &SpectralCoefficients) -> Result<Projected> {
        let bank = self.multiply.bank();
        let wf_sqr = self.norm.quad_form(&bank.profiles(c)?)?;
        let coeffs = self.multiply.project(c)?;
        let residual = if wf_sqr > 0.0 { (wf_sqr - coeffs.norm_sqr()).abs() / wf_sqr } else { 0.0 };
        Ok(Projected { coeffs, f_norm: c.norm_sqr().sqrt(), residual })
    }

    /// ‖w S^2 R(sigma) P(w f)‖ / ‖f‖ for a projected field.
    pub fn value(&self, p: &Projected, sigma: Complex64) -> Result<f64> {
        if p.f_norm == 0.0 {
            return Ok(0.0);
        }
        if sigma.im == 0.0 {
            return Err(Error::Pole(sigma.re));
        }
        let mut u = p.coeffs.clone();
        let levels = self.norm.bank().kmax() + 1;
        for j in 0..self.norm.bank().grid().len() {
            let sym = &self.symbols[j * levels..(j + 1) * levels];
            for (z, &(hv, sv)) in u.block_mut(j).iter_mut().zip(sym) {
                *z *= sv / (hv - sigma);
            }
        }
        let q = self.norm.quad_form(&self.norm.bank().profiles(&u)?)?;
        Ok(q.sqrt() / p.f_norm)
    }
}

/// ‖G R(sigma) G^* f‖ / ‖f‖ for one field, without gating.
pub fn sandwich_value(sandwich: &Sandwich, c: &SpectralCoefficients, sigma: Complex64) -> Result<f64> {
    sandwich.value(&sandwich.project(c)?, sigma)
}

/// Parameters of the uniform resolvent check.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventConfig {
    pub h: HClass,
    pub g: GWeightSpec,
    pub sigmas: Vec<Complex64>,
    pub count: usize,
    pub seed: u64,
    pub projection_gate: f64,
    pub tail_gate: f64,
}

impl ResolventConfig {
    pub fn new(h: HClass, g: GWeightSpec, sigmas: Vec<Complex64>, count: usize, seed: u64) -> Self {
        Self { h, g, sigmas, count, seed, projection_gate: PROJECTION_GATE, tail_gate: TAIL_GATE }
    }
}

/// max over sigma and fields of ‖G R(sigma) G^* f‖ / ‖f‖ against the
/// constants-module bound.
pub fn run_resolvent_sup(setup: &SandwichSetup, cfg: &ResolventConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = setup.d;
    if cfg.sigmas.iter().any(|s| s.im == 0.0) {
        let s = cfg.sigmas.iter().find(|s| s.im == 0.0).map(|s| s.re).unwrap_or(0.0);
        return Err(Error::Pole(s));
    }
    let bound = sandwich_bound(&cfg.h, &cfg.g, d, setup.kmax())?;
    let sandwich = Sandwich::new(setup, cfg.g, cfg.h)?;
    let fields: Vec<Result<(Projected, f64)>> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let c = setup.family.sample(cfg.seed, i)?;
            Ok((sandwich.project(&c)?, setup.box_tail(&c)?))
        })
        .collect();
    let mut projected = Vec::with_capacity(cfg.count);
    let mut residuals = Vec::with_capacity(cfg.count);
    let mut tails = Vec::with_capacity(cfg.count);
    for f in fields {
        let (p, t) = f?;
        residuals.push(p.residual);
        tails.push(t);
        projected.push(p);
    }
    let per_sigma: Vec<Result<f64>> = cfg
        .sigmas
        .par_iter()
        .map(|&sigma| {
            let vals = projected.iter().map(|p| sandwich.value(p, sigma)).collect::<Result<Vec<f64>>>()?;
            Ok(max_of(vals))
        })
        .collect();
    let per_sigma = per_sigma.into_iter().collect::<Result<Vec<f64>>>()?;
    let (arg, measured) = per_sigma
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let worst = cfg.sigmas.get(arg).copied().unwrap_or_default();
    Ok(VerificationReport::bound_check(
        format!("resolvent_sup_case{:?}_d{d}_{}", cfg.g.case, cfg.h.label()),
        measured,
        bound.value,
        0.0,
    )
    .param("d", d)
    .param("case", format!("{:?}", cfg.g.case))
    .param("H", cfg.h.label())
    .param("s", cfg.g.s)
    .param("mu", cfg.g.mu)
    .param("sigma_points", cfg.sigmas.len())
    .param("count", cfg.count)
    .param("seed", cfg.seed)
    .param("kmax", setup.kmax())
    .param("bound_source", bound.source)
    .gated("projection_residual", max_of(residuals), cfg.projection_gate)
    .gated("tail_t", max_of(tails), cfg.tail_gate)
    .residual("worst_sigma_re", worst.re)
    .residual("worst_sigma_im", worst.im)
    .timed(start))
}

/// Parameters of the smoothing check.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingConfig {
    pub d: usize,
    pub h: HClass,
    pub g: GWeightSpec,
    pub tau_max: f64,
    /// Nodes of the uniform rule on [-tau_max, tau_max]; the doubled
    /// interval uses the same spacing.
    pub n_tau: usize,
    /// Gaussian bump in lambda > 0 on the k = 0 branch.
    pub centre: f64,
    pub width: f64,
    pub t_box: f64,
    pub lambda_max: f64,
    pub kmax: usize,
    pub growth_gate: f64,
}

impl SmoothingConfig {
    pub fn new(d: usize, h: HClass, g: GWeightSpec) -> Self {
        Self {
            d,
            h,
            g,
            tau_max: 1.5,
            n_tau: 301,
            centre: 3.0,
            width: 0.4,
            t_box: 32.0,
            lambda_max: 6.5,
            kmax: 4,
            growth_gate: 0.05,
        }
    }
}

/// Partial integrals int_{-tau}^{tau} ‖G e^{-i s H} u0‖^2 ds / ‖u0‖^2 at
/// tau_max and 2 tau_max against the Kato level 4 sup ‖G R G^*‖.
///
/// The reference level follows from Plancherel in time: for sigma =
/// lambda + i eps the Laplace transform of e^{-i s H} u0 is -i R(sigma) u0,
/// and the TT^* argument with the resolvent identity bounds
/// int ‖G R(lambda + i eps) u0‖^2 d lambda by 4 pi a ‖u0‖^2, with a the
/// uniform sandwich bound; each half line in time then contributes 2 a.
pub fn run_smoothing(cfg: &SmoothingConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    if cfg.n_tau < 3 || cfg.n_tau % 2 == 0 || !(cfg.tau_max > 0.0) {
        return Err(domain("smoothing needs tau_max > 0 and an odd node count >= 3"));
    }
    let d = cfg.d;
    let setup = SandwichSetup::with_grid(d, cfg.kmax, cfg.t_box, cfg.lambda_max)?;
    let grid = setup.analyzer.bank().grid().clone();
    let mut u0 = SpectralCoefficients::zeros(d, cfg.kmax, grid.clone())?;
    for (j, &lambda) in grid.points().iter().enumerate() {
        if lambda > 0.0 {
            let x = (lambda - cfg.centre) / cfg.width;
            u0.set(0, j, (2.0 * PI * (-0.5 * x * x).exp() / basis_norm(0, d, lambda)?).into());
        }
    }
    let u0_sqr = u0.norm_sqr();
    let bound = sandwich_bound(&cfg.h, &cfg.g, d, cfg.kmax)?;
    let reference = 4.0 * bound.value;
    let kernel = WeightKernel::new(setup.analyzer.bank().clone(), cfg.g.weight(), 2)?;
    let gu0 = apply(&cfg.g.spectral(), &u0)?;
    let dtau = 2.0 * cfg.tau_max / (cfg.n_tau - 1) as f64;
    let half = (cfg.n_tau - 1) as i64;
    // Nodes m dtau for |m| <= 2 (n_tau - 1) / 2 * 2 cover [-2 tau_max, 2 tau_max].
    let nodes: Vec<i64> = (-half..=half).collect();
    let values: Vec<Result<f64>> = nodes
        .par_iter()
        .map(|&m| {
            let moved = apply(&OperatorSpec::propagator(cfg.h.op(), m as f64 * dtau), &gu0)?;
            kernel.quad_form(&setup.analyzer.bank().profiles(&moved)?)
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let trapezoid = |lim: i64| {
        let terms: Vec<f64> = nodes
            .iter()
            .zip(&values)
            .filter(|(m, _)| m.abs() <= lim)
            .map(|(m, v)| if m.abs() == lim { 0.5 * v } else { *v })
            .collect();
        dtau * pairwise_sum(&terms) / u0_sqr
    };
    let inner = trapezoid(half / 2);
    let outer = trapezoid(half);
    let growth = (outer - inner) / inner;
    let mut tail: f64 = 0.0;
    for m in [-half, half] {
        let moved = apply(&OperatorSpec::propagator(cfg.h.op(), m as f64 * dtau), &u0)?;
        tail = tail.max(setup.box_tail(&moved)?);
    }
    Ok(VerificationReport::bound_check(
        format!("smoothing_case{:?}_d{d}_{}", cfg.g.case, cfg.h.label()),
        outer,
        reference,
        0.0,
    )
    .param("d", d)
    .param("case", format!("{:?}", cfg.g.case))
    .param("H", cfg.h.label())
    .param("tau_max", cfg.tau_max)
    .param("n_tau", cfg.n_tau)
    .param("reference", "4 x resolvent bound")
    .param("bound_source", bound.source)
    .residual("partial_integral_tau_max", inner)
    .residual("partial_integral_2tau_max", outer)
    .gated("growth", growth.abs(), cfg.growth_gate)
    .gated("tail_t", tail, TAIL_GATE)
    .timed(start))
}

/// Parameters of the Birman-Schwinger check.
#[derive(Debug, Clone, PartialEq)]
pub struct BirmanSchwingerConfig {
    pub d: usize,
    pub case: StabilityCase,
    pub c_factor: f64,
    pub sigma: Complex64,
    pub power_iters: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub projection_gate: f64,
}

impl BirmanSchwingerConfig {
    pub fn new(d: usize, case: StabilityCase, c_factor: f64, sigma: Complex64) -> Self {
        Self { d, case, c_factor, sigma, power_iters: 400, tolerance: 1e-12, seed: 0, projection_gate: PROJECTION_GATE }
    }
}

struct PowerResult {
    norm: f64,
    iterations: usize,
    residual: f64,
}

/// Power iteration for the norm of M = P A R(sigma) A P with A = sqrt(C) w,
/// on M^* M = P A R(conj sigma) A P A R(sigma) A P.
fn power_norm(
    kernel: &WeightKernel,
    norm_kernel: &WeightKernel,
    coupling: f64,
    sigma: Complex64,
    start: &SpectralCoefficients,
    cfg: &BirmanSchwingerConfig,
) -> Result<PowerResult> {
    let bank = kernel.bank();
    let mut residual: f64 = 0.0;
    let mut weight = |x: &SpectralCoefficients| -> Result<SpectralCoefficients> {
        let phys = norm_kernel.quad_form(&bank.profiles(x)?)?;
        let y = kernel.project(x)?;
        if phys > 0.0 {
            residual = residual.max((phys - y.norm_sqr()).abs() / phys);
        }
        Ok(y.scaled(coupling.sqrt().into()))
    };
    let r = OperatorSpec::resolvent(OperatorSpec::SubLaplacian, sigma)?;
    let r_adj = OperatorSpec::resolvent(OperatorSpec::SubLaplacian, sigma.conj())?;
    let mut x = start.scaled((1.0 / start.norm_sqr().sqrt()).into());
    let mut prev = f64::NAN;
    for it in 1..=cfg.power_iters {
        let ax = weight(&x)?;
        let mx = weight(&apply(&r, &ax)?)?;
        let nu = mx.norm_sqr().sqrt();
        if nu == 0.0 {
            return Ok(PowerResult { norm: 0.0, iterations: it, residual });
        }
        let amx = weight(&mx)?;
        let y = weight(&apply(&r_adj, &amx)?)?;
        let ny = y.norm_sqr().sqrt();
        x = y.scaled((1.0 / ny).into());
        if (nu - prev).abs() <= cfg.tolerance * nu {
            return Ok(PowerResult { norm: nu, iterations: it, residual });
        }
        prev = nu;
    }
    Err(Error::Convergence(format!(
        "power iteration did not reach relative change {} in {} steps",
        cfg.tolerance, cfg.power_iters
    )))
}

/// Norm of A R(sigma) B^* for V = C w^2, C = c_factor * threshold, with
/// w = w1 (case I) or w2 (case II). The coupling is also halved and the
/// ratio of the two norms checked against 2.
pub fn run_birman_schwinger(setup: &SandwichSetup, cfg: &BirmanSchwingerConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = setup.d;
    if d != cfg.d {
        return Err(domain("setup built for a different d"));
    }
    if !(cfg.c_factor > 0.0 && cfg.c_factor <= 1.0) {
        return Err(domain(format!("C_factor must lie in (0, 1], got {}", cfg.c_factor)));
    }
    if cfg.sigma.im == 0.0 {
        return Err(Error::Pole(cfg.sigma.re));
    }
    let (case, base) = match cfg.case {
        StabilityCase::I => (Case::I, WeightBase::W1),
        StabilityCase::II => (Case::II, WeightBase::W2),
    };
    let threshold = stability_threshold(cfg.case, d)?;
    let coupling = cfg.c_factor * threshold;
    let bank = setup.analyzer.bank().clone();
    let kernel = WeightKernel::new(bank.clone(), WeightSpec::plain(base), 1)?;
    let norm_kernel = WeightKernel::new(bank, WeightSpec::plain(base), 2)?;
    let kmax = setup.kmax();
    let x0 = random_band(d, kmax, setup.analyzer.bank().grid().clone(), kmax - 8, 0.8, cfg.seed, 0)?;
    let full = power_norm(&kernel, &norm_kernel, coupling, cfg.sigma, &x0, cfg)?;
    let halved = power_norm(&kernel, &norm_kernel, 0.5 * coupling, cfg.sigma, &x0, cfg)?;
    let linearity = if full.norm > 0.0 { (full.norm / halved.norm - 2.0).abs() / 2.0 } else { 0.0 };
    Ok(VerificationReport::strict_bound_check(
        format!("birman_schwinger_case{case:?}_d{d}"),
        full.norm,
        1.0,
        0.0,
    )
    .param("d", d)
    .param("case", format!("{case:?}"))
    .param("c_factor", cfg.c_factor)
    .param("coupling", coupling)
    .param("sigma_re", cfg.sigma.re)
    .param("sigma_im", cfg.sigma.im)
    .param("kmax", kmax)
    .param("iterations", full.iterations)
    .gated("projection_residual", full.residual.max(halved.residual), cfg.projection_gate)
    .gated("coupling_linearity", linearity, 1e-8)
    .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup1() -> SandwichSetup {
        SandwichSetup::new(1).unwrap()
    }

    #[test]
    fn zero_field_gives_zero() {
        let s = setup1();
        let g = GWeightSpec::new(Case::IV, 1.0, 1.0, 1).unwrap();
        let sw = Sandwich::new(&s, g, HClass::Pure(1.0)).unwrap();
        let c = SpectralCoefficients::zeros(1, s.kmax(), s.analyzer.bank().grid().clone()).unwrap();
        assert_eq!(sandwich_value(&sw, &c, Complex64::new(0.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn projection_residual_is_small_and_value_below_bound() {
        let s = setup1();
        let g = GWeightSpec::new(Case::I, 1.0, 1.0, 1).unwrap();
        let cfg = ResolventConfig::new(
            HClass::Pure(1.0),
            g,
            vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.5), Complex64::new(-1.0, 0.1)],
            2,
            0,
        );
        let r = run_resolvent_sup(&s, &cfg).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn real_axis_is_rejected() {
        let s = setup1();
        let g = GWeightSpec::new(Case::I, 1.0, 1.0, 1).unwrap();
        let cfg = ResolventConfig::new(HClass::Pure(1.0), g, vec![Complex64::new(1.0, 0.0)], 1, 0);
        assert!(matches!(run_resolvent_sup(&s, &cfg), Err(Error::Pole(_))));
    }

    #[test]
    fn conjugate_sigma_gives_same_value_for_real_fields() {
        let s = setup1();
        let mut fam = s.family.clone();
        fam.real = true;
        let c = fam.sample(3, 0).unwrap();
        let g = GWeightSpec::new(Case::IV, 1.0, 1.0, 1).unwrap();
        let sw = Sandwich::new(&s, g, HClass::Pure(1.0)).unwrap();
        let z = Complex64::new(1.3, 0.7);
        let a = sandwich_value(&sw, &c, z).unwrap();
        let b = sandwich_value(&sw, &c, z.conj()).unwrap();
        assert!((a - b).abs() <= 1e-10 * a, "{a} {b}");
    }

    #[test]
    fn large_sigma_limit_is_the_weighted_projection() {
        let s = setup1();
        let c = s.family.sample(1, 0).unwrap();
        let g = GWeightSpec::new(Case::I, 1.0, 1.0, 1).unwrap();
        let sw = Sandwich::new(&s, g, HClass::Pure(1.0)).unwrap();
        let p = sw.project(&c).unwrap();
        let e = 1e7;
        let scaled = e * sw.value(&p, Complex64::new(0.0, e)).unwrap();
        let op = OperatorSpec::Product(vec![g.spectral_squared(), OperatorSpec::resolvent(HClass::Pure(1.0).op(), Complex64::new(0.3, 2.0)).unwrap()]);
        let direct = sw.norm.quad_form(&s.analyzer.bank().profiles(&apply(&op, &p.coeffs).unwrap()).unwrap()).unwrap().sqrt() / p.f_norm;
        let tabulated = sw.value(&p, Complex64::new(0.3, 2.0)).unwrap();
        assert!((direct - tabulated).abs() <= 1e-13 * direct, "{direct} {tabulated}");
        let limit = sw.norm.quad_form(&s.analyzer.bank().profiles(&p.coeffs).unwrap()).unwrap().sqrt() / p.f_norm;
        assert!((scaled - limit).abs() <= 1e-3 * limit, "{scaled} {limit}");
    }

    #[test]
    fn birman_schwinger_scales_with_coupling() {
        let s = setup1();
        let mut cfg = BirmanSchwingerConfig::new(1, StabilityCase::I, 0.5, Complex64::new(0.0, 1.0));
        cfg.power_iters = 2000;
        let r = run_birman_schwinger(&s, &cfg).unwrap();
        assert!(r.residuals["coupling_linearity"] < 1e-8, "{r:?}");
        assert!(r.measured < 1.0, "{r:?}");
    }

    #[test]
    fn smoothing_integral_stabilises() {
        let g = GWeightSpec::new(Case::IV, 1.0, 1.0, 1).unwrap();
        let cfg = SmoothingConfig::new(1, HClass::Pure(1.0), g);
        let r = run_smoothing(&cfg).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
