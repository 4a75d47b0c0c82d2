//! Sampling on the physical grid, analysis back to coefficients, and
//! physical-space norms.

use super::closure::ClosureField;
use super::coeffs::{BasisBank, Profiles, SpectralCoefficients};
use super::grid::{LambdaGrid, PhysicalGrid};
use super::tquad::half_box_rule;
use crate::error::{domain, Error, Result};
use crate::laguerre_basis::sphere_area;
use crate::quadrature::pairwise_sum;
use crate::weights::{WeightBase, WeightSpec};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Samples f(r_i, t_m), row-major in the radial index.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub n_r: usize,
    pub n_t: usize,
    pub data: Vec<Complex64>,
}

impl Samples {
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n_t..(i + 1) * self.n_t]
    }
}

/// Exact DFT between the uniform lambda grid and the periodic t-grid.
///
/// With lambda_j = (j - n + 1/2) h, h = pi / T and t_m = -T + 2 T m / N_t,
/// e^{-i lambda_j t_m} factors into a phase in j, a DFT kernel in
/// (j - n, m) and a phase in m.
#[derive(Clone)]
pub struct TimeTransform {
    n_grid: usize,
    n_t: usize,
    spacing: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    phase_j: Vec<Complex64>,
    phase_m: Vec<Complex64>,
}

impl TimeTransform {
    pub fn new(grid: &LambdaGrid, n_t: usize) -> Result<Self> {
        let spacing = grid
            .spacing()
            .ok_or_else(|| domain("the t-transform needs a uniform lambda grid"))?;
        let n_grid = grid.len();
        if n_t < n_grid {
            return Err(domain(format!("need at least {n_grid} t nodes, got {n_t}")));
        }
        let n = grid.count_per_sign() as f64;
        let mut planner = FftPlanner::new();
        Ok(Self {
            n_grid,
            n_t,
            spacing,
            forward: planner.plan_fft_forward(n_t),
            inverse: planner.plan_fft_inverse(n_t),
            phase_j: (0..n_grid)
                .map(|j| Complex64::from_polar(1.0, PI * (j as f64 - n + 0.5)))
                .collect(),
            phase_m: (0..n_t)
                .map(|m| Complex64::from_polar(1.0, -PI * m as f64 / n_t as f64))
                .collect(),
        })
    }

    fn slot(&self, j: usize) -> usize {
        let shift = j as i64 - (self.n_grid / 2) as i64;
        shift.rem_euclid(self.n_t as i64) as usize
    }

    /// f(t_m) = (h / 2 pi) sum_j e^{-i lambda_j t_m} F_j.
    pub fn to_time(&self, f_lambda: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for j in 0..self.n_grid {
            out[self.slot(j)] = f_lambda[j] * self.phase_j[j];
        }
        self.forward.process(out);
        let scale = self.spacing / (2.0 * PI);
        for (z, p) in out.iter_mut().zip(&self.phase_m) {
            *z *= p * scale;
        }
    }

    /// F_j = dt sum_m e^{i lambda_j t_m} f(t_m).
    pub fn to_lambda(&self, f_time: &[Complex64], out: &mut [Complex64]) {
        let mut buf: Vec<Complex64> = f_time.iter().zip(&self.phase_m).map(|(z, p)| z * p.conj()).collect();
        self.inverse.process(&mut buf);
        let dt = 2.0 * PI / (self.spacing * self.n_t as f64);
        for j in 0..self.n_grid {
            out[j] = buf[self.slot(j)] * self.phase_j[j].conj() * dt;
        }
    }
}

/// Coefficients recovered from physical data with the attached
/// truncation residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub coeffs: SpectralCoefficients,
    /// |physical norm^2 - coefficient norm^2| / physical norm^2.
    pub residual: f64,
    pub physical_norm: f64,
}

/// Synthesis and analysis on a physical grid dual to a uniform lambda grid.
#[derive(Clone)]
pub struct Analyzer {
    bank: Arc<BasisBank>,
    pgrid: PhysicalGrid,
    time: TimeTransform,
}

impl Analyzer {
    pub fn new(d: usize, kmax: usize, grid: Arc<LambdaGrid>, pgrid: PhysicalGrid) -> Result<Self> {
        let t_box = grid.t_box().ok_or_else(|| domain("analysis needs a uniform lambda grid"))?;
        if (t_box - pgrid.t_box).abs() > 1e-12 * t_box {
            return Err(domain("physical t-box must be the dual box of the lambda grid"));
        }
        let time = TimeTransform::new(&grid, pgrid.t_nodes.len())?;
        let bank = Arc::new(BasisBank::new(d, kmax, grid, pgrid.radial.clone())?);
        Ok(Self { bank, pgrid, time })
    }

    pub fn bank(&self) -> &Arc<BasisBank> {
        &self.bank
    }

    pub fn pgrid(&self) -> &PhysicalGrid {
        &self.pgrid
    }

    pub fn time(&self) -> &TimeTransform {
        &self.time
    }

    /// Samples of the synthesized function on the physical grid.
    pub fn synthesize_grid(&self, c: &SpectralCoefficients) -> Result<Samples> {
        let p = self.bank.profiles(c)?;
        Ok(self.profiles_to_samples(&p))
    }

    pub fn profiles_to_samples(&self, p: &Profiles) -> Samples {
        let n_t = self.pgrid.t_nodes.len();
        let mut data = vec![Complex64::new(0.0, 0.0); p.n_r * n_t];
        for i in 0..p.n_r {
            self.time.to_time(p.row(i), &mut data[i * n_t..(i + 1) * n_t]);
        }
        Samples { n_r: p.n_r, n_t, data }
    }

    pub fn sample(&self, field: &ClosureField) -> Samples {
        let (rs, ts) = (&self.pgrid.radial.nodes, &self.pgrid.t_nodes);
        let data = rs.iter().flat_map(|&r| ts.iter().map(move |&t| field.eval(r, t))).collect();
        Samples { n_r: rs.len(), n_t: ts.len(), data }
    }

    /// Squared norm of samples under the grid rule.
    pub fn samples_norm_sqr(&self, s: &Samples) -> f64 {
        let rows: Vec<f64> = (0..s.n_r)
            .map(|i| {
                let e: Vec<f64> = s.row(i).iter().map(|z| z.norm_sqr()).collect();
                self.pgrid.radial.weights[i] * self.pgrid.dt() * pairwise_sum(&e)
            })
            .collect();
        pairwise_sum(&rows)
    }

    pub fn analyze_samples(&self, s: &Samples, gate: f64) -> Result<Analysis> {
        let n_grid = self.bank.grid().len();
        let mut prof = Profiles::zeros(s.n_r, n_grid);
        for i in 0..s.n_r {
            self.time.to_lambda(s.row(i), prof.row_mut(i));
        }
        let coeffs = self.bank.project(&prof)?;
        let phys = self.samples_norm_sqr(s);
        let coef = coeffs.norm_sqr();
        let residual = if phys > 0.0 { (phys - coef).abs() / phys } else { 0.0 };
        if residual > gate {
            return Err(Error::Resolution { what: "projection residual".into(), value: residual, gate });
        }
        Ok(Analysis { coeffs, residual, physical_norm: phys.sqrt() })
    }

    pub fn analyze(&self, field: &ClosureField, gate: f64) -> Result<Analysis> {
        self.analyze_samples(&self.sample(field), gate)
    }
}

/// One-shot analysis of a closure field.
pub fn analyze(
    field: &ClosureField,
    d: usize,
    kmax: usize,
    grid: Arc<LambdaGrid>,
    pgrid: &PhysicalGrid,
    gate: f64,
) -> Result<Analysis> {
    Analyzer::new(d, kmax, grid, pgrid.clone())?.analyze(field, gate)
}

/// Norm with relative tail estimates at the edges of the physical box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub value: f64,
    /// Norm of a unit-width slab at |t| = t_box, relative to `value`.
    pub tail_t: f64,
    /// Norm of a unit-width shell at r = r_box, relative to `value`.
    pub tail_r: f64,
}

impl NormReport {
    pub fn tail(&self) -> f64 {
        self.tail_t.max(self.tail_r)
    }

    fn gated(self, gate: f64) -> Result<Self> {
        if self.tail() > gate {
            return Err(Error::Resolution { what: "quadrature tail".into(), value: self.tail(), gate });
        }
        Ok(self)
    }
}

fn tails(field: &ClosureField, weight: &WeightSpec, pgrid: &PhysicalGrid, norm: f64) -> (f64, f64) {
    let rad = &pgrid.radial;
    let edge_t: f64 = rad
        .nodes
        .iter()
        .zip(&rad.weights)
        .map(|(&r, w)| {
            let t = pgrid.t_box;
            w * 0.5
                * ((weight.value(r, t) * field.eval(r, t).norm()).powi(2)
                    + (weight.value(r, -t) * field.eval(r, -t).norm()).powi(2))
        })
        .sum();
    let r = rad.r_box();
    let shell = sphere_area(rad.d) * r.powi(2 * rad.d as i32 - 1);
    let edge_r: f64 = pgrid
        .t_nodes
        .iter()
        .zip(&pgrid.t_weights)
        .map(|(&t, w)| w * shell * (weight.value(r, t) * field.eval(r, t).norm()).powi(2))
        .sum();
    if norm > 0.0 {
        (edge_t.sqrt() / norm, edge_r.sqrt() / norm)
    } else {
        (0.0, 0.0)
    }
}

/// L2 norm over the physical box with the uniform t rule.
pub fn physical_l2_norm(field: &ClosureField, pgrid: &PhysicalGrid, gate: f64) -> Result<NormReport> {
    let one = WeightSpec::plain(WeightBase::One);
    let rad = &pgrid.radial;
    let rows: Vec<f64> = rad
        .nodes
        .iter()
        .zip(&rad.weights)
        .map(|(&r, w)| {
            let e: Vec<f64> = pgrid.t_nodes.iter().map(|&t| field.eval(r, t).norm_sqr()).collect();
            w * pgrid.dt() * pairwise_sum(&e)
        })
        .collect();
    let value = pairwise_sum(&rows).sqrt();
    let (tail_t, tail_r) = tails(field, &one, pgrid, value);
    NormReport { value, tail_t, tail_r }.gated(gate)
}

/// ||w f|| over the physical box. Weights that depend on t are integrated
/// with a t rule refined on the r^2 scale at every radial node.
pub fn weighted_l2_norm(
    field: &ClosureField,
    weight: &WeightSpec,
    pgrid: &PhysicalGrid,
    gate: f64,
) -> Result<NormReport> {
    if weight.base == WeightBase::One && weight.exponent == 1.0 {
        return physical_l2_norm(field, pgrid, gate);
    }
    let rad = &pgrid.radial;
    let uniform = (pgrid.t_box / 0.5).ceil() as usize;
    let rows: Vec<f64> = rad
        .nodes
        .iter()
        .zip(&rad.weights)
        .map(|(&r, w)| {
            let e: Vec<f64> = if weight.is_t_independent() {
                let q = weight.value(r, 0.0).powi(2);
                pgrid.t_nodes.iter().map(|&t| pgrid.dt() * q * field.eval(r, t).norm_sqr()).collect()
            } else {
                let (ts, tw) = half_box_rule(r * r, pgrid.t_box, uniform, 12);
                ts.iter()
                    .zip(&tw)
                    .map(|(&t, &h)| {
                        let q = weight.value(r, t).powi(2);
                        h * q * (field.eval(r, t).norm_sqr() + field.eval(r, -t).norm_sqr())
                    })
                    .collect()
            };
            w * pairwise_sum(&e)
        })
        .collect();
    let value = pairwise_sum(&rows).sqrt();
    let (tail_t, tail_r) = tails(field, weight, pgrid, value);
    NormReport { value, tail_t, tail_r }.gated(gate)
}
