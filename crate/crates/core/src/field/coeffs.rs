//! Coefficient storage, Plancherel norm and pointwise synthesis.

use super::grid::{live_cut, LambdaGrid, RadialRule};
use crate::error::{domain, Result};
use crate::laguerre_basis::basis_eval_all;
use crate::quadrature::pairwise_sum;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Complex amplitudes `c[k][j]` of the basis function phi_k^{lambda_j}.
///
/// Stored lambda-major: the block for grid index j holds k = 0..=kmax.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    d: usize,
    kmax: usize,
    grid: Arc<LambdaGrid>,
    c: Vec<Complex64>,
}

impl SpectralCoefficients {
    pub fn zeros(d: usize, kmax: usize, grid: Arc<LambdaGrid>) -> Result<Self> {
        if d == 0 {
            return Err(domain("d must be at least 1"));
        }
        let c = vec![Complex64::new(0.0, 0.0); (kmax + 1) * grid.len()];
        Ok(Self { d, kmax, grid, c })
    }

    pub fn from_fn(
        d: usize,
        kmax: usize,
        grid: Arc<LambdaGrid>,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut out = Self::zeros(d, kmax, grid)?;
        for j in 0..out.grid.len() {
            for k in 0..=kmax {
                out.c[j * (kmax + 1) + k] = f(k, j);
            }
        }
        if out.c.iter().any(|z| !z.is_finite()) {
            return Err(domain("coefficients must be finite"));
        }
        Ok(out)
    }

    /// Same shape with new entries.
    pub fn with_values(&self, c: Vec<Complex64>) -> Result<Self> {
        if c.len() != self.c.len() {
            return Err(domain("coefficient vector has the wrong length"));
        }
        Ok(Self { c, ..self.clone() })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn grid(&self) -> &Arc<LambdaGrid> {
        &self.grid
    }

    pub fn get(&self, k: usize, j: usize) -> Complex64 {
        self.c[j * (self.kmax + 1) + k]
    }

    pub fn set(&mut self, k: usize, j: usize, v: Complex64) {
        self.c[j * (self.kmax + 1) + k] = v;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.c
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.c
    }

    /// Amplitudes of all k at grid index j.
    pub fn block(&self, j: usize) -> &[Complex64] {
        &self.c[j * (self.kmax + 1)..(j + 1) * (self.kmax + 1)]
    }

    pub fn block_mut(&mut self, j: usize) -> &mut [Complex64] {
        let n = self.kmax + 1;
        &mut self.c[j * n..(j + 1) * n]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.d == other.d && self.kmax == other.kmax && self.grid == other.grid
    }

    /// a * self + b * other.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(domain("coefficient shapes differ"));
        }
        let c = self.c.iter().zip(&other.c).map(|(x, y)| a * x + b * y).collect();
        Ok(Self { c, ..self.clone() })
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        Self { c: self.c.iter().map(|x| a * x).collect(), ..self.clone() }
    }

    pub fn conj(&self) -> Self {
        Self { c: self.c.iter().map(|x| x.conj()).collect(), ..self.clone() }
    }

    /// Plancherel squared norm (2 pi)^{-1} sum_j w_j sum_k |c_kj|^2.
    pub fn norm_sqr(&self) -> f64 {
        let per_j: Vec<f64> = (0..self.grid.len())
            .map(|j| {
                let s: Vec<f64> = self.block(j).iter().map(|z| z.norm_sqr()).collect();
                self.grid.quad_weights()[j] * pairwise_sum(&s)
            })
            .collect();
        pairwise_sum(&per_j) / (2.0 * PI)
    }

    /// Grid indices with a nonzero block.
    pub fn support(&self) -> Vec<usize> {
        (0..self.grid.len())
            .filter(|&j| self.block(j).iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .collect()
    }
}

/// Plancherel norm of the synthesized function.
pub fn l2_norm(coeffs: &SpectralCoefficients) -> f64 {
    coeffs.norm_sqr().sqrt()
}

/// f(r, t) = (2 pi)^{-1} sum_j w_j e^{-i lambda_j t} sum_k c_kj phi_k^{lambda_j}(r).
pub fn synthesize(coeffs: &SpectralCoefficients, points: &[(f64, f64)]) -> Vec<Complex64> {
    let grid = coeffs.grid();
    let cut = live_cut(coeffs.kmax, coeffs.d);
    let support = coeffs.support();
    let mut buf = vec![0.0; coeffs.kmax + 1];
    points
        .iter()
        .map(|&(r, t)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &j in &support {
                let lambda = grid.points()[j];
                if 2.0 * lambda.abs() * r * r > cut {
                    continue;
                }
                basis_eval_all(coeffs.d, lambda, r, &mut buf);
                let radial: Complex64 = coeffs.block(j).iter().zip(&buf).map(|(c, p)| c * p).sum();
                acc += grid.quad_weights()[j] * Complex64::from_polar(1.0, -lambda * t) * radial;
            }
            acc / (2.0 * PI)
        })
        .collect()
}

/// Radial profiles F_j(r_i) = sum_k c_kj phi_k^{lambda_j}(r_i), row-major in i.
#[derive(Debug, Clone, PartialEq)]
pub struct Profiles {
    pub n_r: usize,
    pub n_grid: usize,
    pub data: Vec<Complex64>,
}

impl Profiles {
    pub fn zeros(n_r: usize, n_grid: usize) -> Self {
        Self { n_r, n_grid, data: vec![Complex64::new(0.0, 0.0); n_r * n_grid] }
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n_grid..(i + 1) * self.n_grid]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.n_grid..(i + 1) * self.n_grid]
    }
}

/// Basis values phi_k^{lambda_j}(r_i) tabulated on a radial rule, keeping
/// only the live band of the grid at each node.
///
/// Grid magnitudes increase away from the centre, so the live indices at
/// node i are the central range `n - live[i] .. n + live[i]`.
#[derive(Debug, Clone)]
pub struct BasisBank {
    d: usize,
    kmax: usize,
    grid: Arc<LambdaGrid>,
    radial: RadialRule,
    live: Vec<usize>,
    offset: Vec<usize>,
    values: Vec<f64>,
}

impl BasisBank {
    pub fn new(d: usize, kmax: usize, grid: Arc<LambdaGrid>, radial: RadialRule) -> Result<Self> {
        if radial.d != d {
            return Err(domain("radial rule built for a different d"));
        }
        let n = grid.count_per_sign();
        let cut = live_cut(kmax, d);
        let mags: Vec<f64> = grid.points()[n..].to_vec();
        let live: Vec<usize> = radial
            .nodes
            .iter()
            .map(|&r| mags.iter().take_while(|&&mu| 2.0 * mu * r * r <= cut).count())
            .collect();
        let mut offset = Vec::with_capacity(live.len() + 1);
        let mut total = 0;
        for &m in &live {
            offset.push(total);
            total += 2 * m * (kmax + 1);
        }
        offset.push(total);
        let mut values = vec![0.0; total];
        for (i, &r) in radial.nodes.iter().enumerate() {
            let m = live[i];
            for (slot, j) in (n - m..n + m).enumerate() {
                let at = offset[i] + slot * (kmax + 1);
                basis_eval_all(d, grid.points()[j], r, &mut values[at..at + kmax + 1]);
            }
        }
        Ok(Self { d, kmax, grid, radial, live, offset, values })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn grid(&self) -> &Arc<LambdaGrid> {
        &self.grid
    }

    pub fn radial(&self) -> &RadialRule {
        &self.radial
    }

    /// Live grid indices at radial node i.
    pub fn live_range(&self, i: usize) -> std::ops::Range<usize> {
        let n = self.grid.count_per_sign();
        n - self.live[i]..n + self.live[i]
    }

    fn values_at(&self, i: usize, j: usize) -> &[f64] {
        let slot = j - self.live_range(i).start;
        let at = self.offset[i] + slot * (self.kmax + 1);
        &self.values[at..at + self.kmax + 1]
    }

    fn check(&self, c: &SpectralCoefficients) -> Result<()> {
        if c.d != self.d || c.kmax != self.kmax || *c.grid != *self.grid {
            return Err(domain("coefficients do not match the basis bank"));
        }
        Ok(())
    }

    /// Radial synthesis at every node of the rule.
    pub fn profiles(&self, c: &SpectralCoefficients) -> Result<Profiles> {
        self.check(c)?;
        let mut out = Profiles::zeros(self.radial.len(), self.grid.len());
        let support: Vec<bool> = (0..self.grid.len())
            .map(|j| c.block(j).iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .collect();
        for i in 0..self.radial.len() {
            for j in self.live_range(i) {
                if !support[j] {
                    continue;
                }
                let phi = self.values_at(i, j);
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, p) in c.block(j).iter().zip(phi) {
                    acc += a * p;
                }
                out.data[i * self.grid.len() + j] = acc;
            }
        }
        Ok(out)
    }

    /// Radial projection c_kj = sum_i mu_i phi_k^{lambda_j}(r_i) G_j(r_i).
    pub fn project(&self, g: &Profiles) -> Result<SpectralCoefficients> {
        if g.n_r != self.radial.len() || g.n_grid != self.grid.len() {
            return Err(domain("profile shape does not match the basis bank"));
        }
        let mut out = SpectralCoefficients::zeros(self.d, self.kmax, self.grid.clone())?;
        for i in 0..self.radial.len() {
            let w = self.radial.weights[i];
            for j in self.live_range(i) {
                let v = g.data[i * self.grid.len() + j] * w;
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let phi = self.values_at(i, j);
                for (a, p) in out.block_mut(j).iter_mut().zip(phi) {
                    *a += v * p;
                }
            }
        }
        Ok(out)
    }

    /// Per-fibre radial energy sum_i mu_i |G_j(r_i)|^2 for each grid index.
    pub fn fibre_energy(&self, g: &Profiles) -> Vec<f64> {
        let mut e = vec![0.0; self.grid.len()];
        for i in 0..g.n_r {
            let w = self.radial.weights[i];
            for (j, z) in g.row(i).iter().enumerate() {
                e[j] += w * z.norm_sqr();
            }
        }
        e
    }
}
