//! Exact weight multiplication on coefficient fields over the periodic box.
//!
//! For a field with profiles F_j(r) on a uniform grid of spacing h and a
//! weight q(r, t) even in t,
//!   (q f)^{lambda_i}(r) = (h / 2 pi) sum_j qhat(r, (i - j) h) F_j(r),
//!   int |f|^2 q dt    = (h / 2 pi)^2 sum_{i,j} conj(F_i) qhat(r, (i - j) h) F_j,
//! with qhat(r, eta) = int_{-T}^{T} q(r, t) cos(eta t) dt. Both Toeplitz
//! forms are evaluated by circulant embedding, padded to a power of two of
//! at least twice the grid length.

use super::coeffs::{BasisBank, Profiles, SpectralCoefficients};
use super::tquad::half_box_rule;
use crate::error::{domain, Result};
use crate::quadrature::pairwise_sum;
use crate::weights::WeightSpec;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Cosine moments of q(r, t) = w(r, t)^power on the box, per radial node,
/// stored as circulant spectra.
#[derive(Clone)]
pub struct WeightKernel {
    bank: Arc<BasisBank>,
    weight: WeightSpec,
    power: i32,
    n_grid: usize,
    len: usize,
    spectra: Vec<f64>,
    moments0: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl WeightKernel {
    /// Kernel of q = w^power for power 1 (multiplication) or 2 (norms).
    pub fn new(bank: Arc<BasisBank>, weight: WeightSpec, power: i32) -> Result<Self> {
        let grid = bank.grid().clone();
        let h = grid.spacing().ok_or_else(|| domain("weight kernels need a uniform lambda grid"))?;
        let t_box = PI / h;
        let n_grid = grid.len();
        let len = (2 * n_grid).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let rad = bank.radial();
        let mut spectra = vec![0.0; rad.len() * len];
        let mut moments0 = vec![0.0; rad.len()];
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (i, &r) in rad.nodes.iter().enumerate() {
            let moments = if weight.is_t_independent() {
                let mut m = vec![0.0; n_grid];
                m[0] = 2.0 * t_box * weight.value(r, 0.0).powi(power);
                m
            } else {
                cosine_moments(|t| weight.value(r, t).powi(power), r * r, t_box, h, n_grid)
            };
            moments0[i] = moments[0];
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            buf[0] = moments[0].into();
            for m in 1..n_grid {
                buf[m] = moments[m].into();
                buf[len - m] = moments[m].into();
            }
            forward.process(&mut buf);
            for (s, z) in spectra[i * len..(i + 1) * len].iter_mut().zip(&buf) {
                *s = z.re;
            }
        }
        Ok(Self { bank, weight, power, n_grid, len, spectra, moments0, forward, inverse })
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn power(&self) -> i32 {
        self.power
    }

    pub fn bank(&self) -> &Arc<BasisBank> {
        &self.bank
    }

    /// int_{-T}^{T} q(r_i, t) dt.
    pub fn mass(&self, i: usize) -> f64 {
        self.moments0[i]
    }

    fn spacing(&self) -> f64 {
        self.bank.grid().spacing().expect("uniform grid")
    }

    fn padded(&self, row: &[Complex64], range: std::ops::Range<usize>, buf: &mut [Complex64]) -> bool {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let mut any = false;
        for j in range {
            buf[j] = row[j];
            any |= row[j] != Complex64::new(0.0, 0.0);
        }
        any
    }

    /// int_box q |f|^2 for the field with the given profiles.
    pub fn quad_form(&self, p: &Profiles) -> Result<f64> {
        self.check(p)?;
        let scale = (self.spacing() / (2.0 * PI)).powi(2) / self.len as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.forward.get_inplace_scratch_len()];
        let mut e = vec![0.0; self.len];
        let rows: Vec<f64> = (0..p.n_r)
            .map(|i| {
                if !self.padded(p.row(i), self.bank.live_range(i), &mut buf) {
                    return 0.0;
                }
                self.forward.process_with_scratch(&mut buf, &mut scratch);
                let spec = &self.spectra[i * self.len..(i + 1) * self.len];
                e.iter_mut().zip(buf.iter().zip(spec)).for_each(|(x, (z, s))| *x = z.norm_sqr() * s);
                self.bank.radial().weights[i] * scale * pairwise_sum(&e)
            })
            .collect();
        Ok(pairwise_sum(&rows))
    }

    /// Profiles of q f restricted to the grid band.
    pub fn multiply(&self, p: &Profiles) -> Result<Profiles> {
        self.check(p)?;
        let scale = self.spacing() / (2.0 * PI) / self.len as f64;
        let mut out = Profiles::zeros(p.n_r, p.n_grid);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        let scratch_len = self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len());
        let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
        for i in 0..p.n_r {
            let live = self.bank.live_range(i);
            if !self.padded(p.row(i), 0..self.n_grid, &mut buf) {
                continue;
            }
            self.forward.process_with_scratch(&mut buf, &mut scratch);
            let spec = &self.spectra[i * self.len..(i + 1) * self.len];
            buf.iter_mut().zip(spec).for_each(|(z, s)| *z *= s * scale);
            self.inverse.process_with_scratch(&mut buf, &mut scratch);
            let row = out.row_mut(i);
            for j in live {
                row[j] = buf[j];
            }
        }
        Ok(out)
    }

    /// Galerkin projection P(q f) of a coefficient field.
    pub fn project(&self, c: &SpectralCoefficients) -> Result<SpectralCoefficients> {
        let p = self.bank.profiles(c)?;
        self.bank.project(&self.multiply(&p)?)
    }

    fn check(&self, p: &Profiles) -> Result<()> {
        if p.n_r != self.bank.radial().len() || p.n_grid != self.n_grid {
            return Err(domain("profile shape does not match the weight kernel"));
        }
        Ok(())
    }
}

/// m_n = int_{-T}^{T} q(t) cos(n h t) dt for n = 0..count, for q even.
fn cosine_moments(q: impl Fn(f64) -> f64, scale: f64, t_box: f64, h: f64, count: usize) -> Vec<f64> {
    let (ts, ws) = half_box_rule(scale, t_box, count.max(8), 12);
    let mut acc = vec![0.0; count];
    for (&t, &w) in ts.iter().zip(&ws) {
        let v = 2.0 * w * q(t);
        if v == 0.0 {
            continue;
        }
        let step = Complex64::from_polar(1.0, h * t);
        let mut z = Complex64::new(1.0, 0.0);
        for a in acc.iter_mut() {
            *a += v * z.re;
            z *= step;
        }
    }
    acc
}
