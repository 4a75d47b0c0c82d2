//! Hardy-type inequalities and the T-versus-L estimates on seeded smooth
//! cylindrical fields.

use super::{max_of, VerificationReport, TAIL_GATE};
use crate::error::{domain, Result};
use crate::field::{
    Analyzer, LambdaGrid, PhysicalGrid, RadialProfile, SmoothFamily, SpectralCoefficients, WeightKernel,
};
use crate::quadrature::pairwise_sum;
use crate::spectral_calculus::{apply, OperatorSpec};
use crate::weights::{WeightBase, WeightSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardyWeight {
    /// |(z, t)|^{-2} |z|, constant 1/d.
    W4,
    /// |z|^{-1}, constant 1/(d - 1).
    InvZ,
}

/// Grid, analyzer and field family shared by the inequality checks.
#[derive(Clone)]
pub struct InequalitySetup {
    pub d: usize,
    pub analyzer: Arc<Analyzer>,
    pub family: SmoothFamily,
    /// Profiles used for even and odd field indices.
    pub profiles: [RadialProfile; 2],
}

impl InequalitySetup {
    /// kmax = 12 on the uniform grid of the box |t| <= 18 up to |lambda| = 7.5,
    /// with envelopes centred in [3.2, 3.6] of width 0.42.
    pub fn new(d: usize) -> Result<Self> {
        let kmax = 12;
        let grid = Arc::new(LambdaGrid::uniform_for_box(18.0, 7.5)?);
        let pg = PhysicalGrid::for_grid(d, &grid, kmax, 2)?;
        let analyzer = Arc::new(Analyzer::new(d, kmax, grid.clone(), pg)?);
        let mut family = SmoothFamily::new(d, kmax, grid, RadialProfile::Laguerre { top: 6 });
        family.centre = (3.2, 3.6);
        family.width = 0.42;
        let profiles = [RadialProfile::Laguerre { top: 6 }, RadialProfile::Vanishing { order: 1, degree: 4 }];
        Ok(Self { d, analyzer, family, profiles })
    }

    pub fn sample(&self, seed: u64, index: usize) -> Result<SpectralCoefficients> {
        let mut fam = self.family.clone();
        fam.profile = self.profiles[index % 2];
        fam.sample(seed, index)
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

/// max over fields of ||w f|| / ||L^{1/2} f||, with ||w f|| evaluated
/// exactly over the box from the cosine moments of w^2.
pub fn run_hardy(setup: &InequalitySetup, which: HardyWeight, count: usize, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = setup.d;
    let (weight, bound) = match which {
        HardyWeight::W4 => (WeightSpec::plain(WeightBase::W4), 1.0 / d as f64),
        HardyWeight::InvZ => {
            if d < 2 {
                return Err(domain("the |z|^{-1} Hardy inequality needs d >= 2"));
            }
            (WeightSpec::plain(WeightBase::InvAbsZ), 1.0 / (d as f64 - 1.0))
        }
    };
    let kernel = WeightKernel::new(setup.analyzer.bank().clone(), weight, 2)?;
    let out: Vec<Result<(f64, f64)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let c = setup.sample(seed, i)?;
            let num = kernel.quad_form(&setup.analyzer.bank().profiles(&c)?)?;
            let den = apply(&OperatorSpec::PowerOfL(0.5), &c)?.norm_sqr();
            Ok(((num / den).sqrt(), setup.box_tail(&c)?))
        })
        .collect();
    let (ratios, tails): (Vec<f64>, Vec<f64>) = out.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
    let name = match which {
        HardyWeight::W4 => format!("hardy_w4_d{d}"),
        HardyWeight::InvZ => format!("hardy_invz_d{d}"),
    };
    Ok(VerificationReport::bound_check(name, max_of(ratios), bound, 1e-6)
        .param("d", d)
        .param("count", count)
        .param("seed", seed)
        .param("kmax", setup.analyzer.bank().kmax())
        .gated("tail_t", max_of(tails), TAIL_GATE)
        .timed(start))
}

/// (2 pi)^{-1} sum_j w_j sum_i mu_i r_i^2 |G_j(r_i)|^2 for the profiles of c.
fn r_weighted_norm_sqr(an: &Analyzer, c: &SpectralCoefficients) -> Result<f64> {
    let bank = an.bank();
    let p = bank.profiles(c)?;
    let rad = bank.radial();
    let grid = bank.grid();
    let rows: Vec<f64> = (0..p.n_r)
        .map(|i| {
            let e: Vec<f64> =
                p.row(i).iter().zip(grid.quad_weights()).map(|(z, w)| w * z.norm_sqr()).collect();
            rad.weights[i] * rad.nodes[i] * rad.nodes[i] * pairwise_sum(&e)
        })
        .collect();
    Ok(pairwise_sum(&rows) / (2.0 * PI))
}

/// ||r T f||^2 / ||T f||^2 for a single k = 0 fibre against d / (2 |lambda|).
fn single_fibre_defect(an: &Analyzer) -> Result<f64> {
    let bank = an.bank();
    let grid = bank.grid().clone();
    let j = grid.count_per_sign() + grid.count_per_sign() / 3;
    let mut c = SpectralCoefficients::zeros(bank.d(), bank.kmax(), grid.clone())?;
    c.set(0, j, Complex64::new(1.0, 0.0));
    let tf = apply(&OperatorSpec::AbsT(1.0), &c)?;
    let got = r_weighted_norm_sqr(an, &tf)? / tf.norm_sqr();
    let exact = bank.d() as f64 / (2.0 * grid.points()[j].abs());
    Ok((got - exact).abs() / exact)
}

/// The two ratios ||T f|| / ||L f|| (tolerance 1e-8) and
/// ||r T f|| / ||L^{1/2} f|| (tolerance 1e-4), both against 1/2.
pub fn run_lemma43(setup: &InequalitySetup, count: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let start = Instant::now();
    let an = &setup.analyzer;
    let out: Vec<Result<(f64, f64, f64)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let c = setup.sample(seed, i)?;
            let tf = apply(&OperatorSpec::AbsT(1.0), &c)?;
            let lf = apply(&OperatorSpec::SubLaplacian, &c)?;
            let half = apply(&OperatorSpec::PowerOfL(0.5), &c)?;
            let a = (tf.norm_sqr() / lf.norm_sqr()).sqrt();
            let b = (r_weighted_norm_sqr(an, &tf)? / half.norm_sqr()).sqrt();
            Ok((a, b, setup.box_tail(&c)?))
        })
        .collect();
    let mut t_ratio = Vec::new();
    let mut rt_ratio = Vec::new();
    let mut tails = Vec::new();
    for r in out {
        let (a, b, t) = r?;
        t_ratio.push(a);
        rt_ratio.push(b);
        tails.push(t);
    }
    let d = setup.d;
    let tail = max_of(tails);
    let first = VerificationReport::bound_check(format!("lemma43_t_d{d}"), max_of(t_ratio), 0.5, 1e-8)
        .param("d", d)
        .param("count", count)
        .param("seed", seed)
        .timed(start);
    let second = VerificationReport::bound_check(format!("lemma43_rt_d{d}"), max_of(rt_ratio), 0.5, 1e-4)
        .param("d", d)
        .param("count", count)
        .param("seed", seed)
        .gated("tail_t", tail, TAIL_GATE)
        .gated("single_fibre_oracle", single_fibre_defect(an)?, 1e-6)
        .timed(start);
    Ok(vec![first, second])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_branch_t_ratio_is_one_quarter() {
        let setup = InequalitySetup::new(1).unwrap();
        let grid = setup.analyzer.bank().grid().clone();
        let mut c = SpectralCoefficients::zeros(1, 12, grid.clone()).unwrap();
        c.set(0, grid.count_per_sign() + 4, Complex64::new(0.3, -1.0));
        let tf = apply(&OperatorSpec::AbsT(1.0), &c).unwrap();
        let lf = apply(&OperatorSpec::SubLaplacian, &c).unwrap();
        assert!(((tf.norm_sqr() / lf.norm_sqr()).sqrt() - 0.25).abs() < 1e-15);
        assert!(single_fibre_defect(&setup.analyzer).unwrap() < 1e-6);
    }

    #[test]
    fn ratios_are_scale_invariant() {
        let setup = InequalitySetup::new(2).unwrap();
        let c = setup.sample(4, 1).unwrap();
        let c5 = c.scaled(Complex64::new(5.0, 0.0));
        let kernel = WeightKernel::new(setup.analyzer.bank().clone(), WeightSpec::plain(WeightBase::InvAbsZ), 2).unwrap();
        let ratio = |c: &SpectralCoefficients| {
            let num = kernel.quad_form(&setup.analyzer.bank().profiles(c).unwrap()).unwrap();
            num / apply(&OperatorSpec::PowerOfL(0.5), c).unwrap().norm_sqr()
        };
        assert!((ratio(&c) - ratio(&c5)).abs() <= 1e-14 * ratio(&c));
        let r = |c: &SpectralCoefficients| {
            let tf = apply(&OperatorSpec::AbsT(1.0), c).unwrap();
            r_weighted_norm_sqr(&setup.analyzer, &tf).unwrap() / apply(&OperatorSpec::PowerOfL(0.5), c).unwrap().norm_sqr()
        };
        assert!((r(&c) - r(&c5)).abs() <= 1e-14 * r(&c));
    }

    #[test]
    fn hardy_holds_on_a_few_fields() {
        let setup = InequalitySetup::new(1).unwrap();
        let r = run_hardy(&setup, HardyWeight::W4, 4, 0).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(run_hardy(&setup, HardyWeight::InvZ, 1, 0).is_err());
    }
}
