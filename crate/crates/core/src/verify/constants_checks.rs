//! Checks of the explicit constants: kappa, the Dawson integrals, the
//! operator-norm bounds, the stability thresholds and the Gronwall envelope.

use super::{max_of, VerificationReport};
use crate::constants::{
    dawson, dawson_remark_gap, gronwall_envelope, kappa, kappa_closed_11, radial_bound, remark27_bound, stability_threshold,
    KappaInput, RadialWeight, Remark27, StabilityCase,
};
use crate::error::{domain, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

/// kappa for one input, checked strictly against its closed-form bound.
pub fn run_kappa(c1: f64, c2: f64, s: f64, mu: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let r = kappa(&KappaInput::new(c1, c2, s, mu)?)?;
    Ok(VerificationReport::strict_bound_check("kappa", r.kappa, r.closed_bound, 0.0)
        .param("c1", c1)
        .param("c2", c2)
        .param("s", s)
        .param("mu", mu)
        .residual("b_star", r.b_star)
        .timed(start))
}

/// For every (s, mu), kappa against the closed bound of its own input and
/// against the s = mu = 1 closed value 2 (3 e^{1/4} - 2)^2.
pub fn run_kappa_ordering(s_list: &[f64], mu_list: &[f64]) -> Result<Vec<VerificationReport>> {
    let pairs: Vec<(f64, f64)> = s_list.iter().flat_map(|&s| mu_list.iter().map(move |&m| (s, m))).collect();
    let results: Vec<Result<Vec<VerificationReport>>> = pairs
        .par_iter()
        .map(|&(s, mu)| {
            let start = Instant::now();
            let r = kappa(&KappaInput::new(1.0, 1.0, s, mu)?)?;
            let closed = VerificationReport::strict_bound_check(format!("kappa_below_closed_s{s}_mu{mu}"), r.kappa, r.closed_bound, 0.0)
                .param("s", s)
                .param("mu", mu)
                .timed(start);
            let literal = VerificationReport::strict_bound_check(format!("kappa_below_closed_11_s{s}_mu{mu}"), r.kappa, kappa_closed_11(), 0.0)
                .param("s", s)
                .param("mu", mu)
                .timed(start);
            Ok(vec![closed, literal])
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// e^{-1} int_0^1 e^{t^2} dt from the series sum_n 1 / (n! (2n + 1)).
fn dawson_two_one_series() -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..40 {
        term /= n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    (-1.0f64).exp() * sum
}

/// The three Dawson checks: D(1, x) against 1 - e^{-x} on 1000 points of
/// [0, 20], D(2, 1) against a series oracle, and D(p, x) <= x^{1-p}(1 - e^{-x^p})
/// on a 100 x 100 grid of p in [1, 12] and x in (0, 6].
///
/// At p = 1 both sides coincide, so that column is checked for equality;
/// the strict inequality is checked for p > 1.
pub fn run_dawson() -> Result<Vec<VerificationReport>> {
    let start = Instant::now();
    let mut closed = Vec::with_capacity(1000);
    for i in 0..1000 {
        let x = 20.0 * i as f64 / 999.0;
        closed.push((dawson(1.0, x)? - (1.0 - (-x).exp())).abs());
    }
    let first = VerificationReport::residual_check("dawson_p1_closed_form", max_of(closed), 1e-12)
        .param("points", 1000usize)
        .timed(start);

    let start = Instant::now();
    let oracle = dawson_two_one_series();
    let second = VerificationReport::residual_check("dawson_p2_x1_oracle", (dawson(2.0, 1.0)? - oracle).abs(), 1e-10)
        .residual("oracle", oracle)
        .timed(start);

    let start = Instant::now();
    let ps: Vec<f64> = (0..100).map(|i| 1.0 + 11.0 * i as f64 / 99.0).collect();
    let xs: Vec<f64> = (1..=100).map(|i| 0.06 * i as f64).collect();
    let rows: Vec<Result<(f64, f64)>> = ps
        .par_iter()
        .map(|&p| {
            let mut worst: f64 = f64::NEG_INFINITY;
            let mut equality: f64 = 0.0;
            for &x in &xs {
                let gap = dawson_remark_gap(p, x)?;
                if p == 1.0 {
                    let rhs = -(-x).exp_m1();
                    equality = equality.max((dawson(p, x)? - rhs).abs() / rhs);
                } else {
                    worst = worst.max(-gap);
                }
            }
            Ok((worst, equality))
        })
        .collect();
    let mut worst = Vec::new();
    let mut equality = Vec::new();
    for r in rows {
        let (w, e) = r?;
        worst.push(w);
        equality.push(e);
    }
    let third = VerificationReport::strict_bound_check("dawson_remark_inequality", max_of(worst), 0.0, 0.0)
        .param("measured", "max of D_p / bound - 1 over p > 1")
        .param("p_range", "1..12")
        .param("x_range", "0.06..6")
        .param("grid", "100x100")
        .gated("p1_equality_defect", max_of(equality), 1e-12)
        .timed(start);
    Ok(vec![first, second, third])
}

/// The explicit bounds for d = 1..=d_max, each reported as a value, and a
/// residual check that each family decreases in d.
pub fn run_bounds(d_max: usize) -> Result<Vec<VerificationReport>> {
    if d_max == 0 {
        return Err(domain("d_max must be at least 1"));
    }
    let start = Instant::now();
    let mut out = Vec::new();
    let mut increases = 0usize;
    let families: [(&str, usize); 6] =
        [("remark27_w1", 1), ("remark27_w2", 2), ("remark27_w3n", 2), ("remark27_w4n", 2), ("radial_w3", 1), ("radial_w4", 1)];
    for (name, d_lo) in families {
        let mut prev = f64::INFINITY;
        for d in d_lo..=d_max {
            let v = match name {
                "remark27_w1" => remark27_bound(Remark27::W1, d)?,
                "remark27_w2" => remark27_bound(Remark27::W2, d)?,
                "remark27_w3n" => remark27_bound(Remark27::W3N, d)?,
                "remark27_w4n" => remark27_bound(Remark27::W4N, d)?,
                "radial_w3" => radial_bound(RadialWeight::W3, d, 1.0, 1.0)?,
                _ => radial_bound(RadialWeight::W4, d, 1.0, 1.0)?,
            };
            if v >= prev {
                increases += 1;
            }
            prev = v;
            out.push(VerificationReport::value(name, v).param("d", d));
        }
    }
    out.push(
        VerificationReport::residual_check("bounds_decrease_in_d", increases as f64, 0.0)
            .param("d_max", d_max)
            .timed(start),
    );
    Ok(out)
}

/// Stability thresholds for d = 1..=d_max with the reciprocal identity
/// threshold * remark27 bound = 1/2 * 2 = 1 as a gated residual.
pub fn run_thresholds(d_max: usize) -> Result<Vec<VerificationReport>> {
    if d_max == 0 {
        return Err(domain("d_max must be at least 1"));
    }
    let mut out = Vec::new();
    for (case, which, d_lo) in [(StabilityCase::I, Remark27::W1, 1), (StabilityCase::II, Remark27::W2, 2)] {
        for d in d_lo..=d_max {
            let start = Instant::now();
            let t = stability_threshold(case, d)?;
            let identity = (t * remark27_bound(which, d)? - 1.0).abs();
            out.push(
                VerificationReport::value(format!("threshold_{case:?}").to_lowercase(), t)
                    .param("d", d)
                    .gated("reciprocal_identity", identity, 1e-13)
                    .timed(start),
            );
        }
    }
    Ok(out)
}

/// Parameters of the Gronwall check.
#[derive(Debug, Clone, PartialEq)]
pub struct GronwallConfig {
    pub count: usize,
    pub seed: u64,
    /// RK4 steps in ln r.
    pub steps: usize,
    pub tolerance: f64,
}

impl Default for GronwallConfig {
    fn default() -> Self {
        Self { count: 100, seed: 0, steps: 4000, tolerance: 1e-9 }
    }
}

/// Solution at eps of F(r) = A + int_r^b (u1 F + u2 sqrt F), integrated by
/// RK4 from b down to eps in the variable v = ln r.
fn gronwall_oracle(a: f64, u1: f64, u2: &dyn Fn(f64) -> f64, eps: f64, b: f64, steps: usize) -> f64 {
    let rhs = |v: f64, f: f64| {
        let r = v.exp();
        -r * (u1 * f + u2(r) * f.max(0.0).sqrt())
    };
    let (v0, v1) = (b.ln(), eps.ln());
    let h = (v1 - v0) / steps as f64;
    let mut f = a;
    let mut v = v0;
    for _ in 0..steps {
        let k1 = rhs(v, f);
        let k2 = rhs(v + 0.5 * h, f + 0.5 * h * k1);
        let k3 = rhs(v + 0.5 * h, f + 0.5 * h * k2);
        let k4 = rhs(v + h, f + h * k3);
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        v += h;
    }
    f
}

/// Random (A, u1, u2 = c r^{mu - 3/2}, eps, b) with synthetic solutions
/// that satisfy the integral inequality with data scaled by factors in
/// [0, 1]; every fourth one saturates it. Measured is the largest relative
/// excess of a solution over the envelope.
pub fn run_gronwall(cfg: &GronwallConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut excess = Vec::with_capacity(cfg.count);
    let mut saturated_gap: f64 = 0.0;
    for i in 0..cfg.count {
        let a: f64 = rng.random_range(0.1..3.0);
        let u1: f64 = rng.random_range(0.0..2.0);
        let c: f64 = rng.random_range(0.1..2.0);
        let mu: f64 = rng.random_range(0.51..1.0);
        let eps: f64 = rng.random_range(0.01..0.5);
        let b: f64 = eps + rng.random_range(0.5..3.0);
        let scales: [f64; 3] = if i % 4 == 0 {
            [1.0, 1.0, 1.0]
        } else {
            [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]
        };
        let u2 = move |r: f64| c * r.powf(mu - 1.5);
        let env = gronwall_envelope(a, u1, &u2, eps, b)?;
        let u2s = move |r: f64| scales[2] * c * r.powf(mu - 1.5);
        let f = gronwall_oracle(scales[0] * a, scales[1] * u1, &u2s, eps, b, cfg.steps);
        excess.push((f - env) / env);
        if i % 4 == 0 {
            saturated_gap = saturated_gap.max((f - env).abs() / env);
        }
    }
    Ok(VerificationReport::bound_check("gronwall_envelope", max_of(excess), 0.0, cfg.tolerance)
        .param("count", cfg.count)
        .param("seed", cfg.seed)
        .param("steps", cfg.steps)
        .residual("saturated_gap", saturated_gap)
        .timed(start))
}
