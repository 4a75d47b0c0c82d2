//! Discrete lambda grids, radial rules and physical grids.

use crate::error::{domain, Result};
use crate::laguerre_basis::sphere_area;
use crate::quadrature::gauss_legendre;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    /// |lambda| = lambda_min ratio^m; weights |lambda| ln(ratio).
    Geometric { ratio: f64 },
    /// |lambda| = (m + 1/2) spacing; weights = spacing. Dual to a periodic
    /// t-box of half width pi / spacing.
    Uniform { spacing: f64 },
}

/// Sign-symmetric grid of nonzero frequencies, stored in increasing order:
/// index `n - 1 - m` holds `-mu_m` and index `n + m` holds `+mu_m`, where
/// `n = count_per_sign` and `mu_0 < mu_1 < ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    points: Vec<f64>,
    quad_weights: Vec<f64>,
    kind: GridKind,
    count_per_sign: usize,
}

impl LambdaGrid {
    pub fn geometric(lambda_min: f64, ratio: f64, count_per_sign: usize) -> Result<Self> {
        if !(lambda_min > 0.0 && ratio > 1.0 && lambda_min.is_finite() && ratio.is_finite()) {
            return Err(domain(format!(
                "geometric grid needs lambda_min > 0 and ratio > 1, got {lambda_min}, {ratio}"
            )));
        }
        if count_per_sign == 0 {
            return Err(domain("grid needs at least one point per sign"));
        }
        let mags: Vec<f64> = (0..count_per_sign)
            .map(|m| lambda_min * ratio.powi(m as i32))
            .collect();
        let w = ratio.ln();
        Ok(Self::from_magnitudes(&mags, |mu| mu * w, GridKind::Geometric { ratio }))
    }

    /// Ratio 2^{1/8} from 2^{-7} to 2^{7}: 113 points per sign.
    pub fn default_geometric() -> Self {
        Self::geometric(2f64.powi(-7), 2f64.powf(0.125), 113).expect("valid default grid")
    }

    pub fn uniform(spacing: f64, count_per_sign: usize) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(domain(format!("uniform grid needs spacing > 0, got {spacing}")));
        }
        if count_per_sign == 0 {
            return Err(domain("grid needs at least one point per sign"));
        }
        let mags: Vec<f64> = (0..count_per_sign)
            .map(|m| (m as f64 + 0.5) * spacing)
            .collect();
        Ok(Self::from_magnitudes(&mags, |_| spacing, GridKind::Uniform { spacing }))
    }

    /// Uniform grid dual to the t-box [-t_box, t_box] reaching up to
    /// |lambda| <= lambda_max.
    pub fn uniform_for_box(t_box: f64, lambda_max: f64) -> Result<Self> {
        if !(t_box > 0.0 && lambda_max > 0.0) {
            return Err(domain("t_box and lambda_max must be positive"));
        }
        let spacing = PI / t_box;
        let n = ((lambda_max / spacing) - 0.5).floor().max(0.0) as usize + 1;
        Self::uniform(spacing, n)
    }

    fn from_magnitudes(mags: &[f64], weight: impl Fn(f64) -> f64, kind: GridKind) -> Self {
        let n = mags.len();
        let mut points = Vec::with_capacity(2 * n);
        let mut quad_weights = Vec::with_capacity(2 * n);
        for &mu in mags.iter().rev() {
            points.push(-mu);
            quad_weights.push(weight(mu));
        }
        for &mu in mags {
            points.push(mu);
            quad_weights.push(weight(mu));
        }
        Self { points, quad_weights, kind, count_per_sign: n }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn count_per_sign(&self) -> usize {
        self.count_per_sign
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ratio(&self) -> Option<f64> {
        match self.kind {
            GridKind::Geometric { ratio } => Some(ratio),
            GridKind::Uniform { .. } => None,
        }
    }

    pub fn spacing(&self) -> Option<f64> {
        match self.kind {
            GridKind::Uniform { spacing } => Some(spacing),
            GridKind::Geometric { .. } => None,
        }
    }

    /// Half width of the periodic t-box dual to a uniform grid.
    pub fn t_box(&self) -> Option<f64> {
        self.spacing().map(|h| PI / h)
    }

    pub fn lambda_min(&self) -> f64 {
        self.points[self.count_per_sign].abs()
    }

    pub fn lambda_max(&self) -> f64 {
        self.points[self.points.len() - 1].abs()
    }

    /// Index after moving `steps` positions outward along the same sign.
    pub fn shifted(&self, j: usize, steps: i64) -> Option<usize> {
        let n = self.count_per_sign as i64;
        let j = j as i64;
        let target = if j >= n { j + steps } else { j - steps };
        let same_sign = if j >= n { target >= n } else { target < n && target >= 0 };
        (same_sign && target < 2 * n && target >= 0).then_some(target as usize)
    }

    /// Indices whose magnitude rank lies in the central `fraction` of the
    /// grid, per sign.
    pub fn central(&self, fraction: f64) -> Vec<usize> {
        let n = self.count_per_sign;
        let drop = ((1.0 - fraction) * 0.5 * n as f64).round() as usize;
        (0..2 * n)
            .filter(|&j| {
                let m = if j >= n { j - n } else { n - 1 - j };
                m >= drop && m + drop < n
            })
            .collect()
    }
}

/// Value of u = 2 |lambda| r^2 beyond which every basis function of index
/// <= kmax is below roughly 1e-18 of its peak.
pub fn live_cut(kmax: usize, d: usize) -> f64 {
    4.0 * kmax as f64 + 2.0 * d as f64 + 24.0 * ((kmax + d) as f64).sqrt() + 40.0
}

/// Radial quadrature for the measure Omega_{2d-1} r^{2d-1} dr.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    pub d: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Parameters of the composite radial rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSpec {
    /// Largest Laguerre index to resolve.
    pub kmax: usize,
    /// Smallest and largest |lambda| to resolve.
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    /// Minimum outer radius.
    pub r_box: f64,
    /// Panel width in units of the inverse peak radial wavenumber.
    pub panel_width: f64,
    /// Gauss-Legendre points per panel.
    pub points: usize,
    /// Split point near the origin.
    pub r0: f64,
}

impl RadialSpec {
    pub fn new(kmax: usize, lambda_lo: f64, lambda_hi: f64) -> Self {
        Self { kmax, lambda_lo, lambda_hi, r_box: 0.0, panel_width: 10.0, points: 20, r0: 1e-3 }
    }

    pub fn u_cut(&self, d: usize) -> f64 {
        live_cut(self.kmax, d)
    }
}

impl RadialRule {
    /// Composite Gauss-Legendre rule in r. The basis functions of index
    /// <= kmax at frequency lambda oscillate with radial wavenumber at most
    /// about sqrt(8 |lambda| (2 kmax + d)), so panels are uniform in r up to
    /// the cut of the finest scale and grow geometrically beyond, where the
    /// finest live frequency drops like 1 / r^2.
    pub fn build(d: usize, spec: &RadialSpec) -> Result<Self> {
        if d == 0 {
            return Err(domain("d must be at least 1"));
        }
        if !(spec.lambda_lo > 0.0 && spec.lambda_hi >= spec.lambda_lo) {
            return Err(domain("radial rule needs 0 < lambda_lo <= lambda_hi"));
        }
        let u_cut = spec.u_cut(d);
        let order = (2 * spec.kmax + d) as f64;
        let h_fine = spec.panel_width / (8.0 * spec.lambda_hi * order).sqrt();
        let r_fine = (u_cut / (2.0 * spec.lambda_hi)).sqrt();
        let r_max = (u_cut / (2.0 * spec.lambda_lo)).sqrt().max(spec.r_box);
        let mut edges = vec![0.0];
        if spec.r0 > 0.0 && spec.r0 < h_fine {
            edges.push(spec.r0);
        }
        let m_fine = (r_fine.min(r_max) / h_fine).ceil() as usize;
        for m in 1..=m_fine {
            edges.push(m as f64 * r_fine.min(r_max) / m_fine as f64);
        }
        // At radius r the finest live frequency is u_cut / (2 r^2).
        let ratio = 1.0 + spec.panel_width * (2.0 / (u_cut * 8.0 * order)).sqrt() * 2.0;
        let mut r = *edges.last().unwrap_or(&r_fine);
        while r < r_max {
            r = (r * ratio).min(r_max);
            if r_max - r < 1e-12 * r_max {
                r = r_max;
            }
            edges.push(r);
        }
        Self::from_edges(d, &edges, spec.points)
    }

    pub fn from_edges(d: usize, edges: &[f64], points: usize) -> Result<Self> {
        let gl = gauss_legendre(points)?;
        let omega = sphere_area(d);
        let mut nodes = Vec::with_capacity(edges.len() * points);
        let mut weights = Vec::with_capacity(edges.len() * points);
        for e in edges.windows(2) {
            let (a, b) = (e[0], e[1]);
            if b <= a {
                continue;
            }
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                let r = c + h * x;
                nodes.push(r);
                weights.push(h * w * omega * r.powi(2 * d as i32 - 1));
            }
        }
        Ok(Self { d, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_box(&self) -> f64 {
        self.nodes.last().copied().unwrap_or(0.0)
    }
}

/// Radial rule plus a periodic uniform t-grid on [-t_box, t_box).
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalGrid {
    pub radial: RadialRule,
    pub t_box: f64,
    pub t_nodes: Vec<f64>,
    pub t_weights: Vec<f64>,
}

impl PhysicalGrid {
    pub fn new(radial: RadialRule, t_box: f64, nt: usize) -> Result<Self> {
        if !(t_box > 0.0) || nt < 2 {
            return Err(domain("physical grid needs t_box > 0 and at least two t nodes"));
        }
        let dt = 2.0 * t_box / nt as f64;
        Ok(Self {
            radial,
            t_box,
            t_nodes: (0..nt).map(|m| -t_box + dt * m as f64).collect(),
            t_weights: vec![dt; nt],
        })
    }

    /// Grid matched to a uniform lambda grid: the t-box is its dual box and
    /// the t-grid oversamples the grid's band by `oversample`.
    pub fn for_grid(d: usize, grid: &LambdaGrid, kmax: usize, oversample: usize) -> Result<Self> {
        let t_box = grid
            .t_box()
            .ok_or_else(|| domain("physical grids pair with uniform lambda grids only"))?;
        let spec = RadialSpec::new(kmax, grid.lambda_min(), grid.lambda_max());
        let radial = RadialRule::build(d, &spec)?;
        Self::new(radial, t_box, grid.len() * oversample.max(1))
    }

    pub fn d(&self) -> usize {
        self.radial.d
    }

    pub fn dt(&self) -> f64 {
        self.t_weights[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_grid_shape() {
        let g = LambdaGrid::default_geometric();
        assert_eq!(g.len(), 226);
        assert_relative_eq!(g.lambda_min(), 2f64.powi(-7));
        assert_relative_eq!(g.lambda_max(), 2f64.powi(7), max_relative = 1e-13);
        for j in 0..g.len() {
            assert_eq!(g.points()[j], -g.points()[g.len() - 1 - j]);
            assert!(g.points()[j] != 0.0 && g.quad_weights()[j] > 0.0);
        }
        let n = g.count_per_sign();
        for m in 1..n {
            assert_relative_eq!(g.points()[n + m] / g.points()[n + m - 1], 2f64.powf(0.125), max_relative = 1e-14);
        }
    }

    #[test]
    fn shifting_stays_on_sign() {
        let g = LambdaGrid::geometric(1.0, 2.0, 4).unwrap();
        assert_eq!(g.shifted(4, 1), Some(5));
        assert_eq!(g.shifted(3, 1), Some(2));
        assert_eq!(g.shifted(7, 1), None);
        assert_eq!(g.shifted(4, -1), None);
        assert_eq!(g.central(0.5), vec![1, 2, 5, 6]);
    }

    #[test]
    fn uniform_grid_box() {
        let g = LambdaGrid::uniform_for_box(20.0, 10.0).unwrap();
        assert_relative_eq!(g.t_box().unwrap(), 20.0, max_relative = 1e-15);
        assert!(g.lambda_max() <= 10.0 && g.lambda_max() + g.spacing().unwrap() > 10.0);
    }

    #[test]
    fn radial_rule_integrates_gaussian_moments() {
        for d in 1..=3 {
            let spec = RadialSpec::new(16, 0.1, 10.0);
            let rule = RadialRule::build(d, &spec).unwrap();
            // int exp(-a r^2) dmu = pi^d / a^d
            for a in [0.2, 1.0, 15.0] {
                let v: f64 = rule.nodes.iter().zip(&rule.weights).map(|(r, w)| w * (-a * r * r).exp()).sum();
                assert_relative_eq!(v, (PI / a).powi(d as i32), max_relative = 1e-12);
            }
        }
    }
}

