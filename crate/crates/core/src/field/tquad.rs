//! Quadrature in t on the box [-t_box, t_box] resolving the r^2-scale
//! structure of the Koranyi-type weights.

use crate::quadrature::gauss_legendre;

/// Nodes and weights on [0, t_box]: geometric panels from `scale / 4`
/// outward plus `uniform` equal panels, `points` Gauss-Legendre nodes each.
pub fn half_box_rule(scale: f64, t_box: f64, uniform: usize, points: usize) -> (Vec<f64>, Vec<f64>) {
    let mut edges = vec![0.0, t_box];
    let mut a = (0.25 * scale).max(1e-12);
    while a < t_box {
        edges.push(a);
        a *= 1.6;
    }
    for m in 1..uniform.max(1) {
        edges.push(t_box * m as f64 / uniform as f64);
    }
    edges.sort_by(|x, y| x.total_cmp(y));
    edges.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(y.abs()));
    let gl = gauss_legendre(points).expect("points >= 1");
    let mut nodes = Vec::with_capacity(edges.len() * points);
    let mut weights = Vec::with_capacity(edges.len() * points);
    for e in edges.windows(2) {
        let (c, h) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
        if h <= 0.0 {
            continue;
        }
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            nodes.push(c + h * x);
            weights.push(h * w);
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn resolves_lorentzian() {
        for a in [1e-8, 1e-3, 0.5, 4.0] {
            let (x, w) = half_box_rule(a, 20.0, 40, 12);
            let v: f64 = x.iter().zip(&w).map(|(t, w)| w * a / (a * a + t * t)).sum();
            assert_relative_eq!(v, (20.0 / a).atan(), max_relative = 1e-10);
            let c: f64 = x.iter().zip(&w).map(|(t, w)| w * (3.0 * t).cos()).sum();
            assert_relative_eq!(c, (60.0f64).sin() / 3.0, epsilon = 1e-12);
        }
    }
}
