//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ∫_a^b f split into `panels` equal panels.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            let mut acc = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc += w * f(mid + 0.5 * h * x);
            }
            total += 0.5 * h * acc;
        }
        total
    }
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_sum_to_two() {
        for n in 1..=12 {
            let g = GaussLegendre::new(n);
            assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let g = GaussLegendre::new(8);
        // x^15 odd, x^14 integrates to 2/15 on [-1,1]
        assert_abs_diff_eq!(g.integrate(-1.0, 1.0, 1, |x| x.powi(14)), 2.0 / 15.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.integrate(-1.0, 1.0, 1, |x| x.powi(15)), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn composite_smooth_integral() {
        let g = GaussLegendre::new(8);
        let v = g.integrate(0.0, PI, 64, f64::sin);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn single_node_is_midpoint() {
        let g = GaussLegendre::new(1);
        assert_eq!(g.nodes(), &[0.0]);
        assert_abs_diff_eq!(g.weights()[0], 2.0, epsilon = 1e-15);
    }
}
