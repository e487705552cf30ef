//! Gauss-Legendre rules, Legendre tables and radial integrators.

mod radial;

pub use radial::{integrate_hermite, integrate_spline, integrate_trapezium, Integrator};

use std::f64::consts::PI;

use crate::error::{ModalError, Result};

const NEWTON_CAP: usize = 100;

/// Gauss-Legendre nodes on `[-1, 1]` in increasing order with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_b w_b f(mu_b)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        crate::sum::compensated_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }

    /// Smallest rule integrating a product of three `P_l` with `l <= l_max`
    /// exactly, plus a two-node margin: `ceil((3 l_max + 1) / 2) + 2`.
    pub fn exact_order_for(l_max: usize) -> usize {
        (3 * l_max + 1).div_ceil(2) + 2
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    (p, nf * (x * p - p_prev) / (x * x - 1.0))
}

/// The `n`-point Gauss-Legendre rule.
///
/// Roots of `P_n` are refined by Newton's method from the asymptotic guess
/// `cos(pi (4b + 3) / (4n + 2))` until the step is within two ulps (or stops
/// shrinking at the evaluation's rounding floor), and the
/// rule is made exactly antisymmetric by mirroring the positive half.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(ModalError::InvalidParameter("Gauss-Legendre order must be at least 1".into()));
    }
    if n == 1 {
        return Ok(QuadratureRule { nodes: vec![0.0], weights: vec![2.0] });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for b in 0..n / 2 {
        let mut x = (PI * (4.0 * b as f64 + 3.0) / (4.0 * nf + 2.0)).cos();
        let mut converged = false;
        let mut last_step = f64::INFINITY;
        for _ in 0..NEWTON_CAP {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            // Near mu = 0 the recurrence's rounding floor sits above two ulps
            // of the node; a step that no longer shrinks has reached it.
            if dx.abs() >= last_step {
                converged = true;
                break;
            }
            x -= dx;
            last_step = dx.abs();
            if last_step <= 2.0 * f64::EPSILON * x.abs() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(ModalError::NoConvergence { order: n, node: b, iterations: NEWTON_CAP });
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - b] = x;
        nodes[b] = -x;
        weights[n - 1 - b] = w;
        weights[b] = w;
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_with_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (dp * dp);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `[P_0(x), ..., P_degree(x)]`.
pub fn legendre_values(x: f64, degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    out.push(1.0);
    if degree >= 1 {
        out.push(x);
    }
    for l in 1..degree {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * x * out[l] - lf * out[l - 1]) / (lf + 1.0);
        out.push(next);
    }
    out
}

/// `P_l(mu_b)` for `l in [0, l_max]` at every node, node-major with `l`
/// fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreTable {
    l_max: usize,
    node_count: usize,
    values: Vec<f64>,
}

impl LegendreTable {
    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    #[inline]
    pub fn value(&self, l: usize, node: usize) -> f64 {
        self.values[node * (self.l_max + 1) + l]
    }

    /// `P_0 .. P_l_max` at one node.
    #[inline]
    pub fn row(&self, node: usize) -> &[f64] {
        let w = self.l_max + 1;
        &self.values[node * w..(node + 1) * w]
    }
}

pub fn legendre_table(l_max: usize, rule: &QuadratureRule) -> LegendreTable {
    let mut values = Vec::with_capacity(rule.len() * (l_max + 1));
    for &mu in rule.nodes() {
        values.extend(legendre_values(mu, l_max));
    }
    LegendreTable { l_max, node_count: rule.len(), values }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let r1 = gauss_legendre(1).unwrap();
        assert_eq!((r1.nodes(), r1.weights()), (&[0.0][..], &[2.0][..]));

        let r2 = gauss_legendre(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let ulp2 = 2.0 * f64::EPSILON * s;
        assert!((r2.nodes()[0] + s).abs() <= ulp2 && (r2.nodes()[1] - s).abs() <= ulp2);
        assert!(r2.weights().iter().all(|w| (w - 1.0).abs() < 1e-15));

        let r3 = gauss_legendre(3).unwrap();
        assert!((r3.integrate(|x| x.powi(4)) - 0.4).abs() <= 1e-15);
    }

    #[test]
    fn rejects_zero_order() {
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn symmetric_increasing_nodes() {
        for n in [5, 50, 64, 257, 1000] {
            let r = gauss_legendre(n).unwrap();
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            for b in 0..n {
                assert_eq!(r.nodes()[b], -r.nodes()[n - 1 - b]);
                assert_eq!(r.weights()[b], r.weights()[n - 1 - b]);
            }
            assert!(r.weights().iter().all(|&w| w > 0.0));
            let total = crate::sum::compensated_sum(r.weights().iter().copied());
            assert!((total - 2.0).abs() < 1e-14, "n = {n}: {total}");
        }
    }

    #[test]
    fn large_orders_converge() {
        for n in [4096, 16384] {
            let r = gauss_legendre(n).unwrap();
            let total = crate::sum::compensated_sum(r.weights().iter().copied());
            assert!((total - 2.0).abs() < 1e-12, "n = {n}: {total}");
        }
    }

    #[test]
    fn legendre_rows() {
        let rule = gauss_legendre(51).unwrap();
        let table = legendre_table(50, &rule);
        for b in 0..rule.len() {
            assert_eq!(table.value(0, b), 1.0);
            assert_eq!(table.value(1, b), rule.nodes()[b]);
            assert!(table.row(b).iter().all(|p| p.abs() <= 1.0 + 1e-15));
        }
    }

    #[test]
    fn exact_order_rule() {
        assert_eq!(QuadratureRule::exact_order_for(32), 51);
        assert_eq!(QuadratureRule::exact_order_for(2000), 3003);
    }
}
