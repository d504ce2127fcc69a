//! Gauss–Legendre rules on the unit interval.

/// Largest supported number of nodes.
pub const MAX_ORDER: usize = 16;

/// `n`-point Gauss–Legendre rule mapped to `[0, 1]`.
///
/// Besides nodes and weights it carries the collocation matrix
/// `partial[m][l] = ∫₀^{c_m} ℓ_l(s) ds`, where `ℓ_l` is the Lagrange basis on
/// the nodes; it integrates node data up to each node with stage order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub partial: Vec<Vec<f64>>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "Gauss-Legendre order out of range");
        let (x, w) = legendre_nodes(n);
        let nodes: Vec<f64> = x.iter().map(|v| 0.5 * (v + 1.0)).collect();
        let weights: Vec<f64> = w.iter().map(|v| 0.5 * v).collect();

        let mut partial = vec![vec![0.0; n]; n];
        for (m, &cm) in nodes.iter().enumerate() {
            for (l, slot) in partial[m].iter_mut().enumerate() {
                // ℓ_l has degree n-1, so the same rule scaled to [0, c_m] is exact.
                *slot = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&s, &ws)| cm * ws * lagrange(&nodes, l, cm * s))
                    .sum();
            }
        }
        GaussLegendre {
            nodes,
            weights,
            partial,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f` with one panel.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let h = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| w * f(a + c * h))
            .sum::<f64>()
            * h
    }
}

fn lagrange(nodes: &[f64], l: usize, x: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != l)
        .map(|(_, &xj)| (x - xj) / (nodes[l] - xj))
        .product()
}

/// Roots and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[n - 1 - i] = z;
        w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Lagrange interpolation weights for `x` on equispaced abscissae `0, 1, …, k-1`.
pub(crate) fn equispaced_weights(k: usize, x: f64) -> Vec<f64> {
    (0..k)
        .map(|l| {
            (0..k)
                .filter(|&j| j != l)
                .map(|j| (x - j as f64) / (l as f64 - j as f64))
                .product()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_one_and_nodes_are_sorted() {
        for n in 1..=MAX_ORDER {
            let q = GaussLegendre::new(n);
            assert_relative_eq!(q.weights.iter().sum::<f64>(), 1.0, max_relative = 1e-14);
            assert!(q.nodes.windows(2).all(|p| p[0] < p[1]));
            assert!(q.nodes.iter().all(|&c| c > 0.0 && c < 1.0));
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        for n in 1..=8 {
            let q = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let got = q.integrate(0.0, 2.0, |x| x.powi(deg as i32));
            let exact = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert_relative_eq!(got, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn collocation_matrix_integrates_polynomials_to_each_node() {
        let n = 5;
        let q = GaussLegendre::new(n);
        // f(s) = s^3 - 2s: ∫₀^c f = c⁴/4 - c²
        for m in 0..n {
            let c = q.nodes[m];
            let got: f64 = (0..n)
                .map(|l| q.partial[m][l] * (q.nodes[l].powi(3) - 2.0 * q.nodes[l]))
                .sum();
            assert_relative_eq!(got, c.powi(4) / 4.0 - c * c, max_relative = 1e-12);
        }
        // last row of the full interval is the weight vector
        let total: f64 = q.weights.iter().sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn two_point_rule_values() {
        let q = GaussLegendre::new(2);
        let d = 0.5 / 3f64.sqrt();
        assert_relative_eq!(q.nodes[0], 0.5 - d, max_relative = 1e-15);
        assert_relative_eq!(q.weights[1], 0.5, max_relative = 1e-15);
    }

    #[test]
    fn equispaced_interpolation_is_exact_on_cubics() {
        let w = equispaced_weights(4, 1.3);
        let f = |x: f64| x * x * x - x + 2.0;
        let got: f64 = (0..4).map(|j| w[j] * f(j as f64)).sum();
        assert_relative_eq!(got, f(1.3), max_relative = 1e-14);
    }
}
