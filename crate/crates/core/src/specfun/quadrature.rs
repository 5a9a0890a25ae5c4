use std::f64::consts::FRAC_PI_2;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `order`-point rule, locating each root of `P_order` by
    /// Newton iteration from the Chebyshev-like initial guess.
    ///
    /// # Panics
    /// If `order` is zero.
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order > 0, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                deriv = dp;
                let step = p / dp;
                x -= step;
                if step.abs() < 1e-14 {
                    let (_, dp) = legendre_with_derivative(n, x);
                    deriv = dp;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            // x runs from the largest root downwards
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// `∫_a^b f` split into `panels` equal sub-intervals.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + p as f64 * width;
                self.integrate(lo, lo + width, &mut f)
            })
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// `∫_{-1}^{1} cos(z t) (1 − t²)^{ν − 1/2} dt` by direct quadrature.
///
/// The imaginary part of the complex exponential integrates to zero by
/// symmetry, so only the cosine is kept. The integral is taken in the angle
/// variable `t = sin φ` with `φ = (π/2)(3s − s³)/2`, which turns the
/// endpoint behaviour `(1 − t²)^{ν−1/2}` into a high-order zero at `s = ±1`,
/// and is split into panels proportional to `z` so oscillations stay
/// resolved. Intended for `rule.order() ≥ 64`, `z ≤ 100`, `ν ∈ [1/2, 5]`.
pub fn poisson_integral(nu: f64, z: f64, rule: &QuadratureRule) -> f64 {
    let panels = 1 + (8.0 * z / rule.order() as f64).floor() as usize;
    let two_nu = 2.0 * nu;
    2.0 * rule.integrate_composite(0.0, 1.0, panels, |s| {
        let phi = FRAC_PI_2 * 0.5 * s * (3.0 - s * s);
        let jac = FRAC_PI_2 * 1.5 * (1.0 - s * s);
        let c = phi.cos().max(0.0);
        (z * phi.sin()).cos() * c.powf(two_nu) * jac
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_symmetric_and_weights_sum_to_two() {
        for order in [1, 2, 5, 32, 64, 127, 256] {
            let rule = QuadratureRule::gauss_legendre(order);
            assert_eq!(rule.order(), order);
            let nodes = rule.nodes();
            for w in nodes.windows(2) {
                assert!(w[0] < w[1]);
            }
            for i in 0..order {
                assert!((nodes[i] + nodes[order - 1 - i]).abs() < 1e-15);
            }
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-12, "order {order}: {total}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = QuadratureRule::gauss_legendre(8);
        // ∫_{-1}^{1} x^14 = 2/15
        let got = rule.integrate(-1.0, 1.0, |x| x.powi(14));
        assert!((got - 2.0 / 15.0).abs() < 1e-14);
        let got = rule.integrate(0.0, 2.0, |x| x.powi(3));
        assert!((got - 4.0).abs() < 1e-13);
    }

    #[test]
    fn poisson_examples() {
        let rule = QuadratureRule::gauss_legendre(64);
        assert!((poisson_integral(0.5, 0.0, &rule) - 2.0).abs() < 1e-12);
        assert!((poisson_integral(1.5, 0.0, &rule) - 4.0 / 3.0).abs() < 1e-12);
        assert!(poisson_integral(0.5, std::f64::consts::PI, &rule).abs() < 1e-12);
    }
}
