//! Gauss–Legendre quadrature nodes and weights.
//!
//! Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
//! iteration from the Chebyshev-like initial guess; weights follow from the
//! derivative value at each root. Accuracy is at machine level for the `n`
//! used in this crate (tested against known low-order rules and by
//! integrating polynomials of degree `2n-1` exactly).

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `(-1, 1)`.
///
/// Returned nodes are ascending. Weights sum to 2.
pub fn legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // Roots come in +/- pairs; compute the upper half and mirror.
    let half = n.div_ceil(2);
    for i in 0..half {
        // Initial guess (Abramowitz & Stegun 22.16.6 style).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn_prev = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn_prev) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // Middle node is exactly zero; the mirror loop wrote it twice.
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `n`-point Gauss–Legendre rule mapped affinely onto `(a, b)`.
pub fn legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = legendre(n);
    let mid = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + hw * x).collect(),
        ws.iter().map(|w| hw * w).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn five_point_rule_matches_tabulated_values() {
        let (x, w) = legendre(5);
        // Classical 5-point values.
        assert_relative_eq!(x[2], 0.0, epsilon = 1e-15);
        assert_relative_eq!(x[3], 0.5384693101056831, epsilon = 1e-14);
        assert_relative_eq!(x[4], 0.9061798459386640, epsilon = 1e-14);
        assert_relative_eq!(w[2], 0.5688888888888889, epsilon = 1e-14);
        assert_relative_eq!(w[3], 0.4786286704993665, epsilon = 1e-14);
        assert_relative_eq!(w[4], 0.2369268850561891, epsilon = 1e-14);
    }

    #[test]
    fn integrates_high_degree_polynomial_exactly() {
        // 12-point rule is exact through degree 23.
        let (x, w) = legendre(12);
        let val: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * xi.powi(22))
            .sum();
        assert_relative_eq!(val, 2.0 / 23.0, epsilon = 1e-13);
    }

    #[test]
    fn mapped_rule_integrates_exp_on_interval() {
        let (x, w) = legendre_on(24, 0.0, 3.0);
        let val: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.exp()).sum();
        assert_relative_eq!(val, 3.0f64.exp() - 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 7, 64, 257] {
            let (_, w) = legendre(n);
            let s: f64 = w.iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-12);
        }
    }
}
