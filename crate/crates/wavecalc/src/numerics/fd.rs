//! Finite-difference weights on arbitrary node sets (Fornberg's algorithm).
//!
//! Given nodes `x_0..x_{n-1}` and an evaluation point `z`, produces weights
//! `w_i` such that `f^(m)(z) ≈ Σ w_i f(x_i)`, exact for polynomials of degree
//! `n-1`. Used for radial derivatives on the non-uniform Gauss–Legendre grid
//! and for polar derivatives near the coordinate axis.

/// Weights for the `m`-th derivative at `z` from samples at `xs`.
///
/// `m = 0` gives interpolation weights. Requires `xs.len() > m`.
pub fn weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m, "need at least m+1 nodes for an m-th derivative");
    // c[k][i]: weight of node i for the k-th derivative, built incrementally.
    let mut c = vec![vec![0.0f64; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c.pop().unwrap()
}
