//! Small numerical building blocks shared across the crate: Gauss–Legendre
//! quadrature rules, Fornberg finite-difference weights on arbitrary grids,
//! the exponential integral `E1`, spherical Bessel functions, and a complex
//! Hermitian eigenvalue helper.

pub mod bessel;
pub mod expint;
pub mod fd;
pub mod gauss;

use ndarray::Array2;
use num_complex::Complex64;

/// Eigenvalues of a complex Hermitian matrix, ascending.
///
/// Uses the exact real-symmetric embedding `[[Re, -Im], [Im, Re]]`, whose
/// spectrum is that of the Hermitian matrix with every eigenvalue doubled;
/// after sorting, every second entry is taken. This keeps the solve inside
/// a real symmetric eigenproblem, which is robust and allocation-friendly.
pub fn hermitian_eigenvalues(m: &Array2<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let mut embed = nalgebra::DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[[i, j]];
            embed[(i, j)] = z.re;
            embed[(i, j + n)] = -z.im;
            embed[(i + n, j)] = z.im;
            embed[(i + n, j + n)] = z.re;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(embed);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.into_iter().step_by(2).collect()
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius norm of the anti-Hermitian part `M - M^H` (zero iff Hermitian).
pub fn hermiticity_defect(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = m[[i, j]] - m[[j, i]].conj();
            acc += d.norm_sqr();
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C;

    #[test]
    fn hermitian_eigenvalues_match_known_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let mut m = Array2::zeros((2, 2));
        m[[0, 0]] = C::new(2.0, 0.0);
        m[[0, 1]] = C::new(0.0, 1.0);
        m[[1, 0]] = C::new(0.0, -1.0);
        m[[1, 1]] = C::new(2.0, 0.0);
        let vals = hermitian_eigenvalues(&m);
        assert_eq!(vals.len(), 2);
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let mut m = Array2::zeros((2, 2));
        m[[0, 1]] = C::new(1.0, 0.0);
        // Real antisymmetric part has defect sqrt(|1|^2 + |-1|^2) = sqrt(2).
        assert_relative_eq!(hermiticity_defect(&m), 2.0f64.sqrt(), epsilon = 1e-14);
        m[[1, 0]] = C::new(1.0, 0.0);
        assert_relative_eq!(hermiticity_defect(&m), 0.0, epsilon = 1e-14);
    }
}
