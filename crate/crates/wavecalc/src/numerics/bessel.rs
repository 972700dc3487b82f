//! Spherical Bessel functions `j0`, `j1`, `j2` of the first kind.
//!
//! The closed forms suffer catastrophic cancellation near zero, so small
//! arguments switch to the leading Taylor terms. These feed the angular
//! integrals of plane-wave factors over the unit sphere.

/// `j0(x) = sin(x)/x`.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-2 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

/// `j1(x) = sin(x)/x² - cos(x)/x`.
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-2 {
        let x2 = x * x;
        x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0))
    } else {
        x.sin() / (x * x) - x.cos() / x
    }
}

/// `j2(x) = (3/x² - 1) sin(x)/x - 3 cos(x)/x²`.
pub fn j2(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 5e-2 {
        let x2 = x * x;
        x2 / 15.0 * (1.0 - x2 / 14.0 * (1.0 - x2 / 36.0))
    } else {
        (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values_at_unit_argument() {
        assert_relative_eq!(j0(1.0), 0.8414709848078965, epsilon = 1e-14);
        assert_relative_eq!(j1(1.0), 0.30116867893975674, epsilon = 1e-14);
        assert_relative_eq!(j2(1.0), 0.06203505201137386, epsilon = 1e-13);
    }

    #[test]
    fn series_and_closed_form_agree_at_crossover() {
        // Just below each switch point the series branch is used; the closed
        // form is still accurate enough there to cross-check it.
        let x = 0.999e-2;
        assert_relative_eq!(j0(x), x.sin() / x, max_relative = 1e-12);
        assert_relative_eq!(
            j1(x),
            x.sin() / (x * x) - x.cos() / x,
            max_relative = 1e-9
        );
        let x = 0.999 * 5e-2;
        assert_relative_eq!(
            j2(x),
            (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x),
            max_relative = 1e-9
        );
    }

    #[test]
    fn limits_at_zero() {
        assert_relative_eq!(j0(1e-14), 1.0, epsilon = 1e-12);
        assert_relative_eq!(j1(1e-14), 0.0, epsilon = 1e-12);
        assert_relative_eq!(j2(1e-14), 0.0, epsilon = 1e-12);
    }
}
