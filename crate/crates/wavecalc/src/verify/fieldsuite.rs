//! Reproducible random test fields for the operator-identity suites.
//!
//! Each field is a superposition of a few enveloped spherical waves:
//!
//! ```text
//! f(x) = Σ_j c_j · sin(a_j r)/r · e^{i k_j·x} · e^{−r²/σ_j²}
//! ```
//!
//! This class is the natural domain of the boost and momentum operators.
//! The radial transforms map it to itself: `H₋[r · sin(ar)/r · e^{ik·x}]
//! = cos(ar) e^{ik·x}` for every radial frequency `a` and wavevector `k`,
//! so chained compositions (boosts of momenta of transforms …) always
//! produce smooth, rapidly decaying fields. Generic smooth test fields do
//! not have this property: for those, `H₋(r f)` tends to a
//! direction-dependent constant at the origin, and the angular part of
//! any subsequent gradient turns that into a genuine `1/r` singularity
//! that no discretization can represent. The Gaussian envelope keeps
//! every field and every intermediate well inside the radial box.
//!
//! All draws come from a counter-seeded ChaCha stream, so a suite is
//! reproducible bit-for-bit from its seed.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::fields::ray::{RayField, RayGrid};

/// Number of spherical-wave modes superposed per field.
const MODES_PER_FIELD: usize = 3;

/// One enveloped spherical-wave mode `c · sin(ar)/r · e^{ik·x} · e^{−r²/σ²}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveMode {
    /// Complex amplitude `c`.
    pub amplitude: Complex64,
    /// Radial frequency `a` of the spherical wave `sin(ar)/r`.
    pub radial_freq: f64,
    /// Gaussian envelope width: the envelope is `e^{−r²/σ²}`.
    pub sigma: f64,
    /// Plane-wave vector `k`.
    pub wavevector: [f64; 3],
}

/// One verification test field in analytic form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteField {
    /// Position of the field within its suite.
    pub index: usize,
    /// The superposed modes.
    pub modes: Vec<WaveMode>,
}

/// `sin(x)/x`, continued analytically through the origin.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let xx = x * x;
        1.0 - xx / 6.0 + xx * xx / 120.0
    } else {
        x.sin() / x
    }
}

impl SuiteField {
    /// Evaluates the field at a Cartesian point.
    pub fn eval(&self, p: [f64; 3]) -> Complex64 {
        let rsq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let r = rsq.sqrt();
        let mut total = Complex64::new(0.0, 0.0);
        for m in &self.modes {
            let k_dot_x =
                m.wavevector[0] * p[0] + m.wavevector[1] * p[1] + m.wavevector[2] * p[2];
            let radial = m.radial_freq * sinc(m.radial_freq * r);
            let envelope = (-rsq / (m.sigma * m.sigma)).exp();
            total += m.amplitude * radial * envelope * Complex64::new(0.0, k_dot_x).exp();
        }
        total
    }

    /// Samples the field onto a ray grid.
    pub fn sample(&self, grid: Arc<RayGrid>) -> RayField {
        RayField::from_fn(grid, |p| self.eval(p))
    }
}

/// Draws the eight-field suite for a seed. Each field uses its own
/// counter-derived stream, so field `k` is stable even if the recipe for
/// other fields changes.
pub fn suite_fields(seed: u64) -> Vec<SuiteField> {
    (0..8)
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((index as u64 + 1) << 32));
            let modes = (0..MODES_PER_FIELD)
                .map(|_| {
                    let modulus = rng.gen_range(0.4..1.0);
                    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                    let radial_freq = rng.gen_range(0.7..1.9);
                    let sigma = rng.gen_range(3.5..5.5);
                    // Direction uniform on the sphere, length well below the
                    // radial frequencies so the angular bandwidth k·r stays
                    // resolvable on the suite grids.
                    let cos_t: f64 = rng.gen_range(-1.0..1.0);
                    let sin_t = (1.0 - cos_t * cos_t).sqrt();
                    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                    let len = rng.gen_range(0.15..0.40);
                    let wavevector = [
                        len * sin_t * phi.cos(),
                        len * sin_t * phi.sin(),
                        len * cos_t,
                    ];
                    WaveMode {
                        amplitude: Complex64::from_polar(modulus, phase),
                        radial_freq,
                        sigma,
                        wavevector,
                    }
                })
                .collect();
            SuiteField { index, modes }
        })
        .collect()
}
