//! Radial integral transforms and dilation operators, per ray.
//!
//! Two backends:
//! * [`closed`] — exact term-algebra images (Hilbert family, dilation and
//!   its inverse) that refuse anything outside their domain;
//! * [`numeric`] — principal-value and oscillatory quadrature on
//!   [`crate::fields::ray::RayField`]s with taper + Richardson
//!   extrapolation and a self-reported error estimate.

pub mod closed;
pub mod numeric;

use serde::{Deserialize, Serialize};

/// Enumeration of every transform the crate names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    /// Radial cosine transform (numeric backend only).
    Fc,
    /// Radial sine transform (numeric backend only).
    Fs,
    /// Hilbert transform of the even extension.
    He,
    /// Hilbert transform of the odd extension.
    Ho,
    /// Mixed-parity combination `½[(H_e+H_o) + (H_e−H_o)P]`.
    Hplus,
    /// Mixed-parity combination `½[(H_e+H_o) − (H_e−H_o)P]`.
    Hminus,
    /// Point reflection through the origin.
    Parity,
    /// Dilation `Σ = −i∂_r r`.
    Sigma,
    /// Inverse dilation `Σ⁻¹ = (i/r)∫₀^r`.
    SigmaInv,
    /// The unitary intertwiner built from the sine/cosine transforms.
    U,
    /// Its inverse/adjoint.
    Ustar,
    /// The radial frequency operator `l⁰ = U* r U`.
    L0,
}

impl std::str::FromStr for TransformKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "fc" => TransformKind::Fc,
            "fs" => TransformKind::Fs,
            "he" => TransformKind::He,
            "ho" => TransformKind::Ho,
            "hplus" | "h+" => TransformKind::Hplus,
            "hminus" | "h-" => TransformKind::Hminus,
            "parity" | "p" => TransformKind::Parity,
            "sigma" => TransformKind::Sigma,
            "sigma_inv" | "sigmainv" => TransformKind::SigmaInv,
            "u" => TransformKind::U,
            "ustar" | "u*" => TransformKind::Ustar,
            "l0" => TransformKind::L0,
            other => return Err(format!("unknown transform kind `{other}`")),
        })
    }
}
