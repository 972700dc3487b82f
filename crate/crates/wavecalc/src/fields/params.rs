//! Wavepacket parameters and the kinematic quantities derived from them.

use crate::error::{Result, WaveError};
use serde::{Deserialize, Serialize};

/// Parameters of a wavepacket: mass, the velocity-scale constant `c`, and
/// the packet velocity. Units are arbitrary but consistent (ħ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub mass: f64,
    pub c: f64,
    pub v: [f64; 3],
}

impl PacketParams {
    pub fn new(mass: f64, c: f64, v: [f64; 3]) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(WaveError::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(WaveError::InvalidParameter(format!(
                "c must be non-negative and finite, got {c}"
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(WaveError::InvalidParameter(format!("velocity {v:?} not finite")));
        }
        Ok(Self { mass, c, v })
    }

    pub fn speed(&self) -> f64 {
        (self.v[0] * self.v[0] + self.v[1] * self.v[1] + self.v[2] * self.v[2]).sqrt()
    }

    /// Momentum `p = m v` of the Galilean-form packet.
    pub fn p(&self) -> [f64; 3] {
        [self.mass * self.v[0], self.mass * self.v[1], self.mass * self.v[2]]
    }

    /// Envelope wavenumber `p⁰ = m√(c² + v²) = √(m²c² + |p|²)`.
    pub fn p0(&self) -> f64 {
        let s = self.speed();
        self.mass * (self.c * self.c + s * s).sqrt()
    }

    /// Rate of the spatially uniform rest phase, `−m c²/2`
    /// (the packet carries `exp(−i m c² t / 2)`).
    pub fn rest_phase_rate(&self) -> f64 {
        -0.5 * self.mass * self.c * self.c
    }

    /// Lorentz factor `γ = 1/√(1 − v²/c²)`; requires `|v| < c`.
    pub fn gamma(&self) -> Result<f64> {
        let s = self.speed();
        if !(s < self.c) {
            return Err(WaveError::SuperluminalRelativistic { speed: s, c: self.c });
        }
        Ok(1.0 / (1.0 - (s / self.c) * (s / self.c)).sqrt())
    }

    /// Relativistic momentum `P = m γ v`.
    pub fn rel_p(&self) -> Result<[f64; 3]> {
        let g = self.gamma()?;
        Ok([self.mass * g * self.v[0], self.mass * g * self.v[1], self.mass * g * self.v[2]])
    }

    /// Relativistic envelope wavenumber `P⁰ = m γ c`; on the same mass
    /// shell as `rel_p`: `√(m²c² + |P|²) = m γ c`.
    pub fn rel_p0(&self) -> Result<f64> {
        Ok(self.mass * self.gamma()? * self.c)
    }

    /// Rest-phase rate of the relativistic-form packet, `−m c²/(2γ)`.
    pub fn rel_rest_phase_rate(&self) -> Result<f64> {
        Ok(-0.5 * self.mass * self.c * self.c / self.gamma()?)
    }
}
