//! Physical configuration: field strength, mass, and the derived scales.
//!
//! Natural units are used throughout (`hbar = c = 1`). The particle carries
//! charge `-e` with `e > 0`, and the magnetic field `B = B_z > 0` enters only
//! through the combination `eB`.

use crate::error::{LandauError, Result};

/// A uniform magnetic field along `+z` together with the particle mass.
///
/// All derived scales are computed once at construction:
///
/// * `magnetic_length` — `1 / sqrt(eB)`, the Gaussian width of the ground state,
/// * `larmor_frequency` — `eB / (2 m)`, half the classical orbit frequency;
///   level `n` has energy `(2n + 1) * larmor_frequency`,
/// * `cyclotron_frequency` — `eB / m`, the classical orbit frequency,
/// * `cyclotron_period` — `2 pi m / (eB)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticSetup {
    /// Field strength times charge, `eB > 0`.
    pub eb: f64,
    /// Particle mass `m > 0`.
    pub mass: f64,
    /// `l_B = (eB)^{-1/2}`.
    pub magnetic_length: f64,
    /// `omega_L = eB / (2m)`.
    pub larmor_frequency: f64,
    /// `omega_c = eB / m = 2 omega_L`.
    pub cyclotron_frequency: f64,
    /// `T_c = 2 pi / omega_c`.
    pub cyclotron_period: f64,
}

impl MagneticSetup {
    /// Builds a setup from `eB` and the mass, both strictly positive.
    pub fn new(eb: f64, mass: f64) -> Result<Self> {
        if !(eb > 0.0) || !eb.is_finite() {
            return Err(LandauError::InvalidParameter(format!(
                "eB must be positive and finite, got {eb}"
            )));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(LandauError::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        let cyclotron_frequency = eb / mass;
        Ok(Self {
            eb,
            mass,
            magnetic_length: eb.sqrt().recip(),
            larmor_frequency: 0.5 * cyclotron_frequency,
            cyclotron_frequency,
            cyclotron_period: 2.0 * std::f64::consts::PI / cyclotron_frequency,
        })
    }

    /// The default laboratory configuration `eB = 1`, `m = 1`.
    pub fn unit() -> Self {
        Self::new(1.0, 1.0).expect("unit setup is valid")
    }

    /// Energy of level `n`: `(2n + 1) * larmor_frequency`.
    pub fn level_energy(&self, n: usize) -> f64 {
        (2 * n + 1) as f64 * self.larmor_frequency
    }
}
