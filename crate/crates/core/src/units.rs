//! Physical constants, the particle preset and nondimensionalization.
//!
//! Every solver in the crate works in the system `ħ = m = 1` with the barrier
//! height as the energy unit. Laboratory quantities (nK, μm, ms) are converted
//! at the boundary through [`Scales`].

use crate::{Error, Result};

/// Revision of the constant table below. Bump when any value changes.
pub const CONSTANTS_VERSION: &str = "codata-2022.1";

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub boltzmann: f64,
    /// Unified atomic mass unit, kg.
    pub atomic_mass_unit: f64,
}

impl UnitSystem {
    pub const CODATA: UnitSystem = UnitSystem {
        hbar: 1.054_571_817e-34,
        boltzmann: 1.380_649e-23,
        atomic_mass_unit: 1.660_539_068_92e-27,
    };

    /// `E = k_B·T`, the convention used for quoting optical barrier heights.
    pub fn energy_from_temperature(&self, kelvin: f64) -> Result<f64> {
        if !(kelvin >= 0.0) {
            return Err(Error::Domain(format!(
                "temperature must be non-negative, got {kelvin} K"
            )));
        }
        Ok(self.boltzmann * kelvin)
    }

    pub fn temperature_from_energy(&self, joules: f64) -> f64 {
        joules / self.boltzmann
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::CODATA
    }
}

/// `E = k_B·T` with CODATA constants.
pub fn energy_from_temperature(kelvin: f64) -> Result<f64> {
    UnitSystem::CODATA.energy_from_temperature(kelvin)
}

/// A massive particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSpec {
    pub label: String,
    /// Mass in kg.
    pub mass: f64,
}

impl ParticleSpec {
    /// ⁸⁷Rb atomic mass in unified atomic mass units.
    pub const RB87_MASS_U: f64 = 86.909_180;

    pub fn new(label: impl Into<String>, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("particle mass must be positive, got {mass}")));
        }
        Ok(Self {
            label: label.into(),
            mass,
        })
    }

    pub fn rb87() -> Self {
        Self {
            label: "rb87".to_owned(),
            mass: Self::RB87_MASS_U * UnitSystem::CODATA.atomic_mass_unit,
        }
    }

    /// Looks up a built-in preset by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rb87" | "87rb" => Some(Self::rb87()),
            _ => None,
        }
    }
}

/// The pair `(ħ, m)` a solver computes with.
///
/// [`Physics::NATURAL`] is the dimensionless system. Scaling `hbar` alone at
/// fixed barrier parameters realises the semiclassical limit `ħ → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub hbar: f64,
    pub mass: f64,
}

impl Physics {
    pub const NATURAL: Physics = Physics {
        hbar: 1.0,
        mass: 1.0,
    };

    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite() && mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!(
                "hbar and mass must be positive and finite, got hbar={hbar}, mass={mass}"
            )));
        }
        Ok(Self { hbar, mass })
    }

    /// Natural units with `ħ_eff = 1/s`.
    pub fn semiclassical(scale: f64) -> Result<Self> {
        Self::new(1.0 / scale, 1.0)
    }

    /// Wavenumber `sqrt(2m|ΔE|)/ħ` for the kinetic energy `ΔE`.
    pub fn wavenumber(&self, kinetic: f64) -> f64 {
        (2.0 * self.mass * kinetic.abs()).sqrt() / self.hbar
    }
}

impl Default for Physics {
    fn default() -> Self {
        Self::NATURAL
    }
}

/// Time for a classical particle of mass `mass` to cross `length` with
/// effective kinetic energy `|v0 - energy|`, in whatever consistent units the
/// arguments carry.
pub fn traversal_time(mass: f64, length: f64, v0: f64, energy: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::Domain(format!("length must be positive, got {length}")));
    }
    let gap = (v0 - energy).abs();
    if gap == 0.0 {
        return Err(Error::Singular(
            "classical traversal time diverges at E = V0".to_owned(),
        ));
    }
    Ok(mass * length / (2.0 * mass * gap).sqrt())
}

/// Classical traversal time in SI units.
pub fn classical_time(particle: &ParticleSpec, length: f64, v0: f64, energy: f64) -> Result<f64> {
    traversal_time(particle.mass, length, v0, energy)
}

/// Physical dimension of a quantity passed through [`Scales`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Energy,
    Length,
    Time,
    /// Angular frequency, rad/s.
    Frequency,
}

/// Conversion factors between SI and the dimensionless system.
///
/// Fixing `ħ = m = 1` and the energy unit determines the length unit
/// `ħ/sqrt(m·E_s)` and the time unit `ħ/E_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub energy_scale: f64,
    pub length_scale: f64,
    pub time_scale: f64,
    pub mass_scale: f64,
    pub hbar: f64,
}

impl Scales {
    pub fn new(units: &UnitSystem, particle: &ParticleSpec, energy_scale: f64) -> Result<Self> {
        if !(energy_scale > 0.0 && energy_scale.is_finite()) {
            return Err(Error::Domain(format!(
                "energy scale must be positive, got {energy_scale}"
            )));
        }
        Ok(Self {
            energy_scale,
            length_scale: units.hbar / (particle.mass * energy_scale).sqrt(),
            time_scale: units.hbar / energy_scale,
            mass_scale: particle.mass,
            hbar: units.hbar,
        })
    }

    fn factor(&self, dim: Dimension) -> f64 {
        match dim {
            Dimension::Energy => self.energy_scale,
            Dimension::Length => self.length_scale,
            Dimension::Time => self.time_scale,
            Dimension::Frequency => 1.0 / self.time_scale,
        }
    }

    pub fn to_dimensionless(&self, dim: Dimension, value: f64) -> f64 {
        value / self.factor(dim)
    }

    pub fn to_physical(&self, dim: Dimension, value: f64) -> f64 {
        value * self.factor(dim)
    }
}
