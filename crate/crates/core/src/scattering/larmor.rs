use super::profile::PotentialProfile;
use super::transfer::{transmission, Transmission};
use crate::analytic::{LarmorTimes, Provenance};
use crate::att::SpinMoments;
use crate::richardson::Tableau;
use crate::{Error, Result};

/// `ħω_L / E` must stay below this.
pub const FEEBLE_LIMIT: f64 = 1e-2;
/// Largest accepted change between the last two extrapolated estimates,
/// relative to `sqrt(τ_y² + τ_z²)`.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

/// The spin projection whose potential is lowered (`Plus`) or raised
/// (`Minus`) by `ħω_L/2` inside the field region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinBranch {
    Plus,
    Minus,
}

impl SpinBranch {
    pub fn shift(&self, hbar: f64, omega_l: f64) -> f64 {
        match self {
            SpinBranch::Plus => -0.5 * hbar * omega_l,
            SpinBranch::Minus => 0.5 * hbar * omega_l,
        }
    }
}

/// How the `ω_L → 0` limit is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakFieldConfig {
    /// Largest field used; `None` picks `feebleness_ratio · E / ħ`.
    pub omega_base: Option<f64>,
    /// Number of field strengths `ω, ω/2, ω/4, …` fed to the extrapolation.
    pub richardson_levels: usize,
    pub feebleness_ratio: f64,
}

impl Default for WeakFieldConfig {
    fn default() -> Self {
        Self {
            omega_base: None,
            richardson_levels: 3,
            feebleness_ratio: 1e-4,
        }
    }
}

impl WeakFieldConfig {
    pub fn raw() -> Self {
        Self {
            richardson_levels: 1,
            ..Self::default()
        }
    }

    pub fn with_levels(mut self, levels: usize) -> Self {
        self.richardson_levels = levels;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega_base = Some(omega);
        self
    }

    /// The base frequency at `energy`, checked against the feeble-field bound.
    pub fn omega_for(&self, energy: f64, hbar: f64) -> Result<f64> {
        if self.richardson_levels == 0 {
            return Err(Error::InvalidConfig("richardson_levels must be at least 1".into()));
        }
        let omega = self.omega_base.unwrap_or(self.feebleness_ratio * energy / hbar);
        if !(omega > 0.0 && hbar * omega < FEEBLE_LIMIT * energy) {
            return Err(Error::InvalidConfig(format!(
                "ħω_L = {} is not feeble compared with E = {energy}",
                hbar * omega
            )));
        }
        Ok(omega)
    }
}

/// Transmission of both spin branches at Larmor frequency `omega_l`.
pub fn spin_pair(profile: &PotentialProfile, energy: f64, omega_l: f64) -> Result<(Transmission, Transmission)> {
    let hbar = profile.physics.hbar;
    let plus = transmission(profile, energy, SpinBranch::Plus.shift(hbar, omega_l))?;
    let minus = transmission(profile, energy, SpinBranch::Minus.shift(hbar, omega_l))?;
    Ok((plus, minus))
}

/// Transmitted spin moments at finite `omega_l`.
pub fn spin_moments(profile: &PotentialProfile, energy: f64, omega_l: f64) -> Result<SpinMoments> {
    let (p, m) = spin_pair(profile, energy, omega_l)?;
    SpinMoments::from_log_amplitudes((p.log_abs, p.phase), (m.log_abs, m.phase), omega_l)
}

/// Raw readings `(s_y/ω, s_z/ω)` at one field strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawEstimate {
    pub omega: f64,
    pub tau_y: f64,
    pub tau_z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LarmorExtraction {
    pub times: LarmorTimes,
    /// Estimates at `ω, ω/2, …`.
    pub raw: Vec<RawEstimate>,
    /// Diagonal of the extrapolation tableau for `(τ_y, τ_z)`.
    pub diagonal: Vec<(f64, f64)>,
}

/// Larmor times of `profile` at `energy` from spin-split amplitudes and
/// extrapolation `ω_L → 0`.
pub fn larmor_times_numeric(profile: &PotentialProfile, energy: f64, config: &WeakFieldConfig) -> Result<LarmorTimes> {
    Ok(larmor_extraction(profile, energy, config)?.times)
}

pub fn larmor_extraction(profile: &PotentialProfile, energy: f64, config: &WeakFieldConfig) -> Result<LarmorExtraction> {
    let omega0 = config.omega_for(energy, profile.physics.hbar)?;
    let raw = (0..config.richardson_levels)
        .map(|i| {
            let omega = omega0 / 2f64.powi(i as i32);
            let (tau_y, tau_z) = spin_moments(profile, energy, omega)?.precession_times()?;
            Ok(RawEstimate { omega, tau_y, tau_z })
        })
        .collect::<Result<Vec<_>>>()?;

    // s_y/ω and s_z/ω are even in ω: expand in ω² with ratio 2 per level.
    let ty: Vec<f64> = raw.iter().map(|r| r.tau_y).collect();
    let tz: Vec<f64> = raw.iter().map(|r| r.tau_z).collect();
    let table_y = Tableau::new(&ty, 2.0, 2);
    let table_z = Tableau::new(&tz, 2.0, 2);
    let diagonal: Vec<(f64, f64)> = table_y.diagonal().into_iter().zip(table_z.diagonal()).collect();

    let (tau_y, tau_z) = *diagonal.last().expect("at least one level");
    let magnitude = tau_y.hypot(tau_z);
    if let (Some(dy), Some(dz)) = (table_y.last_change(), table_z.last_change()) {
        if !(dy.hypot(dz) <= CONVERGENCE_TOLERANCE * magnitude) {
            return Err(Error::Convergence { sequence: diagonal });
        }
    }
    Ok(LarmorExtraction {
        times: LarmorTimes::new(tau_y, tau_z, Provenance::Numeric),
        raw,
        diagonal,
    })
}
