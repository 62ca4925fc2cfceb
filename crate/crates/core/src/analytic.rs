//! Closed-form Larmor precession times for a rectangular barrier.
//!
//! With `κ² = 2m(V0 - E)/ħ²` and `λ = κL`, both times are real-analytic in
//! `s = κ²L²`. Dividing numerator and denominator by `λ²` removes the
//! `0/0` at `E = V0`:
//!
//! ```text
//! D   = 2Eħ²/(mL²) + V0²·S²
//! τ_y = L·sqrt(2mE)·(ħ²/(mL²) + V0·A) / D
//! τ_z = V0·S·(ħ·S + (mL²/ħ)·V0·G) / D
//! ```
//!
//! where `S = sinh λ/λ`, `A = (sinh 2λ/2λ - 1)/λ²` and `G = (cosh λ - S)/λ²`
//! (see [`crate::special`]). For `s < 0` the same series give the
//! above-barrier continuation `sinh λ → i sin|λ|`. For `λ ≥ 1` every term is
//! divided by `S²` so that only `e^{-2λ}` appears; past
//! [`ASYMPTOTIC_OPACITY`] that decay is dropped entirely.

use crate::special::{chc_minus_shc_over_s, shc, shc_double_minus_one_over_s};
use crate::units::{traversal_time, Physics};
use crate::{Error, Extended, Result};

/// Opacity beyond which the `e^{-2λ}` corrections are dropped.
pub const ASYMPTOTIC_OPACITY: f64 = 350.0;

/// `λ` at and above which the exponentially scaled form is used.
const SCALED_OPACITY: f64 = 1.0;

/// Where a pair of precession times came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Numeric,
    Measured,
}

/// The two Larmor-clock readings `(τ_y, τ_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LarmorTimes {
    pub tau_y: f64,
    pub tau_z: f64,
    pub provenance: Provenance,
}

impl LarmorTimes {
    pub fn new(tau_y: f64, tau_z: f64, provenance: Provenance) -> Self {
        Self {
            tau_y,
            tau_z,
            provenance,
        }
    }

    pub fn measured(tau_y: f64, tau_z: f64) -> Self {
        Self::new(tau_y, tau_z, Provenance::Measured)
    }
}

/// Barrier opacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Opacity {
    /// `E < V0`: `λ = L·sqrt(2m(V0-E))/ħ`.
    Evanescent(f64),
    /// `E ≥ V0`: the phase `L·sqrt(2m(E-V0))/ħ` accumulated over the barrier.
    Oscillatory(f64),
}

impl Opacity {
    /// `λ²` with the sign of `V0 - E`.
    pub fn signed_square(&self) -> f64 {
        match *self {
            Opacity::Evanescent(l) => l * l,
            Opacity::Oscillatory(l) => -l * l,
        }
    }
}

/// Evaluation branch for the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Pick the branch from the opacity.
    Auto,
    /// Exact expression in the decaying-exponential form (needs `λ ≥ 1`).
    Scaled,
    /// Scaled form with `e^{-2λ}` set to zero (needs `λ ≥ 1`).
    Asymptotic,
}

/// A rectangular barrier of height `height` on `0 ≤ y ≤ width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangularBarrier {
    pub height: f64,
    pub width: f64,
    pub physics: Physics,
}

impl RectangularBarrier {
    pub fn new(height: f64, width: f64) -> Result<Self> {
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::Domain(format!("barrier height must be positive, got {height}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::Domain(format!("barrier width must be positive, got {width}")));
        }
        Ok(Self {
            height,
            width,
            physics: Physics::NATURAL,
        })
    }

    /// The natural-unit barrier of height `height` whose opacity at `energy`
    /// equals `lambda`.
    pub fn with_opacity(height: f64, energy: f64, lambda: f64) -> Result<Self> {
        if !(energy < height && lambda > 0.0) {
            return Err(Error::Domain(format!(
                "need E < V0 and λ > 0, got E={energy}, V0={height}, λ={lambda}"
            )));
        }
        Self::new(height, lambda / Physics::NATURAL.wavenumber(height - energy))
    }

    pub fn with_physics(mut self, physics: Physics) -> Self {
        self.physics = physics;
        self
    }

    pub fn opacity(&self, energy: f64) -> Opacity {
        let l = self.width * self.physics.wavenumber(self.height - energy);
        if energy < self.height {
            Opacity::Evanescent(l)
        } else {
            Opacity::Oscillatory(l)
        }
    }

    /// `τ_c(V0, E)` for this barrier.
    pub fn classical_time(&self, energy: f64) -> Result<f64> {
        traversal_time(self.physics.mass, self.width, self.height, energy)
    }

    /// `τ_c(0, E)`, free flight over the barrier width.
    pub fn free_time(&self, energy: f64) -> Result<f64> {
        traversal_time(self.physics.mass, self.width, 0.0, energy)
    }

    pub fn tau_y(&self, energy: f64) -> Result<f64> {
        Ok(self.larmor_times(energy)?.tau_y)
    }

    pub fn tau_z(&self, energy: f64) -> Result<f64> {
        Ok(self.larmor_times(energy)?.tau_z)
    }

    pub fn larmor_times(&self, energy: f64) -> Result<LarmorTimes> {
        self.larmor_times_with(energy, Form::Auto)
    }

    pub fn larmor_times_with(&self, energy: f64, form: Form) -> Result<LarmorTimes> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::Domain(format!("energy must be positive, got {energy}")));
        }
        let s = self.opacity(energy).signed_square();
        let lambda = s.max(0.0).sqrt();
        let (tau_y, tau_z) = match form {
            Form::Auto if lambda >= ASYMPTOTIC_OPACITY => self.scaled(energy, s, true),
            Form::Auto if lambda >= SCALED_OPACITY => self.scaled(energy, s, false),
            Form::Auto => self.direct(energy, s),
            Form::Scaled | Form::Asymptotic if lambda < SCALED_OPACITY => {
                return Err(Error::Domain(format!(
                    "scaled forms need λ ≥ {SCALED_OPACITY}, got λ² = {s}"
                )))
            }
            Form::Scaled => self.scaled(energy, s, false),
            Form::Asymptotic => self.scaled(energy, s, true),
        };
        Ok(LarmorTimes::new(tau_y, tau_z, Provenance::Analytic))
    }

    fn direct(&self, e: f64, s: f64) -> (f64, f64) {
        let Physics { hbar, mass } = self.physics;
        let (v0, l) = (self.height, self.width);
        let hm = hbar * hbar / (mass * l * l);
        let sh = shc(s);
        let a = shc_double_minus_one_over_s(s);
        let g = chc_minus_shc_over_s(s);
        let denom = 2.0 * e * hm + v0 * v0 * sh * sh;
        let tau_y = l * (2.0 * mass * e).sqrt() * (hm + v0 * a) / denom;
        let tau_z = v0 * sh * (hbar * sh + mass * l * l / hbar * v0 * g) / denom;
        (tau_y, tau_z)
    }

    fn scaled(&self, e: f64, s: f64, asymptotic: bool) -> (f64, f64) {
        let Physics { hbar, mass } = self.physics;
        let (v0, l) = (self.height, self.width);
        let hm = hbar * hbar / (mass * l * l);
        let lambda = s.sqrt();
        let decay = if asymptotic { 0.0 } else { (-2.0 * lambda).exp() };
        let coth = (1.0 + decay) / (1.0 - decay);
        // 1 / S² = λ² / sinh² λ
        let inv_sh2 = 4.0 * s * decay / ((1.0 - decay) * (1.0 - decay));
        let denom = 2.0 * e * hm * inv_sh2 + v0 * v0;
        let tau_y =
            l * (2.0 * mass * e).sqrt() * (hm * inv_sh2 + v0 * (coth / lambda - inv_sh2 / s)) / denom;
        let tau_z = v0 * (hbar + mass * l * l / hbar * v0 * (lambda * coth - 1.0) / s) / denom;
        (tau_y, tau_z)
    }

    /// `λ → ∞` limits of the three tunneling-time candidates.
    pub fn opaque_limits(&self, energy: f64) -> Result<OpaqueLimits> {
        if !(energy > 0.0 && energy < self.height) {
            return Err(Error::Domain(format!(
                "opaque limits need 0 < E < V0, got E={energy}, V0={}",
                self.height
            )));
        }
        let hbar = self.physics.hbar;
        let tc = self.classical_time(energy)?;
        let tc0 = self.free_time(energy)?;
        let att_s = hbar / self.height * tc / tc0;
        Ok(OpaqueLimits {
            att_b: att_s.hypot(tc),
            att_s,
            att_f: att_s + self.height * tc * tc0 / hbar,
        })
    }

    /// The limiting values of `(τ_y, τ_z, ATT_B, ATT_S, ATT_F)` in one of the
    /// four regimes, evaluated with this barrier's `(V0, L, ħ, m)`.
    pub fn regime_limits(&self, regime: Regime, energy: f64) -> Result<RegimeRow> {
        use Extended::{Finite, Infinite};
        let row = match regime {
            Regime::LowBarrier => {
                let t = Finite(self.free_time(energy)?);
                RegimeRow::new(t, Extended::ZERO, t, t, t)
            }
            Regime::HighBarrier => {
                let t = Finite(self.classical_time(0.0)?);
                RegimeRow::new(Extended::ZERO, t, t, Extended::ZERO, Infinite)
            }
            Regime::ThickBarrier => {
                let t = Finite(self.opaque_limits(energy)?.att_s);
                RegimeRow::new(t, Infinite, Infinite, t, Infinite)
            }
            Regime::Classical => {
                let t = Finite(self.classical_time(energy)?);
                RegimeRow::new(Extended::ZERO, t, t, Extended::ZERO, Infinite)
            }
        };
        Ok(row)
    }
}

/// Large-opacity limits of the tunneling-time candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpaqueLimits {
    pub att_b: f64,
    pub att_s: f64,
    pub att_f: f64,
}

/// The four classic limiting regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `V0 ≪ E` at fixed `E`.
    LowBarrier,
    /// `E ≪ V0` at fixed `V0`.
    HighBarrier,
    /// `L² ≫ (ħ/m)·τ_c(V0, E)` at fixed `V0, E`.
    ThickBarrier,
    /// `ħ → 0` at fixed `V0, E, L`.
    Classical,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::LowBarrier,
        Regime::HighBarrier,
        Regime::ThickBarrier,
        Regime::Classical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Regime::LowBarrier => "low",
            Regime::HighBarrier => "high",
            Regime::ThickBarrier => "thick",
            Regime::Classical => "classical",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" | "low-barrier" => Ok(Regime::LowBarrier),
            "high" | "high-barrier" => Ok(Regime::HighBarrier),
            "thick" | "thick-barrier" => Ok(Regime::ThickBarrier),
            "classical" => Ok(Regime::Classical),
            other => Err(Error::InvalidConfig(format!("unknown regime '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeRow {
    pub tau_y: Extended,
    pub tau_z: Extended,
    pub att_b: Extended,
    pub att_s: Extended,
    pub att_f: Extended,
}

impl RegimeRow {
    fn new(tau_y: Extended, tau_z: Extended, att_b: Extended, att_s: Extended, att_f: Extended) -> Self {
        Self {
            tau_y,
            tau_z,
            att_b,
            att_s,
            att_f,
        }
    }
}

/// Table of regime limits for a barrier, see [`RectangularBarrier::regime_limits`].
pub fn table1_regime(regime: Regime, barrier: &RectangularBarrier, energy: f64) -> Result<RegimeRow> {
    barrier.regime_limits(regime, energy)
}
