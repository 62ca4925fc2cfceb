//! Spin moments of the transmitted ensemble and the tunneling-time candidates.
//!
//! Spin expectations are stored in units of `ħ/2` and variances in units of
//! `(ħ/2)²`, so a pure spinor has `⟨S_i²⟩ = 1` and `var_i = 1 − s_i²`.
//!
//! The incident state is polarised along `+x`. Once the precession sign is
//! fixed so that `τ_y` is positive for a free field region, the transmitted
//! moments read `s_y = ω_L·τ_y` and `s_z = ω_L·τ_z` to first order in `ω_L`.

use num_complex::Complex64;

use crate::analytic::LarmorTimes;
use crate::{Error, Extended, Result};

/// Slack on the Bloch-vector bound `|s| ≤ 1`.
const BLOCH_SLACK: f64 = 1e-12;
/// Absolute slack on the uncertainty product.
pub const UNCERTAINTY_SLACK: f64 = 1e-12;

/// First and second moments of the transmitted spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub var_x: f64,
    pub var_y: f64,
    /// Larmor angular frequency the moments were produced at.
    pub omega_l: f64,
}

impl SpinMoments {
    /// Checked constructor: finite entries, `|s|² ≤ 1`, non-negative variances.
    pub fn new(sx: f64, sy: f64, sz: f64, var_x: f64, var_y: f64, omega_l: f64) -> Result<Self> {
        let all = [sx, sy, sz, var_x, var_y, omega_l];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite spin moments {all:?}")));
        }
        let norm2 = sx * sx + sy * sy + sz * sz;
        if norm2 > 1.0 + BLOCH_SLACK {
            return Err(Error::Domain(format!("Bloch vector length² {norm2} exceeds 1")));
        }
        if var_x < -BLOCH_SLACK || var_y < -BLOCH_SLACK {
            return Err(Error::Domain(format!("negative variance ({var_x}, {var_y})")));
        }
        Ok(Self {
            sx,
            sy,
            sz,
            var_x,
            var_y,
            omega_l,
        })
    }

    /// Moments of the normalised transmitted spinor `(t₊, t₋)`.
    ///
    /// `t₊` is the branch whose potential is lowered by `ħω_L/2`. The sign of
    /// `s_y` is `2·Im(t₊·conj(t₋))/N`, which makes free precession positive.
    pub fn from_amplitudes(t_plus: Complex64, t_minus: Complex64, omega_l: f64) -> Result<Self> {
        let scale = t_plus.norm().max(t_minus.norm());
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::DegenerateTransmission);
        }
        let (p, m) = (t_plus / scale, t_minus / scale);
        let n = p.norm_sqr() + m.norm_sqr();
        let cross = p * m.conj();
        let sx = 2.0 * cross.re / n;
        let sy = 2.0 * cross.im / n;
        let sz = (p.norm_sqr() - m.norm_sqr()) / n;
        Ok(Self::pure(sx, sy, sz, omega_l))
    }

    /// Same as [`Self::from_amplitudes`] with each amplitude given as
    /// `(ln|t|, arg t)`, which survives arbitrarily opaque barriers.
    pub fn from_log_amplitudes(
        (log_plus, phase_plus): (f64, f64),
        (log_minus, phase_minus): (f64, f64),
        omega_l: f64,
    ) -> Result<Self> {
        let d = log_plus - log_minus;
        if !d.is_finite() {
            return Err(Error::DegenerateTransmission);
        }
        let dphi = wrap_phase(phase_plus - phase_minus);
        let sech = 1.0 / d.cosh();
        Ok(Self::pure(sech * dphi.cos(), sech * dphi.sin(), d.tanh(), omega_l))
    }

    /// Pure-state moments; `1 − s_x² = s_y² + s_z²` avoids cancellation for
    /// the nearly-`x`-polarised states of the feeble-field regime.
    fn pure(sx: f64, sy: f64, sz: f64, omega_l: f64) -> Self {
        Self {
            sx,
            sy,
            sz,
            var_x: sy * sy + sz * sz,
            var_y: sx * sx + sz * sz,
            omega_l,
        }
    }

    /// Moments truncated at second order in `ω_L`:
    /// `s = (1, ω_L τ_y, ω_L τ_z)`, `var_x = ω_L²(τ_y² + τ_z²)`, `var_y = 1 − ω_L²τ_y²`.
    ///
    /// The truncation overshoots the Bloch bound at `O(ω_L²)`, so this
    /// constructor is exempt from that check.
    pub fn weak_field(times: &LarmorTimes, omega_l: f64) -> Self {
        let (var_x, var_y) = variances_weak_field(times, omega_l);
        Self {
            sx: 1.0,
            sy: omega_l * times.tau_y,
            sz: omega_l * times.tau_z,
            var_x,
            var_y,
            omega_l,
        }
    }

    /// The raw Larmor readings `(s_y/ω_L, s_z/ω_L)` at this field strength.
    pub fn precession_times(&self) -> Result<(f64, f64)> {
        if !(self.omega_l > 0.0) {
            return Err(Error::DegenerateMoments(format!(
                "need ω_L > 0, got {}",
                self.omega_l
            )));
        }
        Ok((self.sy / self.omega_l, self.sz / self.omega_l))
    }

    pub fn uncertainty_check(&self) -> UncertaintyCheck {
        uncertainty_check(self)
    }

    pub fn fano(&self, component: Component) -> Result<FanoFactor> {
        match component {
            Component::X => fano(self.var_x, self.sx, component),
            Component::Y => fano(self.var_y, self.sy, component),
        }
    }
}

/// Wraps a phase difference into `(-π, π]`.
fn wrap_phase(phi: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Weak-field variances `(var_x, var_y)` in units of `(ħ/2)²`.
pub fn variances_weak_field(times: &LarmorTimes, omega_l: f64) -> (f64, f64) {
    let w2 = omega_l * omega_l;
    (
        w2 * (times.tau_y * times.tau_y + times.tau_z * times.tau_z),
        1.0 - w2 * times.tau_y * times.tau_y,
    )
}

/// Both sides of `(ΔS_x)²(ΔS_y)² ≥ (ħ²/4)⟨S_z⟩²` in units of `(ħ/2)⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

pub fn uncertainty_check(m: &SpinMoments) -> UncertaintyCheck {
    let lhs = m.var_x * m.var_y;
    let rhs = m.sz * m.sz;
    UncertaintyCheck {
        lhs,
        rhs,
        satisfied: lhs >= rhs - UNCERTAINTY_SLACK,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    X,
    Y,
}

/// Variance-to-mean ratio of a spin component, in units of `ħ/2`.
///
/// Poisson-distributed spins give exactly 1 in these units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoFactor {
    pub value: f64,
    pub component: Component,
}

pub fn fano(variance: f64, mean: f64, component: Component) -> Result<FanoFactor> {
    if mean == 0.0 || !mean.is_finite() {
        return Err(Error::Domain(format!("Fano factor needs a nonzero mean, got {mean}")));
    }
    Ok(FanoFactor {
        value: variance / mean,
        component,
    })
}

/// Quadrature sum `sqrt(τ_y² + τ_z²)`.
pub fn att_b(times: &LarmorTimes) -> f64 {
    times.tau_y.hypot(times.tau_z)
}

/// The in-plane precession time `τ_y`.
pub fn att_s(times: &LarmorTimes) -> f64 {
    times.tau_y
}

/// Fluctuation-induced time `τ_y + τ_z²/τ_y`, with a tagged infinity at
/// `τ_y = 0 ≠ τ_z`.
pub fn att_f_closed(times: &LarmorTimes) -> Result<Extended> {
    let (ty, tz) = (times.tau_y, times.tau_z);
    if ty < 0.0 || ty.is_nan() {
        return Err(Error::Domain(format!(
            "τ_y must be non-negative for the fluctuation time, got {ty}"
        )));
    }
    if ty == 0.0 {
        return Ok(if tz == 0.0 { Extended::ZERO } else { Extended::Infinite });
    }
    Ok(Extended::Finite(ty + tz * tz / ty))
}

/// The fluctuation time as the product of normalised Fano factors over `ω_L`:
/// `ω_L⁻¹ · [var_x / s_x] · [var_y / s_y]` (the `ħ/2` normalisations cancel
/// in these units).
pub fn att_f_from_moments(m: &SpinMoments) -> Result<f64> {
    if !(m.omega_l > 0.0) {
        return Err(Error::DegenerateMoments(format!("need ω_L > 0, got {}", m.omega_l)));
    }
    if !(m.sy > 0.0) {
        return Err(Error::DegenerateMoments(format!(
            "no precession signal: ⟨S_y⟩ = {} ≤ 0",
            m.sy
        )));
    }
    if !(m.sx > 0.0) {
        return Err(Error::DegenerateMoments(format!("⟨S_x⟩ = {} ≤ 0", m.sx)));
    }
    Ok((m.var_x / m.sx) * (m.var_y / m.sy) / m.omega_l)
}

/// The three candidates side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttTriple {
    pub att_b: Extended,
    pub att_s: Extended,
    pub att_f: Extended,
}

impl AttTriple {
    pub fn from_times(times: &LarmorTimes) -> Result<Self> {
        Ok(Self {
            att_b: Extended::Finite(att_b(times)),
            att_s: Extended::Finite(att_s(times)),
            att_f: att_f_closed(times)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Provenance;
    use proptest::prelude::*;

    const TY: f64 = 0.964_027_580_075_816_9;
    const TZ: f64 = 1.928_055_160_151_633_8;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn lt(ty: f64, tz: f64) -> LarmorTimes {
        LarmorTimes::new(ty, tz, Provenance::Analytic)
    }

    #[test]
    fn candidate_values() {
        let t = lt(TY, TZ);
        // sqrt(TY² + TZ²) and TY + TZ²/TY from the 40-digit reference
        assert!(rel(att_b(&t), 2.155_631_201_234_148_4) < 1e-14);
        assert_eq!(att_s(&t), TY);
        assert!(rel(att_f_closed(&t).unwrap().value(), 4.820_137_900_379_084) < 1e-14);
        assert_eq!(att_b(&lt(3.0, 4.0)), 5.0);
        assert_eq!(att_b(&lt(0.7, 0.0)), 0.7);
        assert_eq!(att_f_closed(&lt(0.7, 0.0)).unwrap(), Extended::Finite(0.7));
        assert_eq!(att_s(&lt(0.0, 2.0)), 0.0);
        assert_eq!(att_f_closed(&lt(0.0, 2.0)).unwrap(), Extended::Infinite);
        assert_eq!(att_f_closed(&lt(0.0, 0.0)).unwrap(), Extended::ZERO);
        assert!(att_f_closed(&lt(-1e-3, 2.0)).is_err());
    }

    #[test]
    fn weak_field_variances() {
        assert_eq!(variances_weak_field(&lt(0.0, 0.0), 1e-3), (0.0, 1.0));
        assert_eq!(variances_weak_field(&lt(TY, TZ), 0.0), (0.0, 1.0));
        let (vx, vy) = variances_weak_field(&lt(TY, TZ), 1e-3);
        // 1e-6 · (0.929349 + 3.717397)
        assert!(rel(vx, 4.646_746e-6) < 1e-6);
        assert!(rel(vy, 1.0 - 1e-6 * TY * TY) < 1e-15);
    }

    #[test]
    fn amplitudes_to_moments() {
        let t = Complex64::new(0.3, -0.2);
        let m = SpinMoments::from_amplitudes(t, t, 0.0).unwrap();
        assert!((m.sx - 1.0).abs() < 1e-15 && m.sy.abs() < 1e-15 && m.sz.abs() < 1e-15);
        let m = SpinMoments::from_amplitudes(t, Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert_eq!((m.sx, m.sy, m.sz), (0.0, 0.0, 1.0));
        assert_eq!(m.var_x, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(SpinMoments::from_amplitudes(zero, zero, 1.0), Err(Error::DegenerateTransmission));
        // free precession by a positive angle: t₊ leads t₋ in phase
        let a = 1e-3;
        let m = SpinMoments::from_amplitudes(Complex64::from_polar(1.0, a), Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert!(rel(m.sy, a.sin()) < 1e-12);
    }

    #[test]
    fn log_and_linear_routes_agree() {
        let tp = Complex64::from_polar(0.2, 1.1);
        let tm = Complex64::from_polar(0.17, 0.4);
        let a = SpinMoments::from_amplitudes(tp, tm, 0.5).unwrap();
        let b = SpinMoments::from_log_amplitudes((0.2f64.ln(), 1.1), (0.17f64.ln(), 0.4 + std::f64::consts::TAU), 0.5).unwrap();
        for (x, y) in [(a.sx, b.sx), (a.sy, b.sy), (a.sz, b.sz), (a.var_x, b.var_x), (a.var_y, b.var_y)] {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn moment_route_matches_closed_form() {
        let t = lt(TY, TZ);
        let closed = att_f_closed(&t).unwrap().value();
        let from = att_f_from_moments(&SpinMoments::weak_field(&t, 1e-4)).unwrap();
        // differs by closed·ω²τ_y²
        assert!(rel(from, closed) < 1e-8 * 1.01);
        assert!(rel(closed - from, closed * 1e-8 * TY * TY) < 1e-6);
        // τ_z = 0: τ_y(1 − ω²τ_y²)
        let t0 = lt(TY, 0.0);
        let got = att_f_from_moments(&SpinMoments::weak_field(&t0, 1e-2)).unwrap();
        assert!(rel(got, TY * (1.0 - 1e-4 * TY * TY)) < 1e-14);
        // O(ω²) scaling over one octave
        let d1 = closed - att_f_from_moments(&SpinMoments::weak_field(&t, 2e-3)).unwrap();
        let d2 = closed - att_f_from_moments(&SpinMoments::weak_field(&t, 1e-3)).unwrap();
        assert!(rel(d1 / d2, 4.0) < 1e-6);
    }

    #[test]
    fn from_moments_errors() {
        let m = SpinMoments::weak_field(&lt(0.0, 1.0), 1e-3);
        assert!(matches!(att_f_from_moments(&m), Err(Error::DegenerateMoments(_))));
        let m = SpinMoments::weak_field(&lt(1.0, 1.0), 0.0);
        assert!(att_f_from_moments(&m).is_err());
    }

    #[test]
    fn fano_factors() {
        let poisson = fano(0.8, 0.8, Component::X).unwrap();
        assert_eq!(poisson.value, 1.0);
        assert_eq!(fano(0.0, 0.3, Component::Y).unwrap().value, 0.0);
        assert!(fano(0.3, 0.0, Component::X).is_err());
        let w = 1e-3;
        let m = SpinMoments::weak_field(&lt(TY, TZ), w);
        let f = m.fano(Component::X).unwrap();
        assert!(rel(f.value, w * w * (TY * TY + TZ * TZ)) < 1e-15);
    }

    #[test]
    fn uncertainty_examples() {
        let incident = SpinMoments::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        let c = incident.uncertainty_check();
        assert_eq!((c.lhs, c.rhs, c.satisfied), (0.0, 0.0, true));
        let c = SpinMoments::weak_field(&lt(TY, TZ), 1e-3).uncertainty_check();
        assert!(c.satisfied && c.lhs > c.rhs);
        assert!(SpinMoments::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn wraps_phase() {
        use std::f64::consts::PI;
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-0.1) + 0.1).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn ordering_and_identity(ty in 1e-6f64..1e3, tz in -1e3f64..1e3) {
            let t = lt(ty, tz);
            let f = att_f_closed(&t).unwrap().value();
            let b = att_b(&t);
            let s = att_s(&t);
            prop_assert!(f >= b * (1.0 - 1e-15) && b >= s && s >= 0.0);
            prop_assert!(rel(f * s, b * b) < 1e-14);
        }

        #[test]
        fn low_barrier_degeneracy(ty in 1e-3f64..1e3, ratio in 0f64..1e-7) {
            let t = lt(ty, ratio * ty);
            let triple = AttTriple::from_times(&t).unwrap();
            for v in [triple.att_b, triple.att_s, triple.att_f] {
                prop_assert!(rel(v.value(), ty) < 1e-12);
            }
        }

        #[test]
        fn pure_spinors_respect_bounds(
            a in 1e-6f64..10.0, pa in -10f64..10.0, b in 1e-6f64..10.0, pb in -10f64..10.0
        ) {
            let m = SpinMoments::from_amplitudes(Complex64::from_polar(a, pa), Complex64::from_polar(b, pb), 1.0).unwrap();
            let n2 = m.sx * m.sx + m.sy * m.sy + m.sz * m.sz;
            prop_assert!(n2 <= 1.0 + 1e-12);
            prop_assert!(SpinMoments::new(m.sx, m.sy, m.sz, m.var_x, m.var_y, 1.0).is_ok());
            prop_assert!(m.uncertainty_check().satisfied);
        }
    }
}
