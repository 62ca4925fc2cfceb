//! Stationary transmission through a profile by compounding 2×2 propagators
//! of `(ψ, ψ')`.
//!
//! On each grid cell `ψ'' = Q(y)ψ` with `Q = 2m(V − E)/ħ²` is advanced by the
//! fourth-order Magnus step
//!
//! ```text
//! Ω = h/2·(A₁ + A₂) + √3/12·h²·[A₂, A₁],   A = [[0, 1], [Q, 0]]
//! ```
//!
//! with `A₁, A₂` at the two Gauss–Legendre nodes. `Ω` is traceless, so
//! `exp Ω = cosh μ·I + (sinh μ/μ)·Ω` with `μ² = −det Ω`, which keeps
//! `det = 1` (flux conservation) exactly and is exact for constant `Q`.
//! Large `μ` is factored out into a log accumulator, and the running product
//! is renormalised by powers of two so opaque barriers never overflow.

use std::f64::consts::{FRAC_PI_2, LN_2};

use num_complex::Complex64;

use super::profile::PotentialProfile;
use crate::special::scaled_chc_shc;
use crate::{Error, Result};

/// `μ` above which a cell propagator is returned with `e^μ` factored out.
const CELL_SCALE_THRESHOLD: f64 = 30.0;
/// Renormalise the running product once an entry leaves `[2^-R, 2^R]`.
const RENORM_EXPONENT: i32 = 256;

type Mat2 = [[f64; 2]; 2];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Result of one stationary scattering calculation.
///
/// The transmission amplitude refers to `ψ = t·e^{ik(y−b)}` beyond the window
/// end `b` for unit incidence `e^{ik(y−a)}` at the window start `a`, so free
/// propagation over a window of length `ℓ` gives `t = e^{ikℓ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    /// `ln|t|`.
    pub log_abs: f64,
    /// `arg t` in `(-π, π]`.
    pub phase: f64,
    /// Reflection amplitude `r`.
    pub reflection: Complex64,
    pub energy: f64,
    pub spin_shift: f64,
}

impl Transmission {
    /// `t`; underflows to zero for extremely opaque barriers, use
    /// [`Self::log_abs`] there.
    pub fn amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.log_abs.exp(), self.phase)
    }

    pub fn probability(&self) -> f64 {
        (2.0 * self.log_abs).exp()
    }

    pub fn reflectance(&self) -> f64 {
        self.reflection.norm_sqr()
    }

    /// `|t|² + |r|² − 1`.
    pub fn flux_defect(&self) -> f64 {
        self.probability() + self.reflectance() - 1.0
    }
}

/// Transmission through `profile` at energy `energy`, with the potential
/// raised by `spin_shift` inside the field region.
pub fn transmission(profile: &PotentialProfile, energy: f64, spin_shift: f64) -> Result<Transmission> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::Domain(format!("scattering energy must be positive, got {energy}")));
    }
    let phys = profile.physics;
    let coupling = 2.0 * phys.mass / (phys.hbar * phys.hbar);
    let q = |y: f64, shifted: bool| {
        let v = profile.potential(y) + if shifted { spin_shift } else { 0.0 };
        coupling * (v - energy)
    };
    let gauss = 0.5 / 3f64.sqrt();
    let commutator = 3f64.sqrt() / 12.0;

    let mut m: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut log_scale = 0.0f64;
    let mut binary_scale = 0i64;

    let nodes = profile.nodes();
    for (index, cell) in nodes.windows(2).enumerate() {
        let (y0, y1) = (cell[0], cell[1]);
        let h = y1 - y0;
        let mid = 0.5 * (y0 + y1);
        let shifted = profile.in_field(mid);
        let q1 = q(mid - gauss * h, shifted);
        let q2 = q(mid + gauss * h, shifted);
        let c = commutator * h * h * (q1 - q2);
        let lower = 0.5 * h * (q1 + q2);
        let mu2 = c * c + h * lower;
        let (scale, ch, sh) = scaled_chc_shc(mu2, CELL_SCALE_THRESHOLD);
        let cell_prop: Mat2 = [[ch + sh * c, sh * h], [sh * lower, ch - sh * c]];
        m = mul(&cell_prop, &m);
        log_scale += scale;

        let big = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if !big.is_finite() || big == 0.0 {
            return Err(Error::NumericalInstability {
                segment: index,
                detail: format!("propagator entry {big} at y = {y1}"),
            });
        }
        let e = big.log2().floor() as i32;
        if e.abs() > RENORM_EXPONENT {
            let f = 2f64.powi(-e);
            m.iter_mut().flatten().for_each(|x| *x *= f);
            binary_scale += e as i64;
        }
    }

    let k = phys.wavenumber(energy);
    let [[a, b], [c, d]] = m;
    let denom = Complex64::new(k * k * b - c, k * (a + d));
    let numer_r = Complex64::new(c + k * k * b, k * (d - a));
    let log_abs = (2.0 * k).ln() - denom.norm().ln() - log_scale - binary_scale as f64 * LN_2;
    let phase = wrap(FRAC_PI_2 - denom.arg());
    let reflection = numer_r / denom;
    if !(log_abs.is_finite() && phase.is_finite() && reflection.re.is_finite() && reflection.im.is_finite()) {
        return Err(Error::NumericalInstability {
            segment: nodes.len().saturating_sub(2),
            detail: "non-finite amplitude after matching".into(),
        });
    }
    Ok(Transmission {
        log_abs,
        phase,
        reflection,
        energy,
        spin_shift,
    })
}

fn wrap(phi: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}
