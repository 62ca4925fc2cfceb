//! Larmor-clock tunneling times.
//!
//! The crate is organised around four layers:
//!
//! - [`units`]: CODATA constants, the ⁸⁷Rb preset and the conversion between
//!   laboratory SI quantities and the dimensionless system `ħ = m = V0 = 1`.
//! - [`analytic`]: closed-form precession times `τ_y`, `τ_z` for a rectangular
//!   barrier, valid through `E = V0` and into the above-barrier regime, plus
//!   the opaque-barrier asymptotics and the four limiting regimes.
//! - [`scattering`]: a spin-1/2 stationary scattering solver for arbitrary
//!   piecewise-smooth barriers that extracts the same two times from the
//!   spin-split transmission amplitudes.
//! - [`att`]: spin moments, variances, Fano factors, the uncertainty product
//!   and the three tunneling-time candidates built from `(τ_y, τ_z)`.
//!
//! ```
//! use larmor::analytic::RectangularBarrier;
//! use larmor::att::AttTriple;
//!
//! let barrier = RectangularBarrier::with_opacity(1.0, 0.5, 2.0).unwrap();
//! let times = barrier.larmor_times(0.5).unwrap();
//! let att = AttTriple::from_times(&times).unwrap();
//! assert!((times.tau_y - 0.964_027_580_075_817).abs() < 1e-12);
//! assert!(att.att_f.value() > att.att_b.value());
//! ```

pub mod analytic;
pub mod att;
mod error;
pub mod extended;
pub mod richardson;
pub mod scattering;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use extended::Extended;
