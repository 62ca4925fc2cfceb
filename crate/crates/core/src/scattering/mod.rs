//! Spin-1/2 stationary scattering through an arbitrary 1D barrier.
//!
//! A uniform field along `z` inside the field region splits the potential into
//! `V(y) ∓ ħω_L/2` for the two spin projections. The transmitted spinor
//! `(t₊, t₋)` of an `x`-polarised incident beam yields the Larmor readings.

mod larmor;
mod profile;
mod transfer;

pub use larmor::{
    larmor_extraction, larmor_times_numeric, spin_moments, spin_pair, LarmorExtraction,
    RawEstimate, SpinBranch, WeakFieldConfig, CONVERGENCE_TOLERANCE, FEEBLE_LIMIT,
};
pub use profile::{
    PotentialProfile, Shape, DEFAULT_SEGMENTS, DEFAULT_SUPPORT, MIN_GAUSSIAN_SEGMENTS,
};
pub use transfer::{transmission, Transmission};
