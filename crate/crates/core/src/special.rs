//! Entire functions of the signed square `s = ±λ²`.
//!
//! Writing `cosh λ` and `sinh λ / λ` as power series in `s = λ²` gives one
//! real-analytic expression that covers the evanescent branch (`s > 0`), the
//! oscillatory branch (`s < 0`, where `λ = i|λ|`) and the turning point
//! `s = 0` without a removable singularity.

/// Below this `|s|` the power series are summed directly.
const SERIES_RADIUS: f64 = 1.0;
const SERIES_TERMS: usize = 24;

/// `cosh √s` (equals `cos √-s` for `s < 0`).
pub fn chc(s: f64) -> f64 {
    if s.abs() < SERIES_RADIUS {
        series(s, |n| 1.0 / factorial(2 * n))
    } else if s > 0.0 {
        s.sqrt().cosh()
    } else {
        (-s).sqrt().cos()
    }
}

/// `sinh √s / √s` (equals `sin √-s / √-s` for `s < 0`, 1 at `s = 0`).
pub fn shc(s: f64) -> f64 {
    if s.abs() < SERIES_RADIUS {
        series(s, |n| 1.0 / factorial(2 * n + 1))
    } else if s > 0.0 {
        let l = s.sqrt();
        l.sinh() / l
    } else {
        let l = (-s).sqrt();
        l.sin() / l
    }
}

/// `(chc(s) - shc(s)) / s`, with value 1/3 at the origin.
pub fn chc_minus_shc_over_s(s: f64) -> f64 {
    if s.abs() < SERIES_RADIUS {
        // cosh λ - sinh λ/λ = Σ_{n≥1} 2n s^n / (2n+1)!
        series(s, |n| 2.0 * (n + 1) as f64 / factorial(2 * n + 3))
    } else {
        (chc(s) - shc(s)) / s
    }
}

/// `(shc(4s) - 1) / s = (sinh 2λ / 2λ - 1) / λ²`, with value 2/3 at the origin.
pub fn shc_double_minus_one_over_s(s: f64) -> f64 {
    if s.abs() < SERIES_RADIUS {
        series(s, |n| 4f64.powi(n as i32 + 1) / factorial(2 * n + 3))
    } else {
        (shc(4.0 * s) - 1.0) / s
    }
}

/// `cosh √s` and `sinh √s / √s` with a common factor `e^{scale}` removed.
///
/// Returns `(scale, chc·e^{-scale}, shc·e^{-scale})`. The scale is nonzero only
/// when `√s` exceeds `threshold`, so callers can keep a separate logarithmic
/// accumulator instead of overflowing near `√s ≈ 710`.
pub fn scaled_chc_shc(s: f64, threshold: f64) -> (f64, f64, f64) {
    if s > threshold * threshold {
        let l = s.sqrt();
        let decay = (-2.0 * l).exp();
        (l, 0.5 * (1.0 + decay), 0.5 * (1.0 - decay) / l)
    } else {
        (0.0, chc(s), shc(s))
    }
}

fn series(s: f64, coeff: impl Fn(usize) -> f64) -> f64 {
    // Horner from the tail.
    (0..SERIES_TERMS).rev().fold(0.0, |acc, n| acc * s + coeff(n))
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
