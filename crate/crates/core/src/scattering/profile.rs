use crate::analytic::RectangularBarrier;
use crate::units::Physics;
use crate::{Error, Result};

/// Default segment count for smooth profiles.
pub const DEFAULT_SEGMENTS: usize = 2000;
/// Default half-width of the Gaussian support, in units of σ.
pub const DEFAULT_SUPPORT: f64 = 5.0;
/// Coarsest grid accepted for a Gaussian profile.
pub const MIN_GAUSSIAN_SEGMENTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Constant `height` on `[0, width]`.
    Rectangular { height: f64, width: f64 },
    /// `peak·exp(-(y - center)²/(2σ²))`.
    Gaussian { peak: f64, sigma: f64, center: f64 },
    /// Linear interpolation through `(y_i, v_i)`.
    Tabulated { y: Vec<f64>, v: Vec<f64> },
}

/// A one-dimensional potential with compact support, the interval carrying
/// the magnetic field, and the grid used to integrate across it.
///
/// The potential vanishes outside `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    pub shape: Shape,
    pub window: (f64, f64),
    pub field_region: (f64, f64),
    pub segments: usize,
    pub physics: Physics,
}

impl PotentialProfile {
    /// A rectangular barrier integrated in one exact step.
    pub fn rectangular(height: f64, width: f64) -> Result<Self> {
        if !(height >= 0.0 && height.is_finite() && width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rectangular profile needs height ≥ 0 and width > 0, got ({height}, {width})"
            )));
        }
        Ok(Self {
            shape: Shape::Rectangular { height, width },
            window: (0.0, width),
            field_region: (0.0, width),
            segments: 1,
            physics: Physics::NATURAL,
        })
    }

    /// Field-only region of length `length` with no potential.
    pub fn free(length: f64) -> Result<Self> {
        Self::rectangular(0.0, length)
    }

    pub fn from_barrier(barrier: &RectangularBarrier) -> Self {
        Self {
            shape: Shape::Rectangular {
                height: barrier.height,
                width: barrier.width,
            },
            window: (0.0, barrier.width),
            field_region: (0.0, barrier.width),
            segments: 1,
            physics: barrier.physics,
        }
    }

    /// Gaussian centred at 0, truncated at `±support·σ`.
    pub fn gaussian(peak: f64, sigma: f64, support: f64, segments: usize) -> Result<Self> {
        if !(peak > 0.0 && sigma > 0.0 && support > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gaussian profile needs positive peak, width and support, got ({peak}, {sigma}, {support})"
            )));
        }
        if segments < MIN_GAUSSIAN_SEGMENTS {
            return Err(Error::InvalidConfig(format!(
                "gaussian grid of {segments} segments is too coarse (minimum {MIN_GAUSSIAN_SEGMENTS})"
            )));
        }
        let half = support * sigma;
        Ok(Self {
            shape: Shape::Gaussian {
                peak,
                sigma,
                center: 0.0,
            },
            window: (-half, half),
            field_region: (-half, half),
            segments,
            physics: Physics::NATURAL,
        })
    }

    /// Piecewise-linear potential through the given samples; `y` must be
    /// strictly increasing.
    pub fn tabulated(y: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if y.len() != v.len() || y.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "tabulated profile needs ≥ 2 matching samples, got {} y and {} V",
                y.len(),
                v.len()
            )));
        }
        if let Some(i) = y.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidConfig(format!(
                "tabulated y must be strictly increasing (violated at sample {})",
                i + 1
            )));
        }
        if y.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("tabulated profile has non-finite samples".into()));
        }
        let window = (y[0], y[y.len() - 1]);
        let segments = y.len() - 1;
        Ok(Self {
            shape: Shape::Tabulated { y, v },
            window,
            field_region: window,
            segments,
            physics: Physics::NATURAL,
        })
    }

    pub fn with_field_region(mut self, start: f64, end: f64) -> Result<Self> {
        if !(start < end && start >= self.window.0 && end <= self.window.1) {
            return Err(Error::InvalidConfig(format!(
                "field region [{start}, {end}] must be a nonempty subset of the window [{}, {}]",
                self.window.0, self.window.1
            )));
        }
        self.field_region = (start, end);
        Ok(self)
    }

    pub fn with_segments(mut self, segments: usize) -> Result<Self> {
        if segments == 0 {
            return Err(Error::InvalidConfig("segment count must be at least 1".into()));
        }
        if matches!(self.shape, Shape::Gaussian { .. }) && segments < MIN_GAUSSIAN_SEGMENTS {
            return Err(Error::InvalidConfig(format!(
                "gaussian grid of {segments} segments is too coarse (minimum {MIN_GAUSSIAN_SEGMENTS})"
            )));
        }
        self.segments = segments;
        Ok(self)
    }

    pub fn with_physics(mut self, physics: Physics) -> Self {
        self.physics = physics;
        self
    }

    /// The potential without any spin splitting.
    pub fn potential(&self, y: f64) -> f64 {
        if y < self.window.0 || y > self.window.1 {
            return 0.0;
        }
        match &self.shape {
            Shape::Rectangular { height, .. } => *height,
            Shape::Gaussian { peak, sigma, center } => {
                let u = (y - center) / sigma;
                peak * (-0.5 * u * u).exp()
            }
            Shape::Tabulated { y: ys, v } => {
                let i = ys.partition_point(|&node| node <= y).clamp(1, ys.len() - 1);
                let (y0, y1) = (ys[i - 1], ys[i]);
                let f = (y - y0) / (y1 - y0);
                v[i - 1] + f * (v[i] - v[i - 1])
            }
        }
    }

    pub fn in_field(&self, y: f64) -> bool {
        y >= self.field_region.0 && y <= self.field_region.1
    }

    /// Grid nodes: every point where the integrand may be non-smooth, with
    /// each gap subdivided so the total is close to `segments`.
    pub fn nodes(&self) -> Vec<f64> {
        let mut fixed = vec![self.window.0, self.window.1, self.field_region.0, self.field_region.1];
        if let Shape::Tabulated { y, .. } = &self.shape {
            fixed.extend_from_slice(y);
        }
        fixed.sort_by(f64::total_cmp);
        fixed.dedup();
        let span = self.window.1 - self.window.0;
        let mut nodes = vec![fixed[0]];
        for w in fixed.windows(2) {
            let len = w[1] - w[0];
            let pieces = ((self.segments as f64 * len / span).round() as usize).max(1);
            let h = len / pieces as f64;
            nodes.extend((1..pieces).map(|j| w[0] + j as f64 * h));
            nodes.push(w[1]);
        }
        nodes
    }
}
