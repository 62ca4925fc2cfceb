use std::fmt;

/// A non-negative time on the extended real line.
///
/// Divergent limits are carried as [`Extended::Infinite`] rather than as an
/// `f64` overflow so callers can tell a physical divergence from a numerical one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub const ZERO: Extended = Extended::Finite(0.0);

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// The value as an `f64`, with `+∞` for the tagged infinity.
    pub fn value(&self) -> f64 {
        match *self {
            Extended::Finite(v) => v,
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Extended {
        match self {
            Extended::Finite(v) => Extended::Finite(f(v)),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl From<f64> for Extended {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Extended::Infinite
        } else {
            Extended::Finite(v)
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => fmt::Display::fmt(v, f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}
