use serde::{Deserialize, Serialize};

/// Absolute tolerance scaled by data magnitude: `base * max(1, magnitude)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub base: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { base: 1e-9 }
    }
}

impl Tolerance {
    pub const fn new(base: f64) -> Self {
        Tolerance { base }
    }

    pub fn scaled(&self, magnitude: f64) -> f64 {
        self.base * magnitude.max(1.0)
    }

    /// The same tolerance tightened by `factor`.
    pub fn tighter(&self, factor: f64) -> Self {
        Tolerance {
            base: self.base / factor,
        }
    }
}
