use serde::{Deserialize, Serialize};

/// Monotone transition `[0, 1] → [0, 1]` with `s(0) = 0`, `s(1) = 1`,
/// `s(1/2) = 1/2` and vanishing first derivative at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothProfile {
    /// `3x² − 2x³`, C¹ at the endpoints.
    Cubic,
    /// `6x⁵ − 15x⁴ + 10x³`, C² at the endpoints.
    #[default]
    Quintic,
}

impl SmoothProfile {
    /// Evaluates the profile; arguments outside `[0, 1]` are clamped.
    pub fn eval(self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            SmoothProfile::Cubic => x * x * (3.0 - 2.0 * x),
            SmoothProfile::Quintic => x * x * x * (x * (6.0 * x - 15.0) + 10.0),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        match self {
            SmoothProfile::Cubic => 6.0 * x * (1.0 - x),
            SmoothProfile::Quintic => 30.0 * x * x * (x - 1.0) * (x - 1.0),
        }
    }
}
