use serde::{Deserialize, Serialize};

use crate::error::{open_interval, positive, Result};

/// Codification technology `g`: maps labor in a family to maturity gained,
/// with `g(0) = 0`, `g' > 0` and `g'' < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodificationTech {
    /// `g(l) = l^β`, `0 < β < 1`.
    Power { beta: f64 },
    /// `g(l) = ln(1 + θ l) / θ`; finite slope `g'(0) = 1`, so corner
    /// allocations can occur.
    Logarithmic { theta: f64 },
}

impl Default for CodificationTech {
    fn default() -> Self {
        CodificationTech::Power { beta: 0.5 }
    }
}

impl CodificationTech {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CodificationTech::Power { beta } => open_interval("beta", beta, 0.0, 1.0).map(drop),
            CodificationTech::Logarithmic { theta } => positive("theta", theta).map(drop),
        }
    }

    pub fn g(&self, labor: f64) -> f64 {
        match *self {
            CodificationTech::Power { beta } => labor.powf(beta),
            CodificationTech::Logarithmic { theta } => (theta * labor).ln_1p() / theta,
        }
    }

    pub fn g_prime(&self, labor: f64) -> f64 {
        match *self {
            CodificationTech::Power { beta } => beta * labor.powf(beta - 1.0),
            CodificationTech::Logarithmic { theta } => 1.0 / (1.0 + theta * labor),
        }
    }

    /// Labor needed to produce `gain` units of maturity.
    pub fn g_inverse(&self, gain: f64) -> f64 {
        match *self {
            CodificationTech::Power { beta } => gain.powf(1.0 / beta),
            CodificationTech::Logarithmic { theta } => (theta * gain).exp_m1() / theta,
        }
    }

    /// Labor at which the slope equals `slope`; zero when `slope >= g'(0)`.
    pub fn g_prime_inverse(&self, slope: f64) -> f64 {
        match *self {
            CodificationTech::Power { beta } => (slope / beta).powf(1.0 / (beta - 1.0)),
            CodificationTech::Logarithmic { theta } => {
                if slope >= 1.0 {
                    0.0
                } else {
                    (1.0 / slope - 1.0) / theta
                }
            }
        }
    }

    /// Slope at zero labor (infinite for the power family).
    pub fn slope_at_zero(&self) -> f64 {
        match *self {
            CodificationTech::Power { .. } => f64::INFINITY,
            CodificationTech::Logarithmic { .. } => 1.0,
        }
    }
}
