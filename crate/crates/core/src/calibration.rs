//! Monte Carlo propagation of independent uniform priors through the
//! steady-state structured labor share.

use serde::{Deserialize, Serialize};

use crate::baseline::structured_share;
use crate::error::{Error, Result};
use crate::rng::{self, StreamTag};
use crate::stats;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Checks `lo <= hi` and that both ends lie strictly inside `(min, max)`.
    pub fn validate(&self, field: &'static str, min: f64, max: f64) -> Result<()> {
        let ok = self.lo.is_finite()
            && self.hi.is_finite()
            && self.lo <= self.hi
            && self.lo > min
            && self.hi < max;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(
                field,
                format!(
                    "{field} range [{}, {}] must satisfy {min} < lo <= hi < {max}",
                    self.lo, self.hi
                ),
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorSpec {
    pub alpha: Interval,
    pub r: Interval,
    pub delta_k: Interval,
    pub gamma: Interval,
    pub n_draws: usize,
    pub seed: u64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        PriorSpec {
            alpha: Interval::new(0.33, 0.40),
            r: Interval::new(0.03, 0.05),
            delta_k: Interval::new(0.08, 0.25),
            gamma: Interval::new(0.02, 0.08),
            n_draws: 200_000,
            seed: 0,
        }
    }
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        self.alpha.validate("alpha", 0.0, 1.0)?;
        self.r.validate("r", 0.0, f64::INFINITY)?;
        self.delta_k.validate("delta_k", 0.0, 1.0)?;
        self.gamma.validate("gamma", 0.0, 1.0)?;
        if self.n_draws == 0 {
            return Err(Error::domain("n_draws", "n_draws must be at least 1"));
        }
        Ok(())
    }

    /// All four parameters fixed at a point.
    pub fn point(alpha: f64, gamma: f64, r: f64, delta_k: f64, n_draws: usize, seed: u64) -> Self {
        PriorSpec {
            alpha: Interval::point(alpha),
            r: Interval::point(r),
            delta_k: Interval::point(delta_k),
            gamma: Interval::point(gamma),
            n_draws,
            seed,
        }
    }
}

/// A single draw `(α, γ, r, δ_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShareDraw {
    pub alpha: f64,
    pub gamma: f64,
    pub r: f64,
    pub delta_k: f64,
}

impl ShareDraw {
    pub fn share(&self) -> f64 {
        structured_share(self.alpha, self.gamma, self.r, self.delta_k)
    }
}

/// Draw `index` of the prior; depends only on `(priors.seed, index)`.
pub fn draw(priors: &PriorSpec, index: u64) -> ShareDraw {
    let mut g = rng::stream(priors.seed, StreamTag::Calibration, &[index]);
    ShareDraw {
        alpha: rng::uniform_closed(&mut g, priors.alpha.lo, priors.alpha.hi),
        r: rng::uniform_closed(&mut g, priors.r.lo, priors.r.hi),
        delta_k: rng::uniform_closed(&mut g, priors.delta_k.lo, priors.delta_k.hi),
        gamma: rng::uniform_closed(&mut g, priors.gamma.lo, priors.gamma.hi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub p2_5: f64,
    pub p10: f64,
    pub p90: f64,
    pub p97_5: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub quantiles: Quantiles,
    pub min: f64,
    pub max: f64,
    /// `Pr(s > 0.05)`.
    pub prob_above_5pct: f64,
    /// `Pr(s > 0.08)`.
    pub prob_above_8pct: f64,
    pub n_draws: usize,
    pub seed: u64,
}

/// Steady-state shares for every draw, in draw order.
pub fn sample_shares(priors: &PriorSpec) -> Result<Vec<f64>> {
    priors.validate()?;
    let n = priors.n_draws as u64;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok((0..n)
            .into_par_iter()
            .map(|i| draw(priors, i).share())
            .collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok((0..n).map(|i| draw(priors, i).share()).collect())
    }
}

/// Summary statistics of a sample of shares. Quantiles use linear
/// interpolation between order statistics; the standard deviation uses the
/// `n - 1` denominator.
pub fn summarize(shares: &[f64], seed: u64) -> Result<CalibrationResult> {
    if shares.is_empty() {
        return Err(Error::Empty("share sample"));
    }
    let n = shares.len() as f64;
    let mean = stats::mean(shares);
    let std_dev = stats::sample_variance(shares).sqrt();
    let above = |tau: f64| shares.iter().filter(|&&s| s > tau).count() as f64 / n;
    let sorted = stats::sorted_copy(shares);
    let q = |p: f64| stats::quantile_sorted(&sorted, p);
    Ok(CalibrationResult {
        mean,
        median: q(0.5),
        std_dev,
        quantiles: Quantiles {
            p2_5: q(0.025),
            p10: q(0.10),
            p90: q(0.90),
            p97_5: q(0.975),
        },
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        prob_above_5pct: above(0.05),
        prob_above_8pct: above(0.08),
        n_draws: shares.len(),
        seed,
    })
}

pub fn run_monte_carlo(priors: &PriorSpec) -> Result<CalibrationResult> {
    let shares = sample_shares(priors)?;
    summarize(&shares, priors.seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShareBounds {
    pub min: f64,
    pub max: f64,
}

/// Extremes of the share over the prior box. The share rises in γ, δ_k and
/// α and falls in r, so the extremes sit at two known corners.
pub fn share_bounds(priors: &PriorSpec) -> Result<ShareBounds> {
    priors.validate()?;
    Ok(ShareBounds {
        min: structured_share(priors.alpha.lo, priors.gamma.lo, priors.r.hi, priors.delta_k.lo),
        max: structured_share(priors.alpha.hi, priors.gamma.hi, priors.r.lo, priors.delta_k.hi),
    })
}

/// Fixed-width histogram of shares over `[lo, hi]`; values outside are
/// clamped into the end bins.
pub fn histogram(shares: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins.max(1)];
    let width = (hi - lo) / counts.len() as f64;
    for &s in shares {
        let b = if width > 0.0 {
            ((s - lo) / width).floor().clamp(0.0, (counts.len() - 1) as f64) as usize
        } else {
            0
        };
        counts[b] += 1;
    }
    counts
}
