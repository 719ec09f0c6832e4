use serde::{Deserialize, Serialize};

use super::{AllocationResult, CodificationTech, Portfolio, TaskFamily};
use crate::calibration::Interval;
use crate::error::{non_negative, Error, Result};
use crate::rng::{self, StreamTag, MAX_POISSON_MEAN};

/// Entrant ids are `born_at * ENTRANT_ID_STRIDE + rank within cohort`;
/// initial families must use ids below the stride.
pub const ENTRANT_ID_STRIDE: u64 = 1_000_000;

/// Arrival of new task families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntryConfig {
    /// Expected number of new families per period.
    pub mu: f64,
    /// Maturity of a newly arrived family.
    pub seed_maturity: f64,
    /// Entrant weights are log-normal with median one and this log-sd.
    pub omega_log_sigma: f64,
    /// Entrant drift rates are uniform on this interval.
    pub delta: Interval,
}

impl Default for EntryConfig {
    fn default() -> Self {
        EntryConfig {
            mu: 0.0,
            seed_maturity: 1e-3,
            omega_log_sigma: 0.5,
            delta: Interval::new(0.08, 0.25),
        }
    }
}

impl EntryConfig {
    pub fn validate(&self) -> Result<()> {
        non_negative("mu", self.mu)?;
        if self.mu > MAX_POISSON_MEAN {
            return Err(Error::domain("mu", format!("mu must not exceed {MAX_POISSON_MEAN}")));
        }
        non_negative("seed_maturity", self.seed_maturity)?;
        non_negative("omega_log_sigma", self.omega_log_sigma)?;
        self.delta.validate("entry delta", 0.0, 1.0)
    }
}

/// Event-driven drift. In a period with hazard
/// `env + tech·[tech window] + org·[org window]` a family suffers a shock
/// that destroys `severity` of its (already depreciated) maturity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriftShocks {
    pub env: f64,
    pub tech: f64,
    pub org: f64,
    pub severity: f64,
}

impl Default for DriftShocks {
    fn default() -> Self {
        DriftShocks {
            env: 0.0,
            tech: 0.0,
            org: 0.0,
            severity: 0.5,
        }
    }
}

impl DriftShocks {
    pub fn validate(&self) -> Result<()> {
        non_negative("shock env", self.env)?;
        non_negative("shock tech", self.tech)?;
        non_negative("shock org", self.org)?;
        if self.env + self.tech + self.org > 1.0 {
            return Err(Error::domain("shocks", "combined shock hazard must not exceed 1"));
        }
        if !(0.0..=1.0).contains(&self.severity) {
            return Err(Error::domain("severity", "severity must lie in [0,1]"));
        }
        Ok(())
    }

    pub fn hazard(&self, tech_window: bool, org_window: bool) -> f64 {
        self.env + if tech_window { self.tech } else { 0.0 } + if org_window { self.org } else { 0.0 }
    }
}

/// Randomness and window state for one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepContext {
    pub seed: u64,
    pub period: u64,
    pub tech_window: bool,
    pub org_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub portfolio: Portfolio,
    pub births: u64,
    /// Ids of families hit by a drift shock this period.
    pub shocked: Vec<u64>,
}

/// Advances every family by `k' = (1 - δ_j) k + g(l_j)` (with an optional
/// drift shock), then appends this period's entrants.
pub fn step_portfolio(
    portfolio: &Portfolio,
    allocation: &AllocationResult,
    entry: &EntryConfig,
    shocks: &DriftShocks,
    ctx: &StepContext,
) -> Result<StepOutcome> {
    if allocation.labor.len() != portfolio.len() {
        return Err(Error::AllocationMismatch {
            expected: portfolio.len(),
            got: allocation.labor.len(),
        });
    }
    let tech = portfolio.tech;
    let hazard = shocks.hazard(ctx.tech_window, ctx.org_window);
    let mut next = portfolio.clone();
    let mut shocked = Vec::new();
    for (f, &l) in next.families_mut().iter_mut().zip(&allocation.labor) {
        let mut kept = (1.0 - f.delta) * f.maturity;
        if hazard > 0.0 {
            let u = rng::unit(&mut rng::stream(ctx.seed, StreamTag::DriftShock, &[f.id, ctx.period]));
            if u < hazard {
                kept *= 1.0 - shocks.severity;
                shocked.push(f.id);
            }
        }
        f.maturity = kept + tech.g(l);
    }

    let u = rng::unit(&mut rng::stream(ctx.seed, StreamTag::Births, &[ctx.period]));
    let births = rng::poisson_inverse(entry.mu, u);
    let born_at = ctx.period + 1;
    for rank in 0..births {
        next.push(entrant(entry, ctx.seed, born_at, rank))?;
    }
    Ok(StepOutcome {
        portfolio: next,
        births,
        shocked,
    })
}

/// The `rank`-th family of the cohort born at `born_at`.
pub(crate) fn entrant(entry: &EntryConfig, seed: u64, born_at: u64, rank: u64) -> TaskFamily {
    let mut g = rng::stream(seed, StreamTag::EntrantAttributes, &[born_at, rank]);
    let omega = (entry.omega_log_sigma * rng::standard_normal(&mut g)).exp();
    let delta = rng::uniform_closed(&mut g, entry.delta.lo, entry.delta.hi);
    TaskFamily {
        id: born_at * ENTRANT_ID_STRIDE + rank,
        omega,
        delta,
        maturity: entry.seed_maturity,
        born_at,
    }
}

/// Labor that keeps a family's maturity stationary, `g⁻¹(δ_j k_j)`.
pub fn maintenance_labor(family: &TaskFamily, tech: &CodificationTech) -> f64 {
    tech.g_inverse(family.delta * family.maturity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portfolio::{allocate_labor, Aggregator};

    fn single(delta: f64, k: f64) -> Portfolio {
        Portfolio::new(
            vec![TaskFamily::new(0, 1.0, delta, k, 0).unwrap()],
            Aggregator::Additive,
            CodificationTech::default(),
            1.0,
        )
        .unwrap()
    }

    fn ctx(period: u64) -> StepContext {
        StepContext {
            seed: 42,
            period,
            tech_window: false,
            org_window: false,
        }
    }

    fn labor(v: Vec<f64>) -> AllocationResult {
        AllocationResult {
            total: v.iter().sum(),
            labor: v,
            multiplier: None,
            kkt_residual: 0.0,
        }
    }

    #[test]
    fn pure_decay() {
        let p = single(0.1, 1.0);
        let out = step_portfolio(&p, &labor(vec![0.0]), &EntryConfig::default(), &DriftShocks::default(), &ctx(0))
            .unwrap();
        assert!((out.portfolio.families()[0].maturity - 0.9).abs() < 1e-15);
        assert_eq!(out.births, 0);
        assert_eq!(out.portfolio.len(), 1);
    }

    #[test]
    fn maintenance_keeps_maturity_stationary() {
        let p = single(0.1, 4.0);
        let l = maintenance_labor(&p.families()[0], &p.tech);
        assert!((l - 0.16).abs() < 1e-15);
        let mut cur = p;
        for t in 0..2 {
            cur = step_portfolio(&cur, &labor(vec![l]), &EntryConfig::default(), &DriftShocks::default(), &ctx(t))
                .unwrap()
                .portfolio;
            assert!((cur.families()[0].maturity - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nothing_to_maintain_at_zero_maturity() {
        let f = TaskFamily::new(0, 1.0, 0.2, 0.0, 0).unwrap();
        assert_eq!(maintenance_labor(&f, &CodificationTech::default()), 0.0);
    }

    #[test]
    fn maintenance_increases_in_drift_and_maturity() {
        let tech = CodificationTech::default();
        let base = maintenance_labor(&TaskFamily::new(0, 1.0, 0.1, 2.0, 0).unwrap(), &tech);
        assert!(maintenance_labor(&TaskFamily::new(0, 1.0, 0.2, 2.0, 0).unwrap(), &tech) > base);
        assert!(maintenance_labor(&TaskFamily::new(0, 1.0, 0.1, 3.0, 0).unwrap(), &tech) > base);
    }

    #[test]
    fn births_are_reproducible() {
        let p = single(0.1, 1.0);
        let entry = EntryConfig {
            mu: 3.0,
            ..EntryConfig::default()
        };
        let a = allocate_labor(&p, 0.5).unwrap();
        let runs: Vec<_> = (0..2)
            .map(|_| step_portfolio(&p, &a, &entry, &DriftShocks::default(), &ctx(9)).unwrap())
            .collect();
        assert_eq!(runs[0], runs[1]);
        let born: Vec<_> = runs[0].portfolio.families()[1..].to_vec();
        assert_eq!(born.len() as u64, runs[0].births);
        for (rank, f) in born.iter().enumerate() {
            assert_eq!(f.born_at, 10);
            assert_eq!(f.id, 10 * ENTRANT_ID_STRIDE + rank as u64);
            assert_eq!(f.maturity, 1e-3);
            assert!((0.08..=0.25).contains(&f.delta));
        }
    }

    #[test]
    fn mismatched_allocation_is_rejected() {
        let p = single(0.1, 1.0);
        let err = step_portfolio(&p, &labor(vec![0.1, 0.2]), &EntryConfig::default(), &DriftShocks::default(), &ctx(0));
        assert!(matches!(err, Err(Error::AllocationMismatch { expected: 1, got: 2 })));
    }

    #[test]
    fn certain_shock_applies_severity() {
        let p = single(0.1, 2.0);
        let shocks = DriftShocks {
            env: 1.0,
            severity: 0.5,
            ..DriftShocks::default()
        };
        let out = step_portfolio(&p, &labor(vec![0.0]), &EntryConfig::default(), &shocks, &ctx(0)).unwrap();
        assert!((out.portfolio.families()[0].maturity - 0.9).abs() < 1e-15);
        assert_eq!(out.shocked, vec![0]);
    }
}
