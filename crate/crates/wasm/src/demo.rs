//! Plain-Rust back end of the browser demo. Every function takes scalars
//! from the page and returns flat vectors ready for a canvas.

use lastmile_core::baseline::{simulate_transition, steady_state, BaselineParams, TransitionSettings};
use lastmile_core::calibration::{histogram, sample_shares, share_bounds, summarize, Interval, PriorSpec};
use lastmile_core::portfolio::{
    run_portfolio_scenario, Aggregator, DriftShocks, EntryConfig, LaborBudget, RawPortfolio, ScenarioSpec,
};

pub type DemoResult<T> = Result<T, String>;

fn msg<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub s_star: f64,
    pub k_star: f64,
    /// First period within tolerance, if reached inside the horizon.
    pub converged_at: Option<u64>,
    /// Structured share and `k / k*` per period.
    pub share: Vec<f64>,
    pub k_ratio: Vec<f64>,
}

/// Steady state plus the path from `k0 = k0_ratio · k*` with no initial
/// structured labor.
pub fn transition(alpha: f64, gamma: f64, r: f64, delta_k: f64, k0_ratio: f64, horizon: u32) -> DemoResult<Transition> {
    let params = BaselineParams::from_shares(alpha, gamma, r, delta_k).map_err(msg)?;
    if !(k0_ratio.is_finite() && k0_ratio > 0.0) {
        return Err(format!("k0 ratio must be positive, got {k0_ratio}"));
    }
    let ss = steady_state(&params);
    let settings = TransitionSettings { periods: u64::from(horizon.max(1)), ..TransitionSettings::default() };
    let path = simulate_transition(&params, k0_ratio * ss.k_star, 0.0, &settings).map_err(msg)?;
    let labor = params.labor();
    Ok(Transition {
        s_star: ss.s_star,
        k_star: ss.k_star,
        converged_at: path.periods_to_converge,
        share: path.records.iter().map(|p| p.structured / labor).collect(),
        k_ratio: path.records.iter().map(|p| p.k / ss.k_star).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub p10: f64,
    pub p90: f64,
    /// Analytic support of the share over the prior box.
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<f64>,
}

/// Monte Carlo over the default priors with a user-chosen γ interval.
pub fn calibration(gamma_lo: f64, gamma_hi: f64, n_draws: u32, bins: u32, seed: u64) -> DemoResult<Histogram> {
    let priors = PriorSpec {
        gamma: Interval::new(gamma_lo, gamma_hi),
        n_draws: n_draws as usize,
        seed,
        ..PriorSpec::default()
    };
    let shares = sample_shares(&priors).map_err(msg)?;
    let stats = summarize(&shares, seed).map_err(msg)?;
    let bounds = share_bounds(&priors).map_err(msg)?;
    let counts = histogram(&shares, bounds.min, bounds.max, bins.clamp(1, 500) as usize);
    Ok(Histogram {
        mean: stats.mean,
        median: stats.median,
        std_dev: stats.std_dev,
        p10: stats.quantiles.p10,
        p90: stats.quantiles.p90,
        lo: bounds.min,
        hi: bounds.max,
        counts: counts.into_iter().map(|c| c as f64).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioPath {
    pub share: Vec<f64>,
    pub families: Vec<f64>,
    pub aggregate: Vec<f64>,
}

/// Runs the default six-family scenario with the page's substitution
/// parameter, entry rate, shock hazard and budget.
pub fn portfolio(rho: f64, entry_mu: f64, env_hazard: f64, budget: f64, periods: u32, seed: u64) -> DemoResult<PortfolioPath> {
    let base = ScenarioSpec::default();
    let aggregator = if rho == 1.0 { Aggregator::Additive } else { Aggregator::ces(rho) };
    aggregator.validate().map_err(msg)?;
    let mut raw = RawPortfolio::from(base.initial.clone());
    raw.aggregator = aggregator;
    let spec = ScenarioSpec {
        initial: raw.try_into().map_err(msg)?,
        budget: LaborBudget::Constant(budget),
        entry: EntryConfig { mu: entry_mu, ..base.entry },
        shocks: DriftShocks { env: env_hazard, ..base.shocks },
        periods: u64::from(periods),
        seed,
        ..base
    };
    let run = run_portfolio_scenario(&spec).map_err(msg)?;
    Ok(PortfolioPath {
        share: run.summary.iter().map(|p| p.share).collect(),
        families: run.summary.iter().map(|p| p.families as f64).collect(),
        aggregate: run.summary.iter().map(|p| p.aggregate).collect(),
    })
}
