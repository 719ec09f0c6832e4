//! Roy-style sorting of heterogeneous workers across task families.
//!
//! A worker `i` placed in family `j` earns `p_j a_ij`, where `a_ij` is a
//! productivity shifter and `p_j = w̃_j g'(l_j)` is the family's shadow
//! price at its current labor. Workers pick the best-paying family; labor
//! counts feed back into prices; a damped iteration searches for an
//! assignment that is optimal against the prices it induces.

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Error, Result};
use crate::portfolio::{effective_weights, run_portfolio_scenario, Portfolio, ScenarioSpec, TaskFamily};
use crate::rng::{self, StreamTag};
use crate::stats;

/// Log-normal skill parameters for one family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySkill {
    pub family_id: u64,
    pub log_mean: f64,
    pub log_sd: f64,
}

/// Skill spread in uncodified work: a family at zero maturity has log-sd
/// `log_sd`, relaxing towards the base log-sd as its maturity passes
/// `maturity_scale` (weight `exp(-k / maturity_scale)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierSkills {
    pub log_sd: f64,
    pub maturity_scale: f64,
}

/// `ln a_ij = m_j + s_j z_ij` with `z_ij = √c·u_i + √(1-c)·e_ij`, where
/// `u_i` is a worker-level factor shared across families, `e_ij` is
/// idiosyncratic and `c = common_factor`. Both are standard normal.
///
/// Without `frontier`, `(m_j, s_j) = (log_mean, log_sd)`. With it, `s_j`
/// depends on the family's maturity and `m_j` is shifted so that the mean
/// skill level `exp(m_j + s_j²/2)` stays the same: low-maturity families
/// then have a thin right tail of suitable workers. Per-family overrides
/// take precedence over both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SkillSpec {
    pub log_mean: f64,
    pub log_sd: f64,
    /// Share of skill variance coming from the worker-level factor, in `[0, 1]`.
    #[serde(default)]
    pub common_factor: f64,
    pub frontier: Option<FrontierSkills>,
    pub overrides: Vec<FamilySkill>,
}

impl Default for SkillSpec {
    fn default() -> Self {
        SkillSpec {
            log_mean: 0.0,
            log_sd: 0.5,
            common_factor: 0.0,
            frontier: None,
            overrides: Vec::new(),
        }
    }
}

impl SkillSpec {
    pub fn validate(&self) -> Result<()> {
        for (m, s) in std::iter::once((self.log_mean, self.log_sd))
            .chain(self.overrides.iter().map(|o| (o.log_mean, o.log_sd)))
        {
            if !m.is_finite() {
                return Err(Error::domain("log_mean", "log_mean must be finite"));
            }
            non_negative("log_sd", s)?;
        }
        if !(0.0..=1.0).contains(&self.common_factor) {
            return Err(Error::domain("common_factor", "common_factor must lie in [0,1]"));
        }
        if let Some(f) = self.frontier {
            non_negative("frontier log_sd", f.log_sd)?;
            positive("frontier maturity_scale", f.maturity_scale)?;
        }
        Ok(())
    }

    /// `(m_j, s_j)` for a family.
    pub fn params(&self, family: &TaskFamily) -> (f64, f64) {
        if let Some(o) = self.overrides.iter().find(|o| o.family_id == family.id) {
            return (o.log_mean, o.log_sd);
        }
        match self.frontier {
            None => (self.log_mean, self.log_sd),
            Some(f) => {
                let w = (-family.maturity / f.maturity_scale).exp();
                let s = self.log_sd + (f.log_sd - self.log_sd) * w;
                (self.log_mean + 0.5 * (self.log_sd * self.log_sd - s * s), s)
            }
        }
    }
}

/// `workers × families` matrix of positive productivity shifters, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerSkillMatrix {
    workers: usize,
    family_ids: Vec<u64>,
    values: Vec<f64>,
}

impl WorkerSkillMatrix {
    pub fn from_rows(family_ids: Vec<u64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let j = family_ids.len();
        if rows.is_empty() || j == 0 {
            return Err(Error::Empty("skill matrix"));
        }
        let mut values = Vec::with_capacity(rows.len() * j);
        for row in &rows {
            if row.len() != j {
                return Err(Error::domain("skills", format!("row has {} entries, expected {j}", row.len())));
            }
            for &a in row {
                positive("skill", a)?;
                values.push(a);
            }
        }
        Ok(WorkerSkillMatrix {
            workers: rows.len(),
            family_ids,
            values,
        })
    }

    /// Draws `a_ij` from keyed streams addressed by `(worker, family id)`,
    /// so the same worker/family pair gets the same skill in any scenario
    /// sharing the seed.
    pub fn generate(spec: &SkillSpec, workers: usize, families: &[TaskFamily], seed: u64) -> Result<Self> {
        spec.validate()?;
        if workers == 0 || families.is_empty() {
            return Err(Error::Empty("skill matrix"));
        }
        let params: Vec<(f64, f64)> = families.iter().map(|f| spec.params(f)).collect();
        let (load, idio) = (spec.common_factor.sqrt(), (1.0 - spec.common_factor).sqrt());
        let mut values = Vec::with_capacity(workers * families.len());
        for i in 0..workers {
            // The worker factor lives on its own key (no family component).
            let u = rng::standard_normal(&mut rng::stream(seed, StreamTag::Skills, &[i as u64]));
            for (f, &(m, s)) in families.iter().zip(&params) {
                let e = rng::standard_normal(&mut rng::stream(seed, StreamTag::Skills, &[i as u64, f.id]));
                values.push((m + s * (load * u + idio * e)).exp());
            }
        }
        Ok(WorkerSkillMatrix {
            workers,
            family_ids: families.iter().map(|f| f.id).collect(),
            values,
        })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn family_ids(&self) -> &[u64] {
        &self.family_ids
    }

    pub fn row(&self, worker: usize) -> &[f64] {
        let j = self.family_ids.len();
        &self.values[worker * j..(worker + 1) * j]
    }

    /// Reorders workers; row `i` of the result is row `order[i]` of `self`.
    pub fn permute_workers(&self, order: &[usize]) -> Self {
        WorkerSkillMatrix {
            workers: order.len(),
            family_ids: self.family_ids.clone(),
            values: order.iter().flat_map(|&i| self.row(i).iter().copied()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceVector(pub Vec<f64>);

/// `p_j = w̃_j g'(max(l_j, floor))`, where `w̃` already carries Λ.
pub fn family_prices(portfolio: &Portfolio, labor: &[f64], labor_floor: f64) -> Result<PriceVector> {
    if labor.len() != portfolio.len() {
        return Err(Error::AllocationMismatch {
            expected: portfolio.len(),
            got: labor.len(),
        });
    }
    positive("labor_floor", labor_floor)?;
    let weights = effective_weights(portfolio)?;
    let tech = portfolio.tech;
    let prices = weights
        .iter()
        .zip(labor)
        .map(|(w, &l)| {
            non_negative("labor", l)?;
            Ok(w * tech.g_prime(l.max(labor_floor)))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(PriceVector(prices))
}

/// Best family for one worker; ties go to the lowest index.
pub fn best_family(skills: &[f64], prices: &[f64]) -> usize {
    let mut best = 0;
    let mut best_wage = prices[0] * skills[0];
    for j in 1..prices.len() {
        let w = prices[j] * skills[j];
        if w > best_wage {
            best = j;
            best_wage = w;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoySettings {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub labor_floor: f64,
}

impl Default for RoySettings {
    fn default() -> Self {
        RoySettings {
            damping: 0.3,
            tolerance: 1e-8,
            max_iterations: 5_000,
            labor_floor: 1e-6,
        }
    }
}

impl RoySettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::domain("damping", format!("damping must lie in (0,1], got {}", self.damping)));
        }
        positive("roy tolerance", self.tolerance)?;
        positive("labor_floor", self.labor_floor)?;
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations", "max_iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoyEquilibrium {
    pub family_ids: Vec<u64>,
    /// Family index chosen by each worker.
    pub assignment: Vec<usize>,
    /// Workers per family under `assignment`.
    pub labor: Vec<f64>,
    /// Prices the assignment is optimal against.
    pub prices: Vec<f64>,
    pub wages: Vec<f64>,
    pub iterations: usize,
    /// `max_j |l_j(assignment) - l_j|` at the final iterate.
    pub residual: f64,
    pub converged: bool,
}

fn assign(skills: &WorkerSkillMatrix, prices: &[f64]) -> Vec<usize> {
    (0..skills.workers()).map(|i| best_family(skills.row(i), prices)).collect()
}

fn counts(assignment: &[usize], families: usize) -> Vec<f64> {
    let mut c = vec![0.0; families];
    for &j in assignment {
        c[j] += 1.0;
    }
    c
}

/// Damped fixed-point iteration on family labor:
/// `l ← (1-λ) l + λ l(assign(p(l)))`, starting from an even split, until
/// the update is below `tolerance`.
pub fn solve_roy(skills: &WorkerSkillMatrix, portfolio: &Portfolio, settings: &RoySettings) -> Result<RoyEquilibrium> {
    settings.validate()?;
    let ids: Vec<u64> = portfolio.families().iter().map(|f| f.id).collect();
    if ids != skills.family_ids() {
        return Err(Error::domain("skills", "skill matrix families do not match the portfolio"));
    }
    let n = skills.workers();
    let j = ids.len();
    let mut labor = vec![n as f64 / j as f64; j];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let prices = family_prices(portfolio, &labor, settings.labor_floor)?.0;
        let assignment = assign(skills, &prices);
        let induced = counts(&assignment, j);
        let residual = induced
            .iter()
            .zip(&labor)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let converged = settings.damping * residual < settings.tolerance;
        if converged || iterations >= settings.max_iterations {
            let wages = assignment
                .iter()
                .enumerate()
                .map(|(i, &f)| prices[f] * skills.row(i)[f])
                .collect();
            return Ok(RoyEquilibrium {
                family_ids: ids,
                assignment,
                labor: induced,
                prices,
                wages,
                iterations,
                residual,
                converged,
            });
        }
        for (l, a) in labor.iter_mut().zip(&induced) {
            *l += settings.damping * (a - *l);
        }
    }
}

/// One-shot sorting against prices evaluated at a given labor vector (for
/// example the allocator's `l_j`), with no feedback from the assignment.
pub fn sort_at_labor(
    skills: &WorkerSkillMatrix,
    portfolio: &Portfolio,
    labor: &[f64],
    labor_floor: f64,
) -> Result<RoyEquilibrium> {
    let ids: Vec<u64> = portfolio.families().iter().map(|f| f.id).collect();
    if ids != skills.family_ids() {
        return Err(Error::domain("skills", "skill matrix families do not match the portfolio"));
    }
    let prices = family_prices(portfolio, labor, labor_floor)?.0;
    let assignment = assign(skills, &prices);
    let induced = counts(&assignment, ids.len());
    let wages = assignment
        .iter()
        .enumerate()
        .map(|(i, &f)| prices[f] * skills.row(i)[f])
        .collect();
    Ok(RoyEquilibrium {
        family_ids: ids,
        assignment,
        labor: induced,
        prices,
        wages,
        iterations: 0,
        residual: 0.0,
        converged: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionStats {
    pub log_wage_variance: f64,
    pub p90_p10: f64,
    pub top_decile_share: f64,
    pub mean_wage: f64,
}

/// Dispersion of a wage sample: sample variance of log wages, P90/P10
/// (linear-interpolation quantiles) and the share of total pay earned by the
/// top `ceil(n/10)` earners.
pub fn dispersion(wages: &[f64]) -> Result<DispersionStats> {
    if wages.len() < 2 {
        return Err(Error::domain("wages", "dispersion needs at least two wages"));
    }
    for &w in wages {
        positive("wage", w)?;
    }
    let logs: Vec<f64> = wages.iter().map(|w| w.ln()).collect();
    let sorted = stats::sorted_copy(wages);
    let top = wages.len().div_ceil(10);
    let total: f64 = sorted.iter().sum();
    let top_sum: f64 = sorted[sorted.len() - top..].iter().sum();
    Ok(DispersionStats {
        log_wage_variance: stats::sample_variance(&logs),
        p90_p10: (stats::quantile_sorted(&sorted, 0.9) / stats::quantile_sorted(&sorted, 0.1)).max(1.0),
        top_decile_share: top_sum / total,
        mean_wage: total / wages.len() as f64,
    })
}

pub fn wage_stats(eq: &RoyEquilibrium) -> Result<DispersionStats> {
    dispersion(&eq.wages)
}

/// Portfolio scenario followed by Roy sorting on the final portfolio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SortingScenario {
    pub scenario: ScenarioSpec,
    pub workers: usize,
    pub skills: SkillSpec,
    pub roy: RoySettings,
}

impl Default for SortingScenario {
    fn default() -> Self {
        SortingScenario::reference()
    }
}

impl SortingScenario {
    /// The default portfolio scenario with 300 workers and a common
    /// judgment factor on frontier skills.
    pub fn reference() -> Self {
        SortingScenario {
            scenario: ScenarioSpec::default(),
            workers: 300,
            skills: SkillSpec {
                log_mean: 0.0,
                log_sd: 0.3,
                common_factor: 0.8,
                frontier: Some(FrontierSkills { log_sd: 1.0, maturity_scale: 1.0 }),
                overrides: vec![],
            },
            roy: RoySettings { max_iterations: 300, ..RoySettings::default() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "multiplier", rename_all = "snake_case")]
pub enum Treatment {
    /// Scales the entry intensity μ.
    Entry(f64),
    /// Scales every drift rate: family δ_j, the entrant δ range and the
    /// shock hazards.
    Drift(f64),
}

impl Treatment {
    pub fn apply(&self, base: &ScenarioSpec) -> Result<ScenarioSpec> {
        let mut spec = base.clone();
        match *self {
            Treatment::Entry(m) => {
                non_negative("entry multiplier", m)?;
                spec.entry.mu *= m;
            }
            Treatment::Drift(m) => {
                positive("drift multiplier", m)?;
                let families = spec
                    .initial
                    .families()
                    .iter()
                    .map(|f| TaskFamily::new(f.id, f.omega, f.delta * m, f.maturity, f.born_at))
                    .collect::<Result<Vec<_>>>()?;
                spec.initial = Portfolio::new(families, spec.initial.aggregator, spec.initial.tech, spec.initial.lambda())?;
                spec.entry.delta.lo *= m;
                spec.entry.delta.hi *= m;
                spec.shocks.env *= m;
                spec.shocks.tech *= m;
                spec.shocks.org *= m;
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SortingOutcome {
    pub families: usize,
    pub stats: DispersionStats,
    pub converged: bool,
}

/// Runs the portfolio stage and Roy sorting with every stream keyed by `seed`.
pub fn run_sorting(base: &SortingScenario, seed: u64) -> Result<(RoyEquilibrium, SortingOutcome)> {
    let mut spec = base.scenario.clone();
    spec.seed = seed;
    let run = run_portfolio_scenario(&spec)?;
    let portfolio = run.final_portfolio;
    let skills = WorkerSkillMatrix::generate(&base.skills, base.workers, portfolio.families(), seed)?;
    let eq = solve_roy(&skills, &portfolio, &base.roy)?;
    let stats = wage_stats(&eq)?;
    let outcome = SortingOutcome {
        families: portfolio.len(),
        stats,
        converged: eq.converged,
    };
    Ok((eq, outcome))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationOutcome {
    pub seed: u64,
    pub base: SortingOutcome,
    pub treated: SortingOutcome,
    /// Treated minus base log-wage variance.
    pub log_variance_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub treatment: Treatment,
    pub replications: Vec<ReplicationOutcome>,
    pub mean_log_variance_diff: f64,
    /// Replications where the treated variance is strictly higher.
    pub strictly_higher: usize,
}

/// Paired base/treatment runs. Replication `r` uses the seed derived from
/// `(root_seed, r)` in both arms, so the arms share births, entrant
/// attributes, shocks and skills wherever they overlap.
pub fn dispersion_experiment(
    base: &SortingScenario,
    treatment: Treatment,
    replications: usize,
    root_seed: u64,
) -> Result<ExperimentResult> {
    if replications == 0 {
        return Err(Error::domain("replications", "replications must be at least 1"));
    }
    let treated = SortingScenario {
        scenario: treatment.apply(&base.scenario)?,
        ..base.clone()
    };
    let reps = (0..replications as u64)
        .map(|r| {
            let seed = rng::derive_seed(root_seed, StreamTag::Replication, &[r]);
            let (_, b) = run_sorting(base, seed)?;
            let (_, t) = run_sorting(&treated, seed)?;
            Ok(ReplicationOutcome {
                seed,
                log_variance_diff: t.stats.log_wage_variance - b.stats.log_wage_variance,
                base: b,
                treated: t,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = reps.iter().map(|r| r.log_variance_diff).sum::<f64>() / reps.len() as f64;
    let strictly_higher = reps.iter().filter(|r| r.log_variance_diff > 0.0).count();
    Ok(ExperimentResult {
        treatment,
        replications: reps,
        mean_log_variance_diff: mean,
        strictly_higher,
    })
}
