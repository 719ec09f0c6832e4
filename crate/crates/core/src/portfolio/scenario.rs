use serde::{Deserialize, Serialize};

use super::dynamics::ENTRANT_ID_STRIDE;
use super::{
    aggregate_capability, allocate_labor, effective_weights, step_portfolio, Aggregator,
    CodificationTech, DriftShocks, EntryConfig, Portfolio, StepContext, TaskFamily,
};
use crate::error::{non_negative, positive, Error, Result};
use crate::estimators::{MaturityPanel, PanelRecord};

/// Structured labor available to the portfolio each period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LaborBudget {
    Constant(f64),
    Path(Vec<f64>),
}

impl LaborBudget {
    pub fn at(&self, t: u64) -> f64 {
        match self {
            LaborBudget::Constant(l) => *l,
            LaborBudget::Path(p) => p[t as usize],
        }
    }

    fn validate(&self, periods: u64) -> Result<()> {
        match self {
            LaborBudget::Constant(l) => non_negative("budget", *l).map(drop),
            LaborBudget::Path(p) => {
                if (p.len() as u64) < periods {
                    return Err(Error::domain(
                        "budget",
                        format!("budget path has {} entries but {periods} periods were requested", p.len()),
                    ));
                }
                p.iter().try_for_each(|&l| non_negative("budget", l).map(drop))
            }
        }
    }
}

/// Periods `[start, start + len)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub start: u64,
    pub len: u64,
}

impl Window {
    pub fn contains(&self, t: u64) -> bool {
        t >= self.start && t < self.start + self.len
    }
}

/// Dated technology and organisational drift windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DriftWindows {
    #[serde(default)]
    pub tech: Vec<Window>,
    #[serde(default)]
    pub org: Vec<Window>,
}

impl DriftWindows {
    pub fn tech_at(&self, t: u64) -> bool {
        self.tech.iter().any(|w| w.contains(t))
    }

    pub fn org_at(&self, t: u64) -> bool {
        self.org.iter().any(|w| w.contains(t))
    }

    /// Windows of length `len` starting every `every` periods from `offset`
    /// up to `horizon`.
    pub fn periodic(every: u64, len: u64, offset: u64, horizon: u64) -> Vec<Window> {
        (0..)
            .map(|i| offset + i * every.max(1))
            .take_while(|&s| s < horizon)
            .map(|start| Window { start, len })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSpec {
    pub initial: Portfolio,
    pub budget: LaborBudget,
    /// Labor endowment used to express structured labor as a share.
    pub labor_endowment: f64,
    pub entry: EntryConfig,
    pub shocks: DriftShocks,
    pub windows: DriftWindows,
    pub periods: u64,
    pub seed: u64,
}

impl Default for ScenarioSpec {
    /// Six mature families under CES(0.5) with Poisson entry at μ = 1 and
    /// an environmental shock hazard of 5%.
    fn default() -> Self {
        let families = (0..6)
            .map(|i| TaskFamily::new(i, 1.0, 0.08 + 0.034 * i as f64, 1.0, 0))
            .collect::<Result<Vec<_>>>()
            .expect("default families are valid");
        let initial = Portfolio::new(families, Aggregator::ces(0.5), CodificationTech::default(), 1.0)
            .expect("default portfolio is valid");
        ScenarioSpec {
            initial,
            budget: LaborBudget::Constant(1.0),
            labor_endowment: 10.0,
            entry: EntryConfig {
                mu: 1.0,
                seed_maturity: 0.1,
                ..EntryConfig::default()
            },
            shocks: DriftShocks {
                env: 0.05,
                tech: 0.0,
                org: 0.0,
                severity: 0.5,
            },
            windows: DriftWindows::default(),
            periods: 40,
            seed: 0,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.periods < 1 {
            return Err(Error::domain("periods", "periods must be at least 1"));
        }
        positive("labor_endowment", self.labor_endowment)?;
        self.budget.validate(self.periods)?;
        self.entry.validate()?;
        self.shocks.validate()?;
        if let Some(f) = self.initial.families().iter().find(|f| f.id >= ENTRANT_ID_STRIDE) {
            return Err(Error::domain(
                "family id",
                format!("initial family id {} must be below {ENTRANT_ID_STRIDE}", f.id),
            ));
        }
        if self.initial.is_empty() {
            return Err(Error::Empty("initial portfolio"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodSummary {
    pub t: u64,
    /// Aggregate capability at the start of the period.
    pub aggregate: f64,
    /// Structured labor actually allocated (sum over families).
    pub structured: f64,
    pub share: f64,
    pub families: usize,
    /// Families that arrive at the end of the period.
    pub births: u64,
    pub max_kkt_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRun {
    pub panel: MaturityPanel,
    pub summary: Vec<PeriodSummary>,
    /// Every family that was ever present, as it looked when it first appeared.
    pub registry: Vec<TaskFamily>,
    pub final_portfolio: Portfolio,
}

/// Iterates allocation and stepping for `periods` periods, recording the
/// family panel (maturity at the start of each period, labor and effective
/// weight in that period, window flags).
pub fn run_portfolio_scenario(spec: &ScenarioSpec) -> Result<ScenarioRun> {
    spec.validate()?;
    let mut portfolio = spec.initial.clone();
    let mut registry: Vec<TaskFamily> = portfolio.families().to_vec();
    let mut records = Vec::new();
    let mut summary = Vec::with_capacity(spec.periods as usize);

    for t in 0..spec.periods {
        let (tech_window, org_window) = (spec.windows.tech_at(t), spec.windows.org_at(t));
        let alloc = allocate_labor(&portfolio, spec.budget.at(t))?;
        let weights = effective_weights(&portfolio)?;
        for ((f, &l), &w) in portfolio.families().iter().zip(&alloc.labor).zip(&weights) {
            records.push(PanelRecord {
                family_id: f.id,
                period: t,
                maturity: f.maturity,
                labor: l,
                effective_weight: w,
                tech_window,
                org_window,
            });
        }
        let structured: f64 = alloc.labor.iter().sum();
        let aggregate = aggregate_capability(&portfolio)?;
        let ctx = StepContext {
            seed: spec.seed,
            period: t,
            tech_window,
            org_window,
        };
        let out = step_portfolio(&portfolio, &alloc, &spec.entry, &spec.shocks, &ctx)?;
        let incumbents = portfolio.len();
        registry.extend_from_slice(&out.portfolio.families()[incumbents..]);
        summary.push(PeriodSummary {
            t,
            aggregate,
            structured,
            share: structured / spec.labor_endowment,
            families: incumbents,
            births: out.births,
            max_kkt_residual: alloc.kkt_residual,
        });
        portfolio = out.portfolio;
    }

    Ok(ScenarioRun {
        panel: MaturityPanel::new(records)?,
        summary,
        registry,
        final_portfolio: portfolio,
    })
}
