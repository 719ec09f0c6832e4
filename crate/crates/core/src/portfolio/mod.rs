//! Task-family portfolio: maturity stocks, aggregation, allocation, entry
//! and drift.

mod aggregator;
mod allocation;
mod dynamics;
mod scenario;
mod tech;

pub use aggregator::{aggregate_capability, effective_weights, Aggregator};
pub use allocation::{allocate_labor, allocate_with_weights, AllocationMethod, AllocationResult};
pub use dynamics::{
    maintenance_labor, step_portfolio, DriftShocks, EntryConfig, StepContext, StepOutcome,
};
pub use scenario::{
    run_portfolio_scenario, DriftWindows, LaborBudget, PeriodSummary, ScenarioRun, ScenarioSpec,
    Window,
};
pub use tech::CodificationTech;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, open_interval, positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskFamily {
    pub id: u64,
    pub omega: f64,
    pub delta: f64,
    pub maturity: f64,
    #[serde(default)]
    pub born_at: u64,
}

impl TaskFamily {
    pub fn new(id: u64, omega: f64, delta: f64, maturity: f64, born_at: u64) -> Result<Self> {
        let f = TaskFamily {
            id,
            omega,
            delta,
            maturity,
            born_at,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega", self.omega)?;
        open_interval("delta", self.delta, 0.0, 1.0)?;
        non_negative("maturity", self.maturity)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPortfolio", into = "RawPortfolio")]
pub struct Portfolio {
    families: Vec<TaskFamily>,
    pub aggregator: Aggregator,
    pub tech: CodificationTech,
    lambda: f64,
}

/// Unvalidated mirror of [`Portfolio`] used for (de)serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPortfolio {
    pub families: Vec<TaskFamily>,
    #[serde(default)]
    pub aggregator: Aggregator,
    #[serde(default)]
    pub tech: CodificationTech,
    #[serde(default = "unit")]
    pub lambda: f64,
}

fn unit() -> f64 {
    1.0
}

impl TryFrom<RawPortfolio> for Portfolio {
    type Error = Error;

    fn try_from(p: RawPortfolio) -> Result<Self> {
        Portfolio::new(p.families, p.aggregator, p.tech, p.lambda)
    }
}

impl From<Portfolio> for RawPortfolio {
    fn from(p: Portfolio) -> Self {
        RawPortfolio {
            families: p.families,
            aggregator: p.aggregator,
            tech: p.tech,
            lambda: p.lambda,
        }
    }
}

impl Portfolio {
    pub fn new(
        families: Vec<TaskFamily>,
        aggregator: Aggregator,
        tech: CodificationTech,
        lambda: f64,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for f in &families {
            f.validate()?;
            if !seen.insert(f.id) {
                return Err(Error::DuplicateFamily(f.id));
            }
        }
        aggregator.validate()?;
        tech.validate()?;
        Ok(Portfolio {
            families,
            aggregator,
            tech,
            lambda: positive("lambda", lambda)?,
        })
    }

    pub fn families(&self) -> &[TaskFamily] {
        &self.families
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// Shadow value of aggregate capability.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Ok(Portfolio {
            lambda: positive("lambda", lambda)?,
            ..self.clone()
        })
    }

    /// Adds a family, keeping ids unique.
    pub fn push(&mut self, family: TaskFamily) -> Result<()> {
        family.validate()?;
        if self.families.iter().any(|f| f.id == family.id) {
            return Err(Error::DuplicateFamily(family.id));
        }
        self.families.push(family);
        Ok(())
    }

    /// One past the largest id in use.
    pub fn next_id(&self) -> u64 {
        self.families.iter().map(|f| f.id + 1).max().unwrap_or(0)
    }

    pub(crate) fn families_mut(&mut self) -> &mut [TaskFamily] {
        &mut self.families
    }
}
