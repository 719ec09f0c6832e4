//! Scenario configuration: one TOML (or JSON) document with a section per
//! model. Every section is optional and falls back to the defaults printed
//! by `lastmile defaults`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lastmile_core::baseline::{BaselineParams, RawBaselineParams, TransitionSettings};
use lastmile_core::calibration::{Interval, PriorSpec};
use lastmile_core::estimators::DegradationRule;
use lastmile_core::portfolio::{
    Aggregator, CodificationTech, DriftShocks, DriftWindows, EntryConfig, LaborBudget, Portfolio,
    ScenarioSpec, TaskFamily,
};
use lastmile_core::roy::{RoySettings, SkillSpec, SortingScenario, Treatment};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Root seed; every random stream is derived from it.
    pub seed: u64,
    pub baseline: RawBaselineParams,
    pub transition: TransitionConfig,
    pub calibration: CalibrationConfig,
    pub portfolio: PortfolioConfig,
    pub roy: RoyConfig,
    pub estimate: EstimateConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransitionConfig {
    /// Initial capability; defaults to half the steady-state value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
    pub structured0: f64,
    pub periods: u64,
    /// Labor adjustment speed in (0, 1]; adaptive when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    pub tolerance: f64,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        let s = TransitionSettings::default();
        TransitionConfig {
            k0: None,
            structured0: 0.0,
            periods: s.periods,
            damping: s.damping,
            tolerance: s.tolerance,
        }
    }
}

impl TransitionConfig {
    pub fn settings(&self) -> TransitionSettings {
        TransitionSettings {
            periods: self.periods,
            damping: self.damping,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    pub alpha: Interval,
    pub r: Interval,
    pub delta_k: Interval,
    pub gamma: Interval,
    pub n_draws: usize,
    pub histogram_bins: usize,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        let p = PriorSpec::default();
        CalibrationConfig {
            alpha: p.alpha,
            r: p.r,
            delta_k: p.delta_k,
            gamma: p.gamma,
            n_draws: p.n_draws,
            histogram_bins: 50,
        }
    }
}

impl CalibrationConfig {
    pub fn priors(&self, seed: u64) -> PriorSpec {
        PriorSpec {
            alpha: self.alpha,
            r: self.r,
            delta_k: self.delta_k,
            gamma: self.gamma,
            n_draws: self.n_draws,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortfolioConfig {
    pub periods: u64,
    pub budget: LaborBudget,
    pub labor_endowment: f64,
    pub lambda: f64,
    pub aggregator: Aggregator,
    pub tech: CodificationTech,
    pub families: Vec<TaskFamily>,
    pub entry: EntryConfig,
    pub shocks: DriftShocks,
    pub windows: DriftWindows,
}

impl Default for PortfolioConfig {
    fn default() -> Self {
        let s = ScenarioSpec::default();
        PortfolioConfig {
            periods: s.periods,
            budget: s.budget,
            labor_endowment: s.labor_endowment,
            lambda: s.initial.lambda(),
            aggregator: s.initial.aggregator,
            tech: s.initial.tech,
            families: s.initial.families().to_vec(),
            entry: s.entry,
            shocks: s.shocks,
            windows: s.windows,
        }
    }
}

impl PortfolioConfig {
    pub fn scenario(&self, seed: u64) -> lastmile_core::Result<ScenarioSpec> {
        let spec = ScenarioSpec {
            initial: Portfolio::new(self.families.clone(), self.aggregator, self.tech, self.lambda)?,
            budget: self.budget.clone(),
            labor_endowment: self.labor_endowment,
            entry: self.entry,
            shocks: self.shocks,
            windows: self.windows.clone(),
            periods: self.periods,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Where Roy prices are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PriceTiming {
    /// At the labor counts the assignment itself induces.
    #[default]
    FixedPoint,
    /// At the portfolio allocator's labor, scaled to the worker count.
    Allocator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoyConfig {
    pub workers: usize,
    pub prices: PriceTiming,
    pub skills: SkillSpec,
    pub settings: RoySettings,
    /// Paired replications per treatment; 0 skips the experiment.
    pub replications: usize,
    pub treatments: Vec<Treatment>,
}

impl Default for RoyConfig {
    fn default() -> Self {
        let r = SortingScenario::reference();
        RoyConfig {
            workers: r.workers,
            prices: PriceTiming::FixedPoint,
            skills: r.skills,
            settings: r.roy,
            replications: 20,
            treatments: vec![Treatment::Entry(2.0), Treatment::Drift(2.0)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateConfig {
    /// Panel CSV to analyse; the `[portfolio]` scenario is simulated when
    /// omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub panel: Option<PathBuf>,
    pub rule: DegradationRule,
    /// Maturity-index weights by family id (as strings, since TOML keys
    /// are strings); every observed family gets weight 1 when empty.
    pub index_weights: BTreeMap<String, f64>,
}

impl EstimateConfig {
    pub fn weights(&self) -> Result<BTreeMap<u64, f64>, CliError> {
        self.index_weights
            .iter()
            .map(|(k, &w)| {
                let id = k.parse::<u64>().map_err(|_| CliError::Invalid {
                    path: format!("estimate.index_weights.{k}"),
                    message: format!("family id must be an unsigned integer, got {k:?}"),
                })?;
                Ok((id, w))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Toml,
    Json,
}

impl Encoding {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Encoding::Json,
            _ => Encoding::Toml,
        }
    }
}

/// Parses and fully validates a configuration document.
pub fn parse_config(text: &str, encoding: Encoding) -> Result<ScenarioConfig, CliError> {
    let cfg: ScenarioConfig = match encoding {
        Encoding::Toml => {
            let de = toml::Deserializer::parse(text).map_err(|e| CliError::Syntax(e.to_string()))?;
            serde_path_to_error::deserialize(de).map_err(|e| CliError::Invalid {
                path: e.path().to_string(),
                message: e.inner().to_string(),
            })?
        }
        Encoding::Json => {
            let mut de = serde_json::Deserializer::from_str(text);
            let cfg = serde_path_to_error::deserialize(&mut de).map_err(|e| {
                let inner = e.inner();
                if inner.is_syntax() || inner.is_eof() {
                    CliError::Syntax(inner.to_string())
                } else {
                    CliError::Invalid {
                        path: e.path().to_string(),
                        message: inner.to_string(),
                    }
                }
            })?;
            de.end().map_err(|e| CliError::Syntax(e.to_string()))?;
            cfg
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Invalid {
        path: path.display().to_string(),
        message: format!("cannot read configuration: {e}"),
    })?;
    parse_config(&text, Encoding::from_path(path))
}

fn at(section: &str) -> impl Fn(lastmile_core::Error) -> CliError + '_ {
    move |e| {
        let field = match &e {
            lastmile_core::Error::Domain { field, .. } => field.to_string(),
            _ => String::new(),
        };
        let path = if field.is_empty() {
            section.to_string()
        } else {
            format!("{section}.{}", field.replace(' ', "_"))
        };
        CliError::Invalid {
            path,
            message: e.to_string(),
        }
    }
}

impl ScenarioConfig {
    /// Re-checks every module invariant (baseline bounds are enforced while
    /// parsing already).
    /// Validated baseline parameters.
    pub fn baseline(&self) -> Result<BaselineParams, CliError> {
        BaselineParams::try_from(self.baseline).map_err(at("baseline"))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let baseline = self.baseline()?;
        let t = &self.transition;
        if let Some(k0) = t.k0 {
            lastmile_core::error::positive("k0", k0).map_err(at("transition"))?;
        }
        if !(0.0..=baseline.labor()).contains(&t.structured0) {
            return Err(CliError::Invalid {
                path: "transition.structured0".into(),
                message: format!("structured0 must lie in [0, {}], got {}", baseline.labor(), t.structured0),
            });
        }
        if let Some(d) = t.damping {
            if !(d > 0.0 && d <= 1.0) {
                return Err(CliError::Invalid {
                    path: "transition.damping".into(),
                    message: format!("damping must lie in (0,1], got {d}"),
                });
            }
        }
        lastmile_core::error::positive("tolerance", t.tolerance).map_err(at("transition"))?;
        if t.periods == 0 {
            return Err(CliError::Invalid {
                path: "transition.periods".into(),
                message: "periods must be at least 1".into(),
            });
        }

        self.calibration.priors(self.seed).validate().map_err(at("calibration"))?;
        if self.calibration.histogram_bins == 0 {
            return Err(CliError::Invalid {
                path: "calibration.histogram_bins".into(),
                message: "histogram_bins must be at least 1".into(),
            });
        }

        let pf = &self.portfolio;
        for (i, f) in pf.families.iter().enumerate() {
            f.validate().map_err(at(&format!("portfolio.families[{i}]")))?;
        }
        pf.aggregator.validate().map_err(at("portfolio.aggregator"))?;
        pf.tech.validate().map_err(at("portfolio.tech"))?;
        pf.entry.validate().map_err(at("portfolio.entry"))?;
        pf.shocks.validate().map_err(at("portfolio.shocks"))?;
        pf.scenario(self.seed).map_err(at("portfolio"))?;

        let roy = &self.roy;
        if roy.workers == 0 {
            return Err(CliError::Invalid {
                path: "roy.workers".into(),
                message: "workers must be at least 1".into(),
            });
        }
        roy.skills.validate().map_err(at("roy.skills"))?;
        roy.settings.validate().map_err(at("roy.settings"))?;
        let scenario = self.portfolio.scenario(self.seed).map_err(at("portfolio"))?;
        for (i, t) in roy.treatments.iter().enumerate() {
            t.apply(&scenario).map_err(at(&format!("roy.treatments[{i}]")))?;
        }

        self.estimate.rule.validate().map_err(at("estimate.rule"))?;
        for (id, w) in self.estimate.weights()? {
            lastmile_core::error::positive("weight", w).map_err(|e| CliError::Invalid {
                path: format!("estimate.index_weights.{id}"),
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn sorting(&self, seed: u64) -> Result<SortingScenario, CliError> {
        Ok(SortingScenario {
            scenario: self.portfolio.scenario(seed).map_err(at("portfolio"))?,
            workers: self.roy.workers,
            skills: self.roy.skills.clone(),
            roy: self.roy.settings,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("configuration serializes to TOML")
    }
}
