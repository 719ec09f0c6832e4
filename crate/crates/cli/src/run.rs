//! Subcommand pipelines. Each one renders every output in memory; nothing
//! touches the filesystem until the whole computation has succeeded.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use lastmile_core::baseline::{comparative_statics, simulate_transition, steady_state};
use lastmile_core::calibration::{histogram, sample_shares, share_bounds, summarize};
use lastmile_core::estimators::{
    count_births, detect_degradation, estimate_hazard_decomposition, indices, MaturityPanel,
    PanelRecord, PANEL_HEADER,
};
use lastmile_core::portfolio::{allocate_labor, run_portfolio_scenario, TaskFamily};
use lastmile_core::roy::{
    dispersion_experiment, solve_roy, sort_at_labor, wage_stats, RoyEquilibrium, WorkerSkillMatrix,
};
use serde::Serialize;

use crate::config::{PriceTiming, ScenarioConfig};
use crate::error::CliError;
use crate::output::{render_tables, to_json, Cell, OutputFile, OutputFormat, Table};

pub const PATH_HEADER: [&str; 7] = ["t", "k", "L_S", "L_U", "Y", "w_U", "w_S"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    SteadyState,
    Calibrate,
    Simulate,
    Portfolio,
    Roy,
    Estimate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SteadyState => "steady-state",
            Command::Calibrate => "calibrate",
            Command::Simulate => "simulate",
            Command::Portfolio => "portfolio",
            Command::Roy => "roy",
            Command::Estimate => "estimate",
        }
    }
}

/// Everything a run produces, before it is written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub files: Vec<OutputFile>,
    /// One-line human summary for stdout.
    pub headline: String,
}

#[derive(Serialize)]
struct Summary<'a, T: Serialize> {
    command: &'a str,
    seed: u64,
    #[serde(flatten)]
    body: T,
}

fn finish<T: Serialize>(cmd: Command, seed: u64, body: T, tables: Vec<Table>, format: OutputFormat, headline: String) -> RunOutput {
    let mut files = vec![OutputFile {
        name: "summary.json".into(),
        bytes: to_json(&Summary { command: cmd.name(), seed, body }),
    }];
    files.extend(render_tables(&tables, format));
    RunOutput { files, headline }
}

pub fn execute(cmd: Command, cfg: &ScenarioConfig, format: OutputFormat) -> Result<RunOutput, CliError> {
    let mut out = match cmd {
        Command::SteadyState => steady_state_cmd(cfg, format),
        Command::Simulate => simulate_cmd(cfg, format),
        Command::Calibrate => calibrate_cmd(cfg, format),
        Command::Portfolio => portfolio_cmd(cfg, format),
        Command::Roy => roy_cmd(cfg, format),
        Command::Estimate => estimate_cmd(cfg, format),
    }?;
    out.files.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

fn steady_state_cmd(cfg: &ScenarioConfig, format: OutputFormat) -> Result<RunOutput, CliError> {
    let p = &cfg.baseline()?;
    let ss = steady_state(p);
    let cs = comparative_statics(p);

    #[derive(Serialize)]
    struct Body<'a> {
        params: &'a lastmile_core::baseline::BaselineParams,
        steady_state: lastmile_core::baseline::SteadyState,
        comparative_statics: lastmile_core::baseline::ComparativeStatics,
        wage_gap: f64,
    }

    let mut t = Table::new(
        "steady_state",
        &["s_star", "k_star", "L_S", "L_U", "w_U", "v", "Y", "ds_dgamma", "ds_dr", "ds_ddelta"],
    );
    t.push(vec![
        ss.s_star.into(),
        ss.k_star.into(),
        ss.structured.into(),
        ss.unstructured.into(),
        ss.wage.into(),
        ss.shadow_value.into(),
        ss.output.into(),
        cs.ds_dgamma.into(),
        cs.ds_dr.into(),
        cs.ds_ddelta.into(),
    ]);
    let headline = format!("s* = {:.6}  k* = {:.6}", ss.s_star, ss.k_star);
    let body = Body { params: p, steady_state: ss, comparative_statics: cs, wage_gap: ss.wage_gap(p) };
    Ok(finish(Command::SteadyState, cfg.seed, body, vec![t], format, headline))
}

fn simulate_cmd(cfg: &ScenarioConfig, format: OutputFormat) -> Result<RunOutput, CliError> {
    let p = &cfg.baseline()?;
    let ss = steady_state(p);
    let k0 = cfg.transition.k0.unwrap_or(0.5 * ss.k_star);
    let path = simulate_transition(p, k0, cfg.transition.structured0, &cfg.transition.settings())?;
    let last = *path.records.last().expect("a path has at least one record");

    let mut t = Table::new("path", &PATH_HEADER);
    for r in &path.records {
        t.push(vec![
            r.t.into(),
            r.k.into(),
            r.structured.into(),
            r.unstructured.into(),
            r.output.into(),
            r.wage_unstructured.into(),
            r.wage_structured.into(),
        ]);
    }

    #[derive(Serialize)]
    struct Body {
        k0: f64,
        structured0: f64,
        damping: f64,
        converged: bool,
        periods_to_converge: Option<u64>,
        final_k: f64,
        final_share: f64,
        s_star: f64,
        k_star: f64,
        share_rel_error: f64,
        k_rel_error: f64,
    }
    let final_share = last.structured / p.labor();
    let body = Body {
        k0,
        structured0: cfg.transition.structured0,
        damping: path.damping,
        converged: path.converged,
        periods_to_converge: path.periods_to_converge,
        final_k: last.k,
        final_share,
        s_star: ss.s_star,
        k_star: ss.k_star,
        share_rel_error: (final_share - ss.s_star).abs() / ss.s_star,
        k_rel_error: (last.k - ss.k_star).abs() / ss.k_star,
    };
    let headline = format!(
        "{} after {} periods: s = {:.6} (s* = {:.6})",
        if path.converged { "converged" } else { "not converged" },
        path.records.len() - 1,
        final_share,
        ss.s_star
    );
    Ok(finish(Command::Simulate, cfg.seed, body, vec![t], format, headline))
}

fn calibrate_cmd(cfg: &ScenarioConfig, format: OutputFormat) -> Result<RunOutput, CliError> {
    let priors = cfg.calibration.priors(cfg.seed);
    let shares = sample_shares(&priors)?;
    let result = summarize(&shares, cfg.seed)?;
    let bounds = share_bounds(&priors)?;

    let bins = cfg.calibration.histogram_bins;
    let counts = histogram(&shares, bounds.min, bounds.max, bins);
    let width = (bounds.max - bounds.min) / bins as f64;
    let mut t = Table::new("histogram", &["bin_lo", "bin_hi", "count"]);
    for (i, &c) in counts.iter().enumerate() {
        let lo = bounds.min + width * i as f64;
        let hi = if i + 1 == bins { bounds.max } else { bounds.min + width * (i + 1) as f64 };
        t.push(vec![lo.into(), hi.into(), c.into()]);
    }

    #[derive(Serialize)]
    struct Body<'a> {
        priors: &'a crate::config::CalibrationConfig,
        result: lastmile_core::calibration::CalibrationResult,
        analytic_bounds: lastmile_core::calibration::ShareBounds,
    }
    let headline = format!(
        "mean {:.4}%  median {:.4}%  sd {:.4}pp  [{:.3}%, {:.3}%] over {} draws",
        100.0 * result.mean,
        100.0 * result.median,
        100.0 * result.std_dev,
        100.0 * result.quantiles.p2_5,
        100.0 * result.quantiles.p97_5,
        result.n_draws
    );
    let body = Body { priors: &cfg.calibration, result, analytic_bounds: bounds };
    Ok(finish(Command::Calibrate, cfg.seed, body, vec![t], format, headline))
}

pub fn panel_table(records: &[PanelRecord]) -> Table {
    let mut t = Table::new("panel", &PANEL_HEADER);
    for r in records {
        t.push(vec![
            r.family_id.into(),
            r.period.into(),
            r.maturity.into(),
            r.labor.into(),
            r.effective_weight.into(),
            r.tech_window.into(),
            r.org_window.into(),
        ]);
    }
    t
}

fn births_table(births: &[u64]) -> Table {
    let mut t = Table::new("births", &["period", "births"]);
    for (p, &b) in births.iter().enumerate() {
        t.push(vec![(p as u64).into(), b.into()]);
    }
    t
}

fn portfolio_cmd(cfg: &ScenarioConfig, format: OutputFormat) -> Result<RunOutput, CliError> {
    let spec = cfg.portfolio.scenario(cfg.seed)?;
    let run = run_portfolio_scenario(&spec)?;

    let mut periods = Table::new(
        "periods",
        &["t", "aggregate", "structured", "share", "families", "births", "max_kkt_residual"],
    );
    for s in &run.summary {
        periods.push(vec![
            s.t.into(),
            s.aggregate.into(),
            s.structured.into(),
            s.share.into(),
            s.families.into(),
            s.births.into(),
            s.max_kkt_residual.into(),
        ]);
    }
    let mut families = Table::new("families", &["family_id", "born_at", "omega", "delta", "initial_maturity"]);
    for f in &run.registry {
        families.push(vec![f.id.into(), f.born_at.into(), f.omega.into(), f.delta.into(), f.maturity.into()]);
    }
    let births = count_births(&run.registry, spec.periods)?;

    #[derive(Serialize)]
    struct Body {
        periods: u64,
        initial_families: usize,
        final_families: usize,
        total_births: u64,
        final_share: f64,
        final_aggregate: f64,
        max_kkt_residual: f64,
    }
    let last = run.summary.last().expect("at least one period");
    let body = Body {
        periods: spec.periods,
        initial_families: spec.initial.len(),
        final_families: run.final_portfolio.len(),
        total_births: run.summary.iter().map(|s| s.births).sum(),
        final_share: last.share,
        final_aggregate: last.aggregate,
        max_kkt_residual: run.summary.iter().map(|s| s.max_kkt_residual).fold(0.0, f64::max),
    };
    let headline = format!(
        "{} periods, {} -> {} families, final share {:.6}",
        body.periods, body.initial_families, body.final_families, body.final_share
    );
    let tables = vec![panel_table(run.panel.records()), periods, families, births_table(&births)];
    Ok(finish(Command::Portfolio, cfg.seed, body, tables, format, headline))
}

fn roy_cmd(cfg: &ScenarioConfig, format: OutputFormat) -> Result<RunOutput, CliError> {
    let sorting = cfg.sorting(cfg.seed)?;
    let run = run_portfolio_scenario(&sorting.scenario)?;
    let portfolio = run.final_portfolio;
    let skills = WorkerSkillMatrix::generate(&sorting.skills, sorting.workers, portfolio.families(), cfg.seed)?;
    let eq: RoyEquilibrium = match cfg.roy.prices {
        PriceTiming::FixedPoint => solve_roy(&skills, &portfolio, &sorting.roy)?,
        PriceTiming::Allocator => {
            let last = sorting.scenario.periods - 1;
            let alloc = allocate_labor(&portfolio, sorting.scenario.budget.at(last))?;
            let total: f64 = alloc.labor.iter().sum();
            let scale = if total > 0.0 { sorting.workers as f64 / total } else { 0.0 };
            let labor: Vec<f64> = alloc.labor.iter().map(|l| l * scale).collect();
            sort_at_labor(&skills, &portfolio, &labor, sorting.roy.labor_floor)?
        }
    };
    let stats = wage_stats(&eq)?;

    let mut assignment = Table::new("assignment", &["worker", "family_id", "skill", "price", "wage"]);
    for (i, (&j, &w)) in eq.assignment.iter().zip(&eq.wages).enumerate() {
        assignment.push(vec![
            (i as u64).into(),
            eq.family_ids[j].into(),
            skills.row(i)[j].into(),
            eq.prices[j].into(),
            w.into(),
        ]);
    }
    let mut fams = Table::new("roy_families", &["family_id", "maturity", "workers", "price"]);
    for (j, f) in portfolio.families().iter().enumerate() {
        fams.push(vec![f.id.into(), f.maturity.into(), eq.labor[j].into(), eq.prices[j].into()]);
    }

    let mut experiment = Table::new(
        "experiment",
        &[
            "treatment",
            "multiplier",
            "replication",
            "seed",
            "base_log_variance",
            "treated_log_variance",
            "diff",
            "base_converged",
            "treated_converged",
        ],
    );
    #[derive(Serialize)]
    struct ExperimentSummary {
        treatment: lastmile_core::roy::Treatment,
        replications: usize,
        strictly_higher: usize,
        mean_log_variance_diff: f64,
    }
    let mut experiments = Vec::new();
    if cfg.roy.replications > 0 {
        for &treatment in &cfg.roy.treatments {
            let res = dispersion_experiment(&sorting, treatment, cfg.roy.replications, cfg.seed)?;
            let (name, m) = match treatment {
                lastmile_core::roy::Treatment::Entry(m) => ("entry", m),
                lastmile_core::roy::Treatment::Drift(m) => ("drift", m),
            };
            for (r, rep) in res.replications.iter().enumerate() {
                experiment.push(vec![
                    Cell::Text(name.into()),
                    m.into(),
                    (r as u64).into(),
                    rep.seed.into(),
                    rep.base.stats.log_wage_variance.into(),
                    rep.treated.stats.log_wage_variance.into(),
                    rep.log_variance_diff.into(),
                    rep.base.converged.into(),
                    rep.treated.converged.into(),
                ]);
            }
            experiments.push(ExperimentSummary {
                treatment,
                replications: res.replications.len(),
                strictly_higher: res.strictly_higher,
                mean_log_variance_diff: res.mean_log_variance_diff,
            });
        }
    }

    #[derive(Serialize)]
    struct Body {
        prices: PriceTiming,
        workers: usize,
        families: usize,
        converged: bool,
        iterations: usize,
        residual: f64,
        dispersion: lastmile_core::roy::DispersionStats,
        experiments: Vec<ExperimentSummary>,
    }
    let mut headline = format!(
        "{} workers over {} families, log-wage variance {:.6} ({})",
        sorting.workers,
        portfolio.len(),
        stats.log_wage_variance,
        if eq.converged { "converged" } else { "not converged" }
    );
    for e in &experiments {
        headline.push_str(&format!("; {:?}: {}/{} higher", e.treatment, e.strictly_higher, e.replications));
    }
    let body = Body {
        prices: cfg.roy.prices,
        workers: sorting.workers,
        families: portfolio.len(),
        converged: eq.converged,
        iterations: eq.iterations,
        residual: eq.residual,
        dispersion: stats,
        experiments,
    };
    let mut tables = vec![assignment, fams];
    if cfg.roy.replications > 0 {
        tables.push(experiment);
    }
    Ok(finish(Command::Roy, cfg.seed, body, tables, format, headline))
}

/// Reads a panel in the contractual CSV schema. Window flags accept `0/1`
/// or `true/false`.
pub fn read_panel(path: &Path) -> Result<MaturityPanel, CliError> {
    let io = |e: std::io::Error| CliError::Io { path: path.to_path_buf(), source: e };
    let file = std::fs::File::open(path).map_err(io)?;
    let mut rdr = csv::Reader::from_reader(file);
    let bad = |line: u64, msg: String| CliError::Invalid {
        path: format!("{}:{line}", path.display()),
        message: msg,
    };
    let header = rdr.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if header.iter().ne(PANEL_HEADER.iter().copied()) {
        return Err(bad(1, format!("expected header {}", PANEL_HEADER.join(","))));
    }
    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| bad(line, e.to_string()))?;
        let int = |c: usize| row[c].trim().parse::<u64>().map_err(|_| bad(line, format!("{}: expected an integer", PANEL_HEADER[c])));
        let float = |c: usize| row[c].trim().parse::<f64>().map_err(|_| bad(line, format!("{}: expected a number", PANEL_HEADER[c])));
        let flag = |c: usize| match row[c].trim() {
            "1" | "true" => Ok(true),
            "0" | "false" => Ok(false),
            _ => Err(bad(line, format!("{}: expected 0/1 or true/false", PANEL_HEADER[c]))),
        };
        records.push(PanelRecord {
            family_id: int(0)?,
            period: int(1)?,
            maturity: float(2)?,
            labor: float(3)?,
            effective_weight: float(4)?,
            tech_window: flag(5)?,
            org_window: flag(6)?,
        });
    }
    MaturityPanel::new(records).map_err(|e| bad(0, e.to_string()))
}

fn estimate_cmd(cfg: &ScenarioConfig, format: OutputFormat) -> Result<RunOutput, CliError> {
    // A simulated panel comes with its registry; an external one is assumed
    // to start observing each family in its birth period.
    let (panel, registry, source) = match &cfg.estimate.panel {
        Some(path) => {
            let panel = read_panel(path)?;
            let mut first: BTreeMap<u64, u64> = BTreeMap::new();
            for r in panel.records() {
                let e = first.entry(r.family_id).or_insert(r.period);
                *e = (*e).min(r.period);
            }
            let registry: Vec<TaskFamily> = first
                .into_iter()
                .map(|(id, born_at)| TaskFamily { id, omega: 1.0, delta: 0.5, maturity: 0.0, born_at })
                .collect();
            (panel, registry, path.display().to_string())
        }
        None => {
            let run = run_portfolio_scenario(&cfg.portfolio.scenario(cfg.seed)?)?;
            (run.panel, run.registry, "simulated".to_string())
        }
    };

    let flags = detect_degradation(&panel, &cfg.estimate.rule)?;
    let estimate = estimate_hazard_decomposition(&flags)?;
    let last = panel.last_period().unwrap_or(0);
    let births = count_births(&registry, last)?;

    let fixed = cfg.estimate.weights()?;
    let mut index = Table::new("indices", &["period", "maturity_index", "structured_share", "missing"]);
    let periods: BTreeSet<u64> = panel.records().iter().map(|r| r.period).collect();
    for &t in &periods {
        let weights = if fixed.is_empty() {
            panel.records().iter().filter(|r| r.period == t).map(|r| (r.family_id, 1.0)).collect()
        } else {
            fixed.clone()
        };
        let ix = indices(&panel, t, &weights, cfg.portfolio.labor_endowment)?;
        index.push(vec![t.into(), ix.maturity_index.into(), ix.structured_share.into(), ix.missing.into()]);
    }

    let mut cells = Table::new("cells", &["tech_window", "org_window", "observations", "events", "empirical", "fitted"]);
    for c in &estimate.cells {
        cells.push(vec![
            c.tech_window.into(),
            c.org_window.into(),
            c.observations.into(),
            c.events.into(),
            c.empirical.into(),
            c.fitted.into(),
        ]);
    }

    #[derive(Serialize)]
    struct Body {
        source: String,
        rule: lastmile_core::estimators::DegradationRule,
        estimate: lastmile_core::estimators::HazardEstimate,
        total_births: u64,
    }
    let headline = format!(
        "delta_hat {} (env {}, tech {}, org {}) from {} family-periods",
        show(estimate.delta_hat),
        show(estimate.delta_env),
        show(estimate.delta_tech),
        show(estimate.delta_org),
        estimate.observations
    );
    let total_births = births.iter().skip(1).sum();
    let body = Body { source, rule: cfg.estimate.rule, estimate, total_births };
    Ok(finish(Command::Estimate, cfg.seed, body, vec![cells, births_table(&births), index], format, headline))
}

fn show(x: Option<f64>) -> String {
    x.map_or_else(|| "absent".to_string(), |v| format!("{v:.4}"))
}
