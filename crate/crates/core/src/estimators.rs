//! Measurement on synthetic maturity panels: degradation detection, drift
//! hazard decomposition across event windows, birth counts and aggregate
//! indices.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{open_interval, positive, Error, Result};
use crate::portfolio::TaskFamily;

/// One family-period observation. Field order is the panel CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelRecord {
    pub family_id: u64,
    pub period: u64,
    pub maturity: f64,
    pub labor: f64,
    pub effective_weight: f64,
    pub tech_window: bool,
    pub org_window: bool,
}

pub const PANEL_HEADER: [&str; 7] = [
    "family_id",
    "period",
    "maturity",
    "labor",
    "effective_weight",
    "tech_window",
    "org_window",
];

/// Family × period panel, possibly unbalanced. `(family, period)` pairs are
/// unique and maturities non-negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PanelRecord>", into = "Vec<PanelRecord>")]
pub struct MaturityPanel {
    records: Vec<PanelRecord>,
}

impl TryFrom<Vec<PanelRecord>> for MaturityPanel {
    type Error = Error;
    fn try_from(records: Vec<PanelRecord>) -> Result<Self> {
        MaturityPanel::new(records)
    }
}

impl From<MaturityPanel> for Vec<PanelRecord> {
    fn from(p: MaturityPanel) -> Self {
        p.records
    }
}

impl MaturityPanel {
    pub fn new(records: Vec<PanelRecord>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if !(r.maturity.is_finite() && r.maturity >= 0.0) {
                return Err(Error::domain(
                    "maturity",
                    format!("maturity must be non-negative, got {} for family {} at {}", r.maturity, r.family_id, r.period),
                ));
            }
            if !seen.insert((r.family_id, r.period)) {
                return Err(Error::DuplicateRecord {
                    family: r.family_id,
                    period: r.period,
                });
            }
        }
        Ok(MaturityPanel { records })
    }

    pub fn records(&self) -> &[PanelRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Largest period present.
    pub fn last_period(&self) -> Option<u64> {
        self.records.iter().map(|r| r.period).max()
    }
}

/// Flags `(j, t)` when `k_{j,t+h} < (1 - threshold) k_{j,t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DegradationRule {
    pub threshold: f64,
    pub horizon: u64,
}

impl Default for DegradationRule {
    fn default() -> Self {
        DegradationRule {
            threshold: 0.2,
            horizon: 1,
        }
    }
}

impl DegradationRule {
    pub fn validate(&self) -> Result<()> {
        open_interval("threshold", self.threshold, 0.0, 1.0)?;
        if self.horizon < 1 {
            return Err(Error::domain("horizon", "horizon must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegradationFlag {
    pub family_id: u64,
    pub period: u64,
    pub degraded: bool,
    pub tech_window: bool,
    pub org_window: bool,
}

/// Degradation indicator for every record that has a `t + h` observation,
/// in panel order.
pub fn detect_degradation(panel: &MaturityPanel, rule: &DegradationRule) -> Result<Vec<DegradationFlag>> {
    rule.validate()?;
    if panel.is_empty() {
        return Err(Error::Empty("panel"));
    }
    let lookup: HashMap<(u64, u64), f64> = panel
        .records
        .iter()
        .map(|r| ((r.family_id, r.period), r.maturity))
        .collect();
    Ok(panel
        .records
        .iter()
        .filter_map(|r| {
            let later = *lookup.get(&(r.family_id, r.period + rule.horizon))?;
            Some(DegradationFlag {
                family_id: r.family_id,
                period: r.period,
                degraded: later < (1.0 - rule.threshold) * r.maturity,
                tech_window: r.tech_window,
                org_window: r.org_window,
            })
        })
        .collect())
}

/// One cell of the window cross `(tech, org)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardCell {
    pub tech_window: bool,
    pub org_window: bool,
    pub observations: u64,
    pub events: u64,
    pub empirical: f64,
    /// Fitted value of the linear-probability regression.
    pub fitted: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Components {
    pub env: Option<f64>,
    pub tech: Option<f64>,
    pub org: Option<f64>,
}

/// Drift hazard decomposition.
///
/// `delta_env` is the hazard outside both window types; `delta_tech` and
/// `delta_org` are average marginal effects of each window type, averaging
/// within-stratum differences over the distribution of the other flag.
/// Components are clipped at zero (unclipped values are kept in `raw`).
/// A window type that never occurs, or never varies against a comparable
/// stratum, is `None`.
///
/// `delta_hat = delta_env + f_tech·delta_tech + f_org·delta_org`, where `f`
/// is the share of observations inside each window type; it differs from
/// `empirical_rate` by the window interaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HazardEstimate {
    pub delta_hat: Option<f64>,
    pub delta_env: Option<f64>,
    pub delta_tech: Option<f64>,
    pub delta_org: Option<f64>,
    pub raw: Components,
    pub std_errors: Components,
    pub tech_window_share: f64,
    pub org_window_share: f64,
    pub empirical_rate: f64,
    pub observations: u64,
    pub cells: Vec<HazardCell>,
}

const CELLS: [(bool, bool); 4] = [(false, false), (true, false), (false, true), (true, true)];

fn design_row(tech: bool, org: bool) -> [f64; 4] {
    let (t, o) = (tech as u8 as f64, org as u8 as f64);
    [1.0, t, o, t * o]
}

/// Least squares of the indicator on `[1, T, O, T·O]` via the normal
/// equations. Columns that are linearly dependent on earlier ones (because
/// some cells are empty) are dropped by the pivoting.
fn saturated_fit(counts: &[(u64, u64); 4]) -> [f64; 4] {
    let mut xtx = [[0.0f64; 4]; 4];
    let mut xty = [0.0f64; 4];
    for (c, &(tech, org)) in CELLS.iter().enumerate() {
        let (n, e) = (counts[c].0 as f64, counts[c].1 as f64);
        let x = design_row(tech, org);
        for i in 0..4 {
            xty[i] += e * x[i];
            for j in 0..4 {
                xtx[i][j] += n * x[i] * x[j];
            }
        }
    }
    let beta = solve_dropping_dependent(xtx, xty);
    let mut fitted = [0.0; 4];
    for (c, &(tech, org)) in CELLS.iter().enumerate() {
        let x = design_row(tech, org);
        fitted[c] = (0..4).map(|i| x[i] * beta[i]).sum();
    }
    fitted
}

/// Gauss-Jordan elimination on a symmetric PSD system, zeroing the
/// coefficient of any column whose pivot vanishes.
fn solve_dropping_dependent(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> [f64; 4] {
    let scale = (0..4).map(|i| a[i][i]).fold(0.0, f64::max).max(1.0);
    let mut active = [false; 4];
    for col in 0..4 {
        if a[col][col].abs() <= 1e-9 * scale {
            continue;
        }
        active[col] = true;
        let p = a[col][col];
        for row in 0..4 {
            if row == col {
                continue;
            }
            let f = a[row][col] / p;
            if f == 0.0 {
                continue;
            }
            for k in 0..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut beta = [0.0; 4];
    for i in 0..4 {
        if active[i] {
            beta[i] = b[i] / a[i][i];
        }
    }
    beta
}

pub fn estimate_hazard_decomposition(flags: &[DegradationFlag]) -> Result<HazardEstimate> {
    if flags.is_empty() {
        return Err(Error::Empty("degradation indicators"));
    }
    let mut counts = [(0u64, 0u64); 4];
    for f in flags {
        let c = CELLS.iter().position(|&x| x == (f.tech_window, f.org_window)).unwrap();
        counts[c].0 += 1;
        counts[c].1 += f.degraded as u64;
    }
    let fitted = saturated_fit(&counts);
    let n_total = flags.len() as f64;
    let cells: Vec<HazardCell> = CELLS
        .iter()
        .enumerate()
        .map(|(c, &(tech_window, org_window))| {
            let (n, e) = counts[c];
            HazardCell {
                tech_window,
                org_window,
                observations: n,
                events: e,
                empirical: if n > 0 { e as f64 / n as f64 } else { f64::NAN },
                fitted: if n > 0 { fitted[c] } else { f64::NAN },
            }
        })
        .collect();

    let mean = |c: usize| (cells[c].observations > 0).then(|| cells[c].fitted);
    let var = |c: usize| {
        let m = cells[c].fitted;
        m * (1.0 - m) / cells[c].observations as f64
    };
    // Average marginal effect of switching one flag on, over strata of the
    // other flag: pairs are (cell off, cell on, stratum size).
    let effect = |pairs: [(usize, usize); 2]| -> Option<(f64, f64)> {
        let usable: Vec<(usize, usize, f64)> = pairs
            .iter()
            .filter(|&&(off, on)| cells[off].observations > 0 && cells[on].observations > 0)
            .map(|&(off, on)| (off, on, (cells[off].observations + cells[on].observations) as f64))
            .collect();
        let weight: f64 = usable.iter().map(|u| u.2).sum();
        if usable.is_empty() {
            return None;
        }
        let est = usable.iter().map(|&(off, on, w)| w / weight * (cells[on].fitted - cells[off].fitted)).sum();
        let v: f64 = usable.iter().map(|&(off, on, w)| (w / weight).powi(2) * (var(on) + var(off))).sum();
        Some((est, v.sqrt()))
    };

    let env = mean(0);
    // cells: 0 = (F,F), 1 = (T,F), 2 = (F,T), 3 = (T,T)
    let tech = effect([(0, 1), (2, 3)]);
    let org = effect([(0, 2), (1, 3)]);
    let share = |pred: fn(&DegradationFlag) -> bool| flags.iter().filter(|f| pred(f)).count() as f64 / n_total;
    let tech_window_share = share(|f| f.tech_window);
    let org_window_share = share(|f| f.org_window);

    let clip = |x: Option<f64>| x.map(|v| v.max(0.0));
    let (delta_env, delta_tech, delta_org) = (clip(env), clip(tech.map(|t| t.0)), clip(org.map(|o| o.0)));
    let delta_hat = delta_env.map(|e| {
        e + tech_window_share * delta_tech.unwrap_or(0.0) + org_window_share * delta_org.unwrap_or(0.0)
    });
    let events: u64 = counts.iter().map(|c| c.1).sum();
    Ok(HazardEstimate {
        delta_hat,
        delta_env,
        delta_tech,
        delta_org,
        raw: Components {
            env,
            tech: tech.map(|t| t.0),
            org: org.map(|o| o.0),
        },
        std_errors: Components {
            env: env.map(|_| var(0).sqrt()),
            tech: tech.map(|t| t.1),
            org: org.map(|o| o.1),
        },
        tech_window_share,
        org_window_share,
        empirical_rate: events as f64 / n_total,
        observations: flags.len() as u64,
        cells,
    })
}

/// Number of families born in each period `0..=last`, where `last` is the
/// larger of `through` and the latest birth period.
pub fn count_births(registry: &[TaskFamily], through: u64) -> Result<Vec<u64>> {
    if registry.is_empty() {
        return Err(Error::Empty("family registry"));
    }
    let last = registry.iter().map(|f| f.born_at).max().unwrap_or(0).max(through);
    let mut series = vec![0u64; last as usize + 1];
    let mut seen = HashSet::new();
    for f in registry {
        if seen.insert(f.id) {
            series[f.born_at as usize] += 1;
        }
    }
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexPoint {
    pub period: u64,
    /// `Σ ω_j k_j` over weighted families observed at the period.
    pub maturity_index: f64,
    /// Structured labor in the panel at the period over the endowment.
    pub structured_share: f64,
    /// Weighted families with no record at the period.
    pub missing: usize,
}

pub fn indices(
    panel: &MaturityPanel,
    period: u64,
    weights: &BTreeMap<u64, f64>,
    labor_endowment: f64,
) -> Result<IndexPoint> {
    positive("labor_endowment", labor_endowment)?;
    for &w in weights.values() {
        positive("index weight", w)?;
    }
    let at: Vec<&PanelRecord> = panel.records.iter().filter(|r| r.period == period).collect();
    let present: HashMap<u64, f64> = at.iter().map(|r| (r.family_id, r.maturity)).collect();
    let mut maturity_index = 0.0;
    let mut missing = 0;
    for (id, w) in weights {
        match present.get(id) {
            Some(k) => maturity_index += w * k,
            None => missing += 1,
        }
    }
    let structured: f64 = at.iter().map(|r| r.labor).sum();
    let structured_share = structured / labor_endowment;
    if structured_share > 1.0 {
        return Err(Error::domain(
            "labor",
            format!("structured labor {structured} exceeds the endowment {labor_endowment} at period {period}"),
        ));
    }
    Ok(IndexPoint {
        period,
        maturity_index,
        structured_share,
        missing,
    })
}
