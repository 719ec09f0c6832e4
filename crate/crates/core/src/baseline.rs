//! Two-sector baseline economy.
//!
//! Unstructured labor `L_U` produces output `Y = Ā k^γ K^α L_U^(1-α)`;
//! structured labor `L_S` accumulates the capability stock
//! `k' = (1 - δ_k) k + η L_S`. Workers move freely between the sectors, so
//! in an interior allocation the structured wage `η v` equals the
//! unstructured wage, where `v = (∂Y/∂k) / (r + δ_k)` is the shadow value of
//! capability.

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, open_interval, positive, Error, Result};

/// Parameter vector of the baseline economy. Constructed only through
/// [`BaselineParams::new`], which enforces every bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBaselineParams", into = "RawBaselineParams")]
pub struct BaselineParams {
    alpha: f64,
    gamma: f64,
    r: f64,
    delta_k: f64,
    eta: f64,
    a_bar: f64,
    capital: f64,
    labor: f64,
}

/// Unvalidated mirror of [`BaselineParams`] used for (de)serialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawBaselineParams {
    pub alpha: f64,
    pub gamma: f64,
    pub r: f64,
    pub delta_k: f64,
    pub eta: f64,
    pub a_bar: f64,
    pub capital: f64,
    pub labor: f64,
}

impl Default for RawBaselineParams {
    fn default() -> Self {
        BaselineParams::default().into()
    }
}

impl TryFrom<RawBaselineParams> for BaselineParams {
    type Error = Error;

    fn try_from(p: RawBaselineParams) -> Result<Self> {
        BaselineParams::new(
            p.alpha, p.gamma, p.r, p.delta_k, p.eta, p.a_bar, p.capital, p.labor,
        )
    }
}

impl From<BaselineParams> for RawBaselineParams {
    fn from(p: BaselineParams) -> Self {
        RawBaselineParams {
            alpha: p.alpha,
            gamma: p.gamma,
            r: p.r,
            delta_k: p.delta_k,
            eta: p.eta,
            a_bar: p.a_bar,
            capital: p.capital,
            labor: p.labor,
        }
    }
}

impl Default for BaselineParams {
    /// Midpoint-style benchmark: α = 0.36, γ = 0.05, r = 0.04, δ_k = 0.15,
    /// η = 0.2 and unit scale for Ā, K and L̄.
    fn default() -> Self {
        BaselineParams {
            alpha: 0.36,
            gamma: 0.05,
            r: 0.04,
            delta_k: 0.15,
            eta: 0.2,
            a_bar: 1.0,
            capital: 1.0,
            labor: 1.0,
        }
    }
}

impl BaselineParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        gamma: f64,
        r: f64,
        delta_k: f64,
        eta: f64,
        a_bar: f64,
        capital: f64,
        labor: f64,
    ) -> Result<Self> {
        Ok(BaselineParams {
            alpha: open_interval("alpha", alpha, 0.0, 1.0)?,
            gamma: open_interval("gamma", gamma, 0.0, 1.0)?,
            r: positive("r", r)?,
            delta_k: open_interval("delta_k", delta_k, 0.0, 1.0)?,
            eta: positive("eta", eta)?,
            a_bar: positive("a_bar", a_bar)?,
            capital: positive("capital", capital)?,
            labor: positive("labor", labor)?,
        })
    }

    /// Share parameters only; η, Ā, K and L̄ are set to one.
    pub fn from_shares(alpha: f64, gamma: f64, r: f64, delta_k: f64) -> Result<Self> {
        Self::new(alpha, gamma, r, delta_k, 1.0, 1.0, 1.0, 1.0)
    }

    pub fn with_eta(self, eta: f64) -> Result<Self> {
        Self::new(
            self.alpha, self.gamma, self.r, self.delta_k, eta, self.a_bar, self.capital, self.labor,
        )
    }

    pub fn with_labor(self, labor: f64) -> Result<Self> {
        Self::new(
            self.alpha, self.gamma, self.r, self.delta_k, self.eta, self.a_bar, self.capital, labor,
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn delta_k(&self) -> f64 {
        self.delta_k
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn a_bar(&self) -> f64 {
        self.a_bar
    }
    pub fn capital(&self) -> f64 {
        self.capital
    }
    pub fn labor(&self) -> f64 {
        self.labor
    }

    /// `c = (1-α)(r+δ_k) / (ηγ)`: unstructured labor per unit of capability
    /// under wage equalization with the steady-state shadow value.
    pub fn labor_per_capability(&self) -> f64 {
        (1.0 - self.alpha) * (self.r + self.delta_k) / (self.eta * self.gamma)
    }

    fn tfp(&self, k: f64) -> f64 {
        self.a_bar * k.powf(self.gamma) * self.capital.powf(self.alpha)
    }
}

/// One period of the economy. `structured + unstructured = L̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconomyState {
    pub t: u64,
    pub k: f64,
    pub structured: f64,
    pub unstructured: f64,
}

impl EconomyState {
    pub fn new(params: &BaselineParams, t: u64, k: f64, structured: f64) -> Result<Self> {
        positive("k", k)?;
        non_negative("structured labor", structured)?;
        if structured > params.labor {
            return Err(Error::domain(
                "structured labor",
                format!("structured labor {structured} exceeds the endowment {}", params.labor),
            ));
        }
        Ok(EconomyState {
            t,
            k,
            structured,
            unstructured: params.labor - structured,
        })
    }
}

/// Output `Ā k^γ K^α L_U^(1-α)`.
pub fn output(params: &BaselineParams, k: f64, unstructured: f64) -> Result<f64> {
    positive("k", k)?;
    non_negative("unstructured labor", unstructured)?;
    Ok(params.tfp(k) * unstructured.powf(1.0 - params.alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marginals {
    /// Marginal product of unstructured labor.
    pub wage_unstructured: f64,
    /// ∂Y/∂k.
    pub output_per_capability: f64,
    /// Present value of a unit of capability, `(∂Y/∂k) / (r + δ_k)`.
    pub shadow_value: f64,
}

pub fn marginals(params: &BaselineParams, k: f64, unstructured: f64) -> Result<Marginals> {
    let y = output(params, k, unstructured)?;
    if unstructured == 0.0 {
        return Err(Error::domain(
            "unstructured labor",
            "wage is undefined at zero unstructured labor",
        ));
    }
    let dy_dk = params.gamma * y / k;
    Ok(Marginals {
        wage_unstructured: (1.0 - params.alpha) * y / unstructured,
        output_per_capability: dy_dk,
        shadow_value: dy_dk / (params.r + params.delta_k),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub s_star: f64,
    pub structured: f64,
    pub unstructured: f64,
    pub k_star: f64,
    pub wage: f64,
    pub shadow_value: f64,
    pub output: f64,
}

impl SteadyState {
    /// `|η v - w_U| / w_U` at the steady state.
    pub fn wage_gap(&self, params: &BaselineParams) -> f64 {
        (params.eta * self.shadow_value - self.wage).abs() / self.wage
    }
}

/// Structured labor share `γδ_k / (γδ_k + (1-α)(r+δ_k))`.
pub fn structured_share(alpha: f64, gamma: f64, r: f64, delta_k: f64) -> f64 {
    let maintenance = gamma * delta_k;
    maintenance / (maintenance + (1.0 - alpha) * (r + delta_k))
}

pub fn steady_state(params: &BaselineParams) -> SteadyState {
    let s = structured_share(params.alpha, params.gamma, params.r, params.delta_k);
    let structured = s * params.labor;
    let unstructured = params.labor - structured;
    let k = params.eta / params.delta_k * structured;
    // Interior by construction: s in (0,1), so k > 0 and L_U > 0.
    let m = marginals(params, k, unstructured).expect("interior steady state");
    SteadyState {
        s_star: s,
        structured,
        unstructured,
        k_star: k,
        wage: m.wage_unstructured,
        shadow_value: m.shadow_value,
        output: output(params, k, unstructured).expect("interior steady state"),
    }
}

/// Analytic partial derivatives of the steady-state share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparativeStatics {
    pub ds_dgamma: f64,
    pub ds_dr: f64,
    pub ds_ddelta: f64,
}

pub fn comparative_statics(params: &BaselineParams) -> ComparativeStatics {
    let (alpha, gamma, r, delta) = (params.alpha, params.gamma, params.r, params.delta_k);
    let wedge = (1.0 - alpha) * (r + delta);
    let denom = gamma * delta + wedge;
    let d2 = denom * denom;
    ComparativeStatics {
        ds_dgamma: delta * wedge / d2,
        ds_dr: -gamma * delta * (1.0 - alpha) / d2,
        ds_ddelta: gamma * (1.0 - alpha) * r / d2,
    }
}

/// One record of a transition path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub t: u64,
    pub k: f64,
    pub structured: f64,
    pub unstructured: f64,
    pub output: f64,
    pub wage_unstructured: f64,
    pub wage_structured: f64,
    pub shadow_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionPath {
    pub records: Vec<PathRecord>,
    pub damping: f64,
    pub converged: bool,
    pub periods_to_converge: Option<u64>,
}

/// Default labor damping `min(1, 0.9 (2 - δ_k) / (η c))`.
///
/// The linearised map in `(k_t, L_S,t-1)` has determinant
/// `(1-δ_k)(1-λ)` and trace `2 - δ_k - λ - ηcλ`; this choice keeps both
/// eigenvalues inside the unit circle for every valid parameter vector.
pub fn default_damping(params: &BaselineParams) -> f64 {
    let gain = params.eta * params.labor_per_capability();
    (0.9 * (2.0 - params.delta_k) / gain).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransitionSettings {
    pub periods: u64,
    /// `None` selects [`default_damping`].
    pub damping: Option<f64>,
    /// Relative tolerance on both `s_t` and `k_t`.
    pub tolerance: f64,
}

impl Default for TransitionSettings {
    fn default() -> Self {
        TransitionSettings {
            periods: 10_000,
            damping: None,
            tolerance: 1e-10,
        }
    }
}

fn path_record(params: &BaselineParams, state: &EconomyState) -> PathRecord {
    let (k, lu) = (state.k, state.unstructured);
    let y = params.tfp(k) * lu.powf(1.0 - params.alpha);
    // Direct form of the marginal product so a corner with L_U = 0 reports
    // an infinite wage rather than 0/0.
    let wage_u = (1.0 - params.alpha) * params.tfp(k) * lu.powf(-params.alpha);
    let v = params.gamma * y / k / (params.r + params.delta_k);
    PathRecord {
        t: state.t,
        k,
        structured: state.structured,
        unstructured: lu,
        output: y,
        wage_unstructured: wage_u,
        wage_structured: params.eta * v,
        shadow_value: v,
    }
}

/// Simulates the economy from `(k0, L_S0)` under quasi-static wage
/// equalization with damped labor adjustment:
///
/// ```text
/// L_S,t   = (1-λ) L_S,t-1 + λ clamp(L̄ - c k_t, 0, L̄)      (t ≥ 1)
/// k_t+1   = (1-δ_k) k_t + η L_S,t
/// ```
///
/// The path stops at the first period whose share and capability are both
/// within `tolerance` (relative) of the steady state.
pub fn simulate_transition(
    params: &BaselineParams,
    k0: f64,
    structured0: f64,
    settings: &TransitionSettings,
) -> Result<TransitionPath> {
    if settings.periods < 1 {
        return Err(Error::domain("periods", "periods must be at least 1"));
    }
    let damping = match settings.damping {
        Some(l) => open_interval("damping", l, 0.0, 1.0 + f64::EPSILON).map(|l| l.min(1.0))?,
        None => default_damping(params),
    };
    non_negative("tolerance", settings.tolerance)?;
    let ss = steady_state(params);
    let c = params.labor_per_capability();
    let lbar = params.labor;

    let mut state = EconomyState::new(params, 0, k0, structured0)?;
    let mut records = Vec::new();
    let close = |s: &EconomyState| {
        let share_err = (s.structured / lbar - ss.s_star).abs() / ss.s_star;
        let k_err = (s.k - ss.k_star).abs() / ss.k_star;
        share_err <= settings.tolerance && k_err <= settings.tolerance
    };

    loop {
        records.push(path_record(params, &state));
        if close(&state) {
            return Ok(TransitionPath {
                records,
                damping,
                converged: true,
                periods_to_converge: Some(state.t),
            });
        }
        if state.t + 1 >= settings.periods {
            break;
        }
        let k_next = (1.0 - params.delta_k) * state.k + params.eta * state.structured;
        let target = (lbar - c * k_next).clamp(0.0, lbar);
        let structured = ((1.0 - damping) * state.structured + damping * target).clamp(0.0, lbar);
        state = EconomyState {
            t: state.t + 1,
            k: k_next,
            structured,
            unstructured: lbar - structured,
        };
    }
    Ok(TransitionPath {
        records,
        damping,
        converged: false,
        periods_to_converge: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_scale() -> BaselineParams {
        BaselineParams::from_shares(0.36, 0.05, 0.04, 0.15).unwrap()
    }

    #[test]
    fn output_identity_and_zero_labor() {
        let p = unit_scale();
        assert_eq!(output(&p, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(output(&p, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn output_reference_value() {
        // 40-digit evaluation of 2^0.05 * 0.9^0.64
        let y = output(&unit_scale(), 2.0, 0.9).unwrap();
        assert!((y - 0.967_757_856_740_623_9).abs() < 1e-14, "{y}");
    }

    #[test]
    fn output_rejects_bad_inputs() {
        let p = unit_scale();
        assert!(output(&p, -1.0, 1.0).is_err());
        assert!(output(&p, 1.0, -0.1).is_err());
        assert!(output(&p, f64::NAN, 1.0).is_err());
        assert!(output(&p, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn labor_share_identity() {
        let p = unit_scale();
        for &(k, lu) in &[(0.3, 0.2), (2.0, 0.9), (10.0, 3.0)] {
            let m = marginals(&p, k, lu).unwrap();
            let y = output(&p, k, lu).unwrap();
            assert!((m.wage_unstructured * lu / y - 0.64).abs() < 1e-14);
        }
    }

    #[test]
    fn wage_matches_high_precision_derivative() {
        let m = marginals(&unit_scale(), 2.0, 0.9).unwrap();
        assert!((m.wage_unstructured - 0.688_183_364_793_332_6).abs() < 1e-14);
    }

    #[test]
    fn unit_discounting_gives_shadow_value_equal_to_marginal() {
        let p = BaselineParams::from_shares(0.36, 0.05, 0.85, 0.15).unwrap();
        let m = marginals(&p, 1.7, 0.4).unwrap();
        assert_eq!(m.shadow_value, m.output_per_capability);
    }

    #[test]
    fn zero_unstructured_labor_has_no_wage() {
        assert!(matches!(
            marginals(&unit_scale(), 1.0, 0.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn symmetric_parameters_split_labor_evenly() {
        let p = BaselineParams::from_shares(0.5, 0.75, 0.05, 0.1).unwrap();
        assert!((steady_state(&p).s_star - 0.5).abs() < 1e-15);
    }

    #[test]
    fn benchmark_steady_state() {
        let p = BaselineParams::default();
        let ss = steady_state(&p);
        // Frozen from a 40-digit bisection on the wage-equalization condition.
        assert!((ss.s_star - 0.058_094_500_387_296_67).abs() < 1e-15);
        assert!((ss.k_star - 0.077_459_333_849_728_89).abs() < 1e-15);
        assert!(ss.wage_gap(&p) < 1e-12);
        assert!((p.delta_k() * ss.k_star - p.eta() * ss.structured).abs() < 1e-15);
    }

    #[test]
    fn benchmark_gamma_partial() {
        let cs = comparative_statics(&unit_scale());
        assert!((cs.ds_dgamma - 1.094_390_588_242_418_5).abs() < 1e-6);
    }

    #[test]
    fn share_vanishes_as_discount_rate_grows() {
        let mut last = 1.0;
        for r in [0.1, 1.0, 10.0, 100.0, 1e4] {
            let s = structured_share(0.36, 0.05, r, 0.15);
            assert!(s < last);
            last = s;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn gamma_bounds_are_enforced() {
        let err = BaselineParams::from_shares(0.36, 1.5, 0.04, 0.15).unwrap_err();
        assert!(err.to_string().contains("gamma must lie in (0,1)"));
        assert!(BaselineParams::from_shares(0.0, 0.05, 0.04, 0.15).is_err());
        assert!(BaselineParams::from_shares(0.36, 0.05, 0.0, 0.15).is_err());
        assert!(BaselineParams::from_shares(0.36, 0.05, 0.04, 1.0).is_err());
    }

    #[test]
    fn serde_rejects_invalid_params() {
        let raw = RawBaselineParams {
            gamma: 2.0,
            ..RawBaselineParams::from(BaselineParams::default())
        };
        assert!(BaselineParams::try_from(raw).is_err());
    }

    #[test]
    fn transition_from_steady_state_is_constant() {
        let p = BaselineParams::default();
        let ss = steady_state(&p);
        let path = simulate_transition(&p, ss.k_star, ss.structured, &TransitionSettings::default())
            .unwrap();
        assert!(path.converged);
        assert_eq!(path.periods_to_converge, Some(0));
        assert_eq!(path.records.len(), 1);
    }

    #[test]
    fn transition_from_half_capability_converges() {
        let p = BaselineParams::default();
        let ss = steady_state(&p);
        let k0 = 0.5 * ss.k_star;
        let l0 = (p.labor() - p.labor_per_capability() * k0).clamp(0.0, p.labor());
        let path = simulate_transition(&p, k0, l0, &TransitionSettings::default()).unwrap();
        assert!(path.converged);
        let last = path.records.last().unwrap();
        assert!((last.structured / p.labor() - ss.s_star).abs() / ss.s_star < 1e-6);
        for rec in &path.records {
            assert_eq!(rec.structured + rec.unstructured, p.labor());
            assert!((0.0..=p.labor()).contains(&rec.structured));
        }
    }

    #[test]
    fn non_convergence_is_reported_not_raised() {
        let p = BaselineParams::default();
        let settings = TransitionSettings {
            periods: 3,
            ..TransitionSettings::default()
        };
        let path = simulate_transition(&p, 1.0, 0.0, &settings).unwrap();
        assert!(!path.converged);
        assert_eq!(path.records.len(), 3);
    }

    #[test]
    fn damping_outside_unit_interval_is_rejected() {
        let p = BaselineParams::default();
        for bad in [0.0, 1.5, -0.2] {
            let settings = TransitionSettings {
                damping: Some(bad),
                ..TransitionSettings::default()
            };
            assert!(simulate_transition(&p, 0.1, 0.05, &settings).is_err());
        }
    }

    #[test]
    fn corner_allocation_reports_infinite_wage() {
        let p = BaselineParams::default();
        let settings = TransitionSettings {
            periods: 2,
            damping: Some(0.5),
            tolerance: 1e-10,
        };
        let path = simulate_transition(&p, 0.01, p.labor(), &settings).unwrap();
        let first = path.records[0];
        assert_eq!(first.unstructured, 0.0);
        assert_eq!(first.output, 0.0);
        assert!(first.wage_unstructured.is_infinite());
    }
}
