//! Within-period labor allocation:
//!
//! ```text
//! max Σ w_j g(l_j)   s.t.   Σ l_j = L_S,  l_j >= 0
//! ```
//!
//! where `w_j` are effective weights. At the optimum every active family
//! satisfies `w_j g'(l_j) = ν` and inactive ones have `w_j g'(0) <= ν`.

use serde::{Deserialize, Serialize};

use super::{effective_weights, CodificationTech, Portfolio};
use crate::error::{non_negative, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AllocationMethod {
    /// Closed form when the technology has one, bisection otherwise.
    #[default]
    Auto,
    ClosedForm,
    Bisection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationResult {
    pub labor: Vec<f64>,
    /// Multiplier on the labor constraint; `None` when there is no labor to
    /// allocate.
    pub multiplier: Option<f64>,
    /// Largest first-order-condition violation relative to the multiplier.
    pub kkt_residual: f64,
    pub total: f64,
}

pub fn allocate_labor(portfolio: &Portfolio, total: f64) -> Result<AllocationResult> {
    let weights = effective_weights(portfolio)?;
    allocate_with_weights(&weights, &portfolio.tech, total, AllocationMethod::Auto)
}

pub fn allocate_with_weights(
    weights: &[f64],
    tech: &CodificationTech,
    total: f64,
    method: AllocationMethod,
) -> Result<AllocationResult> {
    non_negative("structured labor", total)?;
    if weights.is_empty() {
        return Err(Error::Empty("portfolio"));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::domain("effective weight", format!("weights must be positive, got {w}")));
    }
    if total == 0.0 {
        return Ok(AllocationResult {
            labor: vec![0.0; weights.len()],
            multiplier: None,
            kkt_residual: 0.0,
            total,
        });
    }
    let labor = match (method, tech) {
        (AllocationMethod::Bisection, _) | (AllocationMethod::Auto, CodificationTech::Logarithmic { .. }) => {
            bisection(weights, tech, total)
        }
        (AllocationMethod::ClosedForm | AllocationMethod::Auto, CodificationTech::Power { beta }) => {
            power_closed_form(weights, *beta, total)
        }
        (AllocationMethod::ClosedForm, CodificationTech::Logarithmic { .. }) => {
            return Err(Error::domain("method", "no closed form for the logarithmic technology"))
        }
    };
    let (multiplier, kkt_residual) = kkt(weights, tech, &labor);
    Ok(AllocationResult {
        labor,
        multiplier: Some(multiplier),
        kkt_residual,
        total,
    })
}

/// `l_j ∝ w_j^(1/(1-β))`.
fn power_closed_form(weights: &[f64], beta: f64, total: f64) -> Vec<f64> {
    let top = weights.iter().cloned().fold(0.0, f64::max);
    let e = 1.0 / (1.0 - beta);
    let x: Vec<f64> = weights.iter().map(|w| (w / top).powf(e)).collect();
    let sum: f64 = x.iter().sum();
    x.into_iter().map(|xi| total * xi / sum).collect()
}

fn demand<'a>(weights: &'a [f64], tech: &CodificationTech, nu: f64) -> impl Iterator<Item = f64> + 'a {
    let tech = *tech;
    weights.iter().map(move |w| {
        let slope = nu / w;
        if slope >= tech.slope_at_zero() {
            0.0
        } else {
            tech.g_prime_inverse(slope)
        }
    })
}

/// Bisection on the multiplier: total demand is decreasing in `ν`.
fn bisection(weights: &[f64], tech: &CodificationTech, total: f64) -> Vec<f64> {
    let n = weights.len() as f64;
    let wmax = weights.iter().cloned().fold(0.0, f64::max);
    let wmin = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    // Demand at hi is at most total/n per family; at lo at least total each.
    let mut hi = wmax * tech.g_prime(total / n);
    let mut lo = wmin * tech.g_prime(total);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d: f64 = demand(weights, tech, mid).sum();
        if d > total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Choose the bracket end whose total is closest, then spread the
    // leftover over active families in proportion to their labor.
    let at_lo: Vec<f64> = demand(weights, tech, lo).collect();
    let at_hi: Vec<f64> = demand(weights, tech, hi).collect();
    let err = |v: &[f64]| (v.iter().sum::<f64>() - total).abs();
    let mut labor = if err(&at_lo) <= err(&at_hi) { at_lo } else { at_hi };
    let sum: f64 = labor.iter().sum();
    if sum > 0.0 {
        let scale = total / sum;
        labor.iter_mut().for_each(|l| *l *= scale);
    }
    labor
}

/// Returns `(ν, residual)`: `ν` is read off the family with the most labor;
/// the residual is `max |w_j g'(l_j) - ν| / ν` over active families and
/// `max (w_j g'(0) - ν)^+ / ν` over inactive ones.
fn kkt(weights: &[f64], tech: &CodificationTech, labor: &[f64]) -> (f64, f64) {
    let (anchor, _) = labor
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &l)| if l > best.1 { (i, l) } else { best });
    let nu = weights[anchor] * tech.g_prime(labor[anchor]);
    let residual = weights
        .iter()
        .zip(labor)
        .map(|(w, &l)| {
            if l > 0.0 {
                (w * tech.g_prime(l) - nu).abs() / nu
            } else {
                ((w * tech.slope_at_zero() - nu) / nu).max(0.0)
            }
        })
        .fold(0.0, f64::max);
    (nu, residual)
}

impl AllocationResult {
    /// Objective value `Σ w_j g(l_j)`.
    pub fn value(&self, weights: &[f64], tech: &CodificationTech) -> f64 {
        weights.iter().zip(&self.labor).map(|(w, &l)| w * tech.g(l)).sum()
    }
}
