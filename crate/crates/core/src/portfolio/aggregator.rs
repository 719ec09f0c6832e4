use serde::{Deserialize, Serialize};

use super::Portfolio;
use crate::error::{positive, Error, Result};

/// How family maturities combine into aggregate capability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Aggregator {
    /// `k = Σ ω_j k_j`.
    Additive,
    /// `k = (Σ ω_j k_j^ρ)^(1/ρ)` with `ρ <= 1`, `ρ != 0`. Maturities are
    /// floored at `epsilon_floor` when computing marginal weights.
    Ces {
        rho: f64,
        #[serde(default = "default_floor")]
        epsilon_floor: f64,
    },
}

fn default_floor() -> f64 {
    1e-6
}

impl Default for Aggregator {
    fn default() -> Self {
        Aggregator::Additive
    }
}

impl Aggregator {
    pub fn ces(rho: f64) -> Self {
        Aggregator::Ces {
            rho,
            epsilon_floor: default_floor(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Aggregator::Ces { rho, epsilon_floor } = *self {
            if !rho.is_finite() || rho > 1.0 || rho == 0.0 {
                return Err(Error::domain("rho", format!("rho must satisfy rho <= 1 and rho != 0, got {rho}")));
            }
            positive("epsilon_floor", epsilon_floor)?;
        }
        Ok(())
    }

    /// Aggregate of `(ω_j, k_j)` pairs.
    pub fn combine(&self, omega: &[f64], maturity: &[f64]) -> f64 {
        match *self {
            Aggregator::Additive => omega.iter().zip(maturity).map(|(w, k)| w * k).sum(),
            Aggregator::Ces { rho, .. } => {
                if rho < 0.0 && maturity.iter().any(|&k| k == 0.0) {
                    return 0.0;
                }
                let inner: f64 = omega.iter().zip(maturity).map(|(w, k)| w * k.powf(rho)).sum();
                inner.powf(1.0 / rho)
            }
        }
    }

    /// Partial derivatives `∂k/∂k_j`, with the CES floor applied.
    pub fn gradient(&self, omega: &[f64], maturity: &[f64]) -> Vec<f64> {
        match *self {
            Aggregator::Additive => omega.to_vec(),
            Aggregator::Ces { rho, epsilon_floor } => {
                let floored: Vec<f64> = maturity.iter().map(|&k| k.max(epsilon_floor)).collect();
                let inner: f64 = omega.iter().zip(&floored).map(|(w, k)| w * k.powf(rho)).sum();
                let scale = inner.powf((1.0 - rho) / rho);
                omega
                    .iter()
                    .zip(&floored)
                    .map(|(w, k)| w * k.powf(rho - 1.0) * scale)
                    .collect()
            }
        }
    }
}

fn columns(portfolio: &Portfolio) -> (Vec<f64>, Vec<f64>) {
    portfolio
        .families()
        .iter()
        .map(|f| (f.omega, f.maturity))
        .unzip()
}

pub fn aggregate_capability(portfolio: &Portfolio) -> Result<f64> {
    if portfolio.is_empty() {
        return Err(Error::Empty("portfolio"));
    }
    let (omega, k) = columns(portfolio);
    Ok(portfolio.aggregator.combine(&omega, &k))
}

/// Marginal value of each family's maturity, `Λ ∂k/∂k_j`.
pub fn effective_weights(portfolio: &Portfolio) -> Result<Vec<f64>> {
    if portfolio.is_empty() {
        return Err(Error::Empty("portfolio"));
    }
    let (omega, k) = columns(portfolio);
    let lambda = portfolio.lambda();
    Ok(portfolio
        .aggregator
        .gradient(&omega, &k)
        .into_iter()
        .map(|g| lambda * g)
        .collect())
}
