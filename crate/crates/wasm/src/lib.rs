//! WebAssembly front of the demo page. The computations live in [`demo`]
//! so they can be tested natively; this file only adapts types.

pub mod demo;

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    use crate::demo;

    fn js(e: String) -> JsError {
        JsError::new(&e)
    }

    #[wasm_bindgen]
    pub struct Transition(demo::Transition);

    #[wasm_bindgen]
    impl Transition {
        #[wasm_bindgen(getter)]
        pub fn s_star(&self) -> f64 {
            self.0.s_star
        }
        #[wasm_bindgen(getter)]
        pub fn k_star(&self) -> f64 {
            self.0.k_star
        }
        /// -1 when the horizon ended first.
        #[wasm_bindgen(getter)]
        pub fn converged_at(&self) -> f64 {
            self.0.converged_at.map_or(-1.0, |t| t as f64)
        }
        #[wasm_bindgen(getter)]
        pub fn share(&self) -> Vec<f64> {
            self.0.share.clone()
        }
        #[wasm_bindgen(getter)]
        pub fn k_ratio(&self) -> Vec<f64> {
            self.0.k_ratio.clone()
        }
    }

    #[wasm_bindgen]
    pub fn transition(alpha: f64, gamma: f64, r: f64, delta_k: f64, k0_ratio: f64, horizon: u32) -> Result<Transition, JsError> {
        demo::transition(alpha, gamma, r, delta_k, k0_ratio, horizon).map(Transition).map_err(js)
    }

    #[wasm_bindgen]
    pub struct Histogram(demo::Histogram);

    #[wasm_bindgen]
    impl Histogram {
        #[wasm_bindgen(getter)]
        pub fn mean(&self) -> f64 {
            self.0.mean
        }
        #[wasm_bindgen(getter)]
        pub fn median(&self) -> f64 {
            self.0.median
        }
        #[wasm_bindgen(getter)]
        pub fn std_dev(&self) -> f64 {
            self.0.std_dev
        }
        #[wasm_bindgen(getter)]
        pub fn p10(&self) -> f64 {
            self.0.p10
        }
        #[wasm_bindgen(getter)]
        pub fn p90(&self) -> f64 {
            self.0.p90
        }
        #[wasm_bindgen(getter)]
        pub fn lo(&self) -> f64 {
            self.0.lo
        }
        #[wasm_bindgen(getter)]
        pub fn hi(&self) -> f64 {
            self.0.hi
        }
        #[wasm_bindgen(getter)]
        pub fn counts(&self) -> Vec<f64> {
            self.0.counts.clone()
        }
    }

    #[wasm_bindgen]
    pub fn calibration(gamma_lo: f64, gamma_hi: f64, n_draws: u32, bins: u32, seed: u32) -> Result<Histogram, JsError> {
        demo::calibration(gamma_lo, gamma_hi, n_draws, bins, u64::from(seed)).map(Histogram).map_err(js)
    }

    #[wasm_bindgen]
    pub struct PortfolioPath(demo::PortfolioPath);

    #[wasm_bindgen]
    impl PortfolioPath {
        #[wasm_bindgen(getter)]
        pub fn share(&self) -> Vec<f64> {
            self.0.share.clone()
        }
        #[wasm_bindgen(getter)]
        pub fn families(&self) -> Vec<f64> {
            self.0.families.clone()
        }
        #[wasm_bindgen(getter)]
        pub fn aggregate(&self) -> Vec<f64> {
            self.0.aggregate.clone()
        }
    }

    #[wasm_bindgen]
    pub fn portfolio(rho: f64, entry_mu: f64, env_hazard: f64, budget: f64, periods: u32, seed: u32) -> Result<PortfolioPath, JsError> {
        demo::portfolio(rho, entry_mu, env_hazard, budget, periods, u64::from(seed)).map(PortfolioPath).map_err(js)
    }
}
