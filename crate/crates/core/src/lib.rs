//! Models of structured human-data labor as a persistent production input.
//!
//! The crate is organised around five pieces:
//!
//! * [`baseline`]: the two-sector economy with a depreciating capability stock,
//!   its closed-form steady state, comparative statics and transition paths.
//! * [`calibration`]: Monte Carlo propagation of uniform parameter priors
//!   through the steady-state labor share.
//! * [`portfolio`]: task families with maturity stocks, capability aggregation,
//!   within-period labor allocation, frontier entry and drift.
//! * [`roy`]: Roy-style sorting of heterogeneous workers across task families
//!   and the resulting wage dispersion.
//! * [`estimators`]: drift-hazard, birth-count and index estimators run on
//!   synthetic maturity panels.
//!
//! Every operation is a pure function of its inputs. Randomness is drawn from
//! keyed streams (see [`rng`]) so results never depend on evaluation order or
//! thread count.

pub mod baseline;
pub mod calibration;
pub mod error;
pub mod estimators;
pub mod portfolio;
pub mod rng;
pub mod roy;
pub mod stats;

pub use error::{Error, Result};
