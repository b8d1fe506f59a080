//! Two-factor CES energy-substitution model.
//!
//! The crate is `no_std` (with `alloc`) and holds only the numerical core:
//!
//! * [`ces`] – evaluation and inversion of the two-input CES function, MRTS,
//!   first-order-condition prices and initial calibration.
//! * [`scenario`] – declarative experiment description and the exogenous
//!   fossil and elasticity paths.
//! * [`sim`] – year-by-year carbon-tax simulation and parameter sweeps.
//! * [`scurve`] – logistic / higher-order logistic / Gompertz / Bass curves
//!   and a Nelder-Mead least-squares fitter.
//!
//! File formats, the CLI and parallel sweeps live in the `cesdyn` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ces;
pub mod scenario;
pub mod scurve;
pub mod sim;

mod math;

pub use ces::{CesError, CesParams, FactorPoint, PricePair};
pub use scenario::{ElasticityPath, InitMode, PhaseDownSchedule, Scenario, Violation};
pub use scurve::{fit, ScurveError, ScurveFit, ScurveKind, ScurveModel, SeriesData};
pub use sim::{
    simulate, simulate_sweep, tax_peak, SimError, SweepGrid, TrajectoryRow, TrajectoryTable,
};
