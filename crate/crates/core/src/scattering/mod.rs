//! Two-cavity input–output theory: S-matrix, efficiency spectra, bandwidth,
//! impedance matching and a time-domain cross-check.

mod bandwidth;
mod matching;
mod ode;
mod smatrix;

use thiserror::Error;

pub use bandwidth::{bandwidth_fwhm, Bandwidth};
pub use matching::{impedance_solve, Matching};
pub use ode::{steady_state_transmission, time_domain_oracle, OdeOptions, Waveforms};
pub use smatrix::{
    efficiency, efficiency_spectrum, linear_grid, smatrix, symmetric_grid, ScatteringSpectrum,
    TwoPortS, SPECTRUM_CSV_HEADER,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatteringError {
    #[error("`{name}` = {value} must be positive and finite")]
    NonPositive { name: &'static str, value: f64 },
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("singular response at omega = {omega:e} rad/s")]
    Singular { omega: f64 },
    #[error("frequency grid is not sorted")]
    UnsortedGrid,
    #[error("efficiency is zero at the centre; no bandwidth")]
    ZeroPeak,
    #[error("no half-maximum crossing within |omega| < {window:e} rad/s")]
    NoHalfMaxCrossing { window: f64 },
    #[error("zero coupling: impedance matching impossible")]
    NoMatching,
    #[error("step size underflow at t = {t:e} s (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget exhausted at t = {t:e} s")]
    MaxSteps { t: f64 },
    #[error("output has not reached steady state (relative drift {drift:e})")]
    NotSteady { drift: f64 },
}
