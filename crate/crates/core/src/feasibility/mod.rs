//! Heuristic transducer design from material limits, the (a)–(e) design
//! conditions, and the deterministic JSON feasibility report.

mod design;
mod report;

use thiserror::Error;

pub use design::{
    check_conditions, heuristic_design, ConditionCheck, ConditionId, DesignPlan, DesignPoint,
    DesignPolicy, Shortfall,
};
pub use report::{
    analyze, emit_report, Discrepancy, FeasibilityReport, Frequency, ReportDesign, ShortfallReport,
    REPORT_SCHEMA,
};

use crate::couplings::CouplingError;
use crate::optics::OpticsError;
use crate::scattering::ScatteringError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeasibilityError {
    #[error("`{name}` = {value} cannot be used for a design")]
    InvalidInput { name: &'static str, value: f64 },
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
}

#[cfg(test)]
mod tests;
