//! Gaussian-beam Fabry–Pérot geometry, mode profiles, the optical overlap
//! integral and pump-power to Rabi-frequency conversion.

mod geometry;
mod overlap;
pub mod quadrature;
mod rabi;

use thiserror::Error;

pub use geometry::{
    length_from_fsr, mode_volume, rayleigh_range, ModeProfile, ProfileKind, ResonatorGeometry,
};
pub use overlap::{overlap_integral, OverlapOptions, StandingWave};
pub use rabi::{antinode_field, circulating_power, pump_rabi, RabiSource};

use crate::params::{DesignInputs, PhysicalConstants};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpticsError {
    #[error("`{name}` = {value} must be positive and finite")]
    NonPositive { name: &'static str, value: f64 },
    #[error("physics Rabi model needs ion.d_12")]
    MissingDipole,
    #[error("optical_cavity.{0} is required for this calculation")]
    MissingLayout(&'static str),
    #[error("quadrature did not converge: value {value:.6e}, error {error:.3e} after {intervals} intervals")]
    Quadrature {
        value: f64,
        error: f64,
        intervals: usize,
    },
}

/// Cavity and pump mode profiles implied by the optical layout. The pump is
/// one microwave frequency below the optical cavity mode.
pub fn layout_profiles(
    k: &PhysicalConstants,
    inputs: &DesignInputs,
) -> Result<(ModeProfile, ModeProfile), OpticsError> {
    let waist = inputs
        .optical_layout
        .waist
        .ok_or(OpticsError::MissingLayout("waist"))?;
    let lambda_o = inputs
        .optical_layout
        .wavelength
        .unwrap_or(2.0 * std::f64::consts::PI * k.c / inputs.optical.omega.0);
    let lambda_p = lambda_o * inputs.optical.omega.0 / inputs.drive.omega_omega.0;
    Ok((
        ModeProfile::gaussian(waist, lambda_o),
        ModeProfile::gaussian(waist, lambda_p),
    ))
}

/// Resonator geometry implied by the optical layout.
pub fn layout_geometry(
    k: &PhysicalConstants,
    inputs: &DesignInputs,
) -> Result<ResonatorGeometry, OpticsError> {
    let l = &inputs.optical_layout;
    let fsr = l.fsr.ok_or(OpticsError::MissingLayout("fsr"))?;
    let waist = l.waist.ok_or(OpticsError::MissingLayout("waist"))?;
    let lambda = l
        .wavelength
        .unwrap_or(2.0 * std::f64::consts::PI * k.c / inputs.optical.omega.0);
    ResonatorGeometry::from_fsr(k, fsr, waist, lambda)
}

/// Overlap integral from the configured value, or computed from the layout
/// when no value is configured.
pub fn resolve_overlap(k: &PhysicalConstants, inputs: &DesignInputs) -> Result<f64, OpticsError> {
    if let Some(f) = inputs.optical_layout.overlap {
        return Ok(f);
    }
    let (phi, eps) = layout_profiles(k, inputs)?;
    overlap_integral(&phi, &eps, inputs.crystal.radius, &OverlapOptions::default())
}
