use thiserror::Error;

use super::PhysicalConstants;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeemanError {
    #[error("g-factor must be positive, got {0}")]
    NonPositiveG(f64),
    #[error("target frequency must be non-negative and finite, got {0} rad/s")]
    InvalidFrequency(f64),
}

/// Applied field that puts a Zeeman splitting `ħω = g μ_B B₀` at `omega_target`.
pub fn kittel_field(
    k: &PhysicalConstants,
    g_lande: f64,
    omega_target: f64,
) -> Result<f64, ZeemanError> {
    if !(g_lande > 0.0 && g_lande.is_finite()) {
        return Err(ZeemanError::NonPositiveG(g_lande));
    }
    if !(omega_target >= 0.0 && omega_target.is_finite()) {
        return Err(ZeemanError::InvalidFrequency(omega_target));
    }
    Ok(k.hbar * omega_target / (g_lande * k.mu_b))
}
