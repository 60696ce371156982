use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::OpticsError;
use crate::params::{AngularFrequency, PhysicalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Uniform,
    GaussianStandingWave,
}

/// Peak-normalized field amplitude of one mode inside the sample.
///
/// The Gaussian standing wave is `(w0/w(z))·exp(-ρ²/w(z)²)·|cos k(z - z0)|`
/// with the waist at the sample centre and `z0 = axis_offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeProfile {
    pub kind: ProfileKind,
    pub waist: f64,
    pub wavelength: f64,
    pub axis_offset: f64,
}

impl ModeProfile {
    pub fn uniform() -> Self {
        ModeProfile {
            kind: ProfileKind::Uniform,
            waist: f64::INFINITY,
            wavelength: f64::INFINITY,
            axis_offset: 0.0,
        }
    }

    pub fn gaussian(waist: f64, wavelength: f64) -> Self {
        ModeProfile {
            kind: ProfileKind::GaussianStandingWave,
            waist,
            wavelength,
            axis_offset: 0.0,
        }
    }

    pub fn rayleigh_range(&self) -> f64 {
        rayleigh_range(self.waist, self.wavelength)
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// `w(z)`; infinite for the uniform profile.
    pub fn beam_radius(&self, z: f64) -> f64 {
        match self.kind {
            ProfileKind::Uniform => f64::INFINITY,
            ProfileKind::GaussianStandingWave => {
                self.waist * (1.0 + (z / self.rayleigh_range()).powi(2)).sqrt()
            }
        }
    }

    /// Transverse envelope `(w0/w(z))·exp(-ρ²/w(z)²)`.
    pub fn envelope(&self, rho: f64, z: f64) -> f64 {
        match self.kind {
            ProfileKind::Uniform => 1.0,
            ProfileKind::GaussianStandingWave => {
                let zr = self.rayleigh_range();
                let ratio = (1.0 + (z / zr).powi(2)).sqrt();
                let w = self.waist * ratio;
                (-(rho / w).powi(2)).exp() / ratio
            }
        }
    }

    /// Longitudinal standing-wave factor `|cos k(z - z0)|`.
    pub fn axial(&self, z: f64) -> f64 {
        match self.kind {
            ProfileKind::Uniform => 1.0,
            ProfileKind::GaussianStandingWave => (self.wavenumber() * (z - self.axis_offset)).cos().abs(),
        }
    }

    pub fn amplitude(&self, rho: f64, z: f64) -> f64 {
        self.envelope(rho, z) * self.axial(z)
    }

    pub(crate) fn check(&self, name: &'static str) -> Result<(), OpticsError> {
        if self.kind == ProfileKind::GaussianStandingWave {
            positive(name, self.waist)?;
            positive(name, self.wavelength)?;
            if !self.axis_offset.is_finite() {
                return Err(OpticsError::NonPositive {
                    name,
                    value: self.axis_offset,
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<(), OpticsError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(OpticsError::NonPositive { name, value })
    }
}

pub fn rayleigh_range(waist: f64, wavelength: f64) -> f64 {
    PI * waist * waist / wavelength
}

/// Fabry–Pérot length for an angular free spectral range, `L = πc/FSR`.
pub fn length_from_fsr(k: &PhysicalConstants, fsr: AngularFrequency) -> Result<f64, OpticsError> {
    positive("fsr", fsr.0)?;
    Ok(PI * k.c / fsr.0)
}

/// Standing-wave Gaussian mode volume `∫|φ|² dV = (π w0²/4)·L`.
pub fn mode_volume(waist: f64, length: f64) -> Result<f64, OpticsError> {
    positive("waist", waist)?;
    if !(length >= 0.0 && length.is_finite()) {
        return Err(OpticsError::NonPositive {
            name: "length",
            value: length,
        });
    }
    Ok(PI * waist * waist / 4.0 * length)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorGeometry {
    pub length: f64,
    pub fsr: AngularFrequency,
    pub waist: f64,
    pub rayleigh_range: f64,
    pub v_o: f64,
}

impl ResonatorGeometry {
    pub fn from_fsr(
        k: &PhysicalConstants,
        fsr: AngularFrequency,
        waist: f64,
        wavelength: f64,
    ) -> Result<Self, OpticsError> {
        positive("wavelength", wavelength)?;
        let length = length_from_fsr(k, fsr)?;
        Ok(ResonatorGeometry {
            length,
            fsr,
            waist,
            rayleigh_range: rayleigh_range(waist, wavelength),
            v_o: mode_volume(waist, length)?,
        })
    }
}
