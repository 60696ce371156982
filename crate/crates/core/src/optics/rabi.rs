use std::f64::consts::PI;

use super::geometry::{positive, ResonatorGeometry};
use super::OpticsError;
use crate::params::{AngularFrequency, PhysicalConstants, RabiCalibration};

/// Where the Rabi frequency comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RabiSource {
    Calibration(RabiCalibration),
    /// Cavity-enhanced pump field acting on a transition dipole `d_12` (C·m).
    Physics { d_12: Option<f64> },
}

/// Pump-power cavity enhancement for a one-sided resonator at critical
/// coupling, `P_circ/P = 2·FSR/(π·κ_o)`.
pub fn circulating_power(power: f64, fsr: AngularFrequency, kappa_o: AngularFrequency) -> f64 {
    power * 2.0 * fsr.0 / (PI * kappa_o.0)
}

/// Antinode electric field amplitude of the circulating pump.
///
/// Peak travelling-wave intensity is `2P_circ/(πw0²)`; the counter-propagating
/// wave doubles the field at an antinode.
pub fn antinode_field(k: &PhysicalConstants, p_circ: f64, waist: f64) -> f64 {
    let intensity = 2.0 * p_circ / (PI * waist * waist);
    2.0 * (2.0 * intensity / (k.c * k.eps0)).sqrt()
}

/// Peak pump Rabi frequency at power `power`.
pub fn pump_rabi(
    k: &PhysicalConstants,
    power: f64,
    geometry: &ResonatorGeometry,
    kappa_o: AngularFrequency,
    source: RabiSource,
) -> Result<AngularFrequency, OpticsError> {
    if !(power >= 0.0 && power.is_finite()) {
        return Err(OpticsError::NonPositive {
            name: "pump_power",
            value: power,
        });
    }
    match source {
        RabiSource::Calibration(cal) => {
            positive("calibration power", cal.power)?;
            Ok(cal.rabi_at(power))
        }
        RabiSource::Physics { d_12 } => {
            let d = d_12.ok_or(OpticsError::MissingDipole)?;
            positive("d_12", d)?;
            positive("kappa_o", kappa_o.0)?;
            positive("waist", geometry.waist)?;
            let e = antinode_field(k, circulating_power(power, geometry.fsr, kappa_o), geometry.waist);
            Ok(AngularFrequency(d * e / k.hbar))
        }
    }
}
