use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::units::AngularFrequency;

/// Pump-power → Rabi-frequency calibration point; Ω₀ scales as √P from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiCalibration {
    pub omega0: AngularFrequency,
    /// Pump power at which `omega0` was obtained, W.
    pub power: f64,
}

impl RabiCalibration {
    pub fn rabi_at(&self, power: f64) -> AngularFrequency {
        AngularFrequency(self.omega0.0 * (power / self.power).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IonSpecies {
    pub name: String,
    /// Magnetic dipole of |g⟩→|1⟩ (largest projection), J/T.
    pub mu_g1: f64,
    /// Electric dipole of |g⟩→|2⟩, C·m.
    pub d_g2: f64,
    /// Optical transition FWHM.
    pub gamma_o: AngularFrequency,
    pub g_lande: Option<f64>,
    /// Electric dipole of the pumped |1⟩→|2⟩ transition, C·m. Only needed by
    /// the physics branch of [`crate::optics::pump_rabi`].
    pub d_12: Option<f64>,
    pub rabi_calibration: Option<RabiCalibration>,
}

/// Spherical crystal sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrystalSample {
    /// Sphere radius, m.
    pub radius: f64,
    /// Ion number density, m⁻³.
    pub rho: f64,
    /// Sphere volume, m³.
    pub volume: f64,
    /// Number of ions in the sphere.
    pub ion_count: f64,
}

impl CrystalSample {
    pub fn new(radius: f64, rho: f64) -> Self {
        let volume = sphere_volume(radius);
        CrystalSample {
            radius,
            rho,
            volume,
            ion_count: rho * volume,
        }
    }
}

pub fn sphere_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Microwave,
    Optical,
}

impl Band {
    pub fn config_key(self) -> &'static str {
        match self {
            Band::Microwave => "microwave_cavity",
            Band::Optical => "optical_cavity",
        }
    }
}

/// One resonator. `kappa` is the full energy-decay linewidth, so `Q = ω/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    pub band: Band,
    pub omega: AngularFrequency,
    /// Fixed linewidth, if the resonator is given rather than designed.
    pub kappa: Option<AngularFrequency>,
    /// Mode volume, m³.
    pub v_mode: f64,
    pub q_max: Option<f64>,
}

impl CavitySpec {
    pub fn q(&self) -> Option<f64> {
        self.kappa.map(|k| self.omega.0 / k.0)
    }

    /// Smallest linewidth the resonator can reach (`ω/Q_max`).
    pub fn kappa_min(&self) -> Option<AngularFrequency> {
        self.q_max.map(|q| AngularFrequency(self.omega.0 / q))
    }
}

/// Fabry–Pérot layout data for the optical resonator; all optional.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OpticalLayout {
    /// Gaussian waist at the sample centre, m.
    pub waist: Option<f64>,
    pub fsr: Option<AngularFrequency>,
    /// Vacuum wavelength, m.
    pub wavelength: Option<f64>,
    /// Optical overlap integral, if tabulated.
    pub overlap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnonSpec {
    /// Detuning of the microwave field from the Kittel mode.
    pub delta_m: AngularFrequency,
    /// Spacing to the next magnetostatic mode.
    pub mode_spacing: AngularFrequency,
    /// Kittel-mode linewidth (zero in the two-mode efficiency model).
    pub gamma_m: AngularFrequency,
    /// Applied field, T.
    pub b0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    /// Pump frequency, always ω_o − ω_μ after validation.
    pub omega_omega: AngularFrequency,
    /// Pump power, W.
    pub pump_power: f64,
    /// Peak Rabi frequency available at `pump_power`.
    pub omega0: AngularFrequency,
    pub delta_o: Option<AngularFrequency>,
}

/// Validated device description in internal units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignInputs {
    pub ion: IonSpecies,
    pub crystal: CrystalSample,
    pub microwave: CavitySpec,
    pub optical: CavitySpec,
    pub optical_layout: OpticalLayout,
    pub magnon: MagnonSpec,
    pub drive: DriveSpec,
}
