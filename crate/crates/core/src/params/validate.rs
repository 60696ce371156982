use std::fmt;

use thiserror::Error;

use super::config::{RawCavity, SystemConfig};
use super::types::{
    Band, CavitySpec, CrystalSample, DesignInputs, DriveSpec, IonSpecies, MagnonSpec,
    OpticalLayout, RabiCalibration,
};
use super::units::AngularFrequency;
use super::zeeman::kittel_field;
use super::PhysicalConstants;

/// One broken invariant found while validating a config.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { field: &'static str },
    NonPositive { field: &'static str, value: f64 },
    Negative { field: &'static str, value: f64 },
    OutOfRange { field: &'static str, value: f64, min: f64, max: f64 },
    QualityFactorExceedsMax { band: Band, q: f64, q_max: f64 },
    DetuningOutsideModeWindow { delta_m: f64, mode_spacing: f64 },
    ThreePhotonMismatch { given: f64, derived: f64 },
    ConflictingFields { first: &'static str, second: &'static str },
    MissingRabiSource,
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::NonFinite { .. } => "NonFinite",
            Violation::NonPositive { .. } => "NonPositive",
            Violation::Negative { .. } => "Negative",
            Violation::OutOfRange { .. } => "OutOfRange",
            Violation::QualityFactorExceedsMax { .. } => "QualityFactorExceedsMax",
            Violation::DetuningOutsideModeWindow { .. } => "DetuningOutsideModeWindow",
            Violation::ThreePhotonMismatch { .. } => "ThreePhotonMismatch",
            Violation::ConflictingFields { .. } => "ConflictingFields",
            Violation::MissingRabiSource => "MissingRabiSource",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { field } => write!(f, "{field} is not finite"),
            Violation::NonPositive { field, value } => write!(f, "{field} = {value} must be > 0"),
            Violation::Negative { field, value } => write!(f, "{field} = {value} must be >= 0"),
            Violation::OutOfRange {
                field,
                value,
                min,
                max,
            } => write!(f, "{field} = {value} outside [{min}, {max}]"),
            Violation::QualityFactorExceedsMax { band, q, q_max } => {
                write!(f, "{band:?} cavity Q = {q:.4e} exceeds Q_max = {q_max:.4e}")
            }
            Violation::DetuningOutsideModeWindow {
                delta_m,
                mode_spacing,
            } => write!(
                f,
                "|delta_M| = {:.6e} rad/s exceeds mode spacing {:.6e} rad/s",
                delta_m.abs(),
                mode_spacing
            ),
            Violation::ThreePhotonMismatch { given, derived } => write!(
                f,
                "omega_Omega = {given:.12e} rad/s breaks three-photon resonance (expected {derived:.12e})"
            ),
            Violation::ConflictingFields { first, second } => {
                write!(f, "{first} and {second} are mutually exclusive")
            }
            Violation::MissingRabiSource => {
                write!(f, "drive.Omega0 absent and no ion.rabi_calibration to derive it")
            }
        }
    }
}

/// Every violation found in a config.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} invariant violation(s): {}", .0.len(), join(.0))]
pub struct ValidationErrors(pub Vec<Violation>);

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl ValidationErrors {
    pub fn contains_kind(&self, kind: &str) -> bool {
        self.0.iter().any(|v| v.kind() == kind)
    }
}

#[derive(Default)]
struct Checker {
    found: Vec<Violation>,
}

impl Checker {
    fn finite(&mut self, field: &'static str, x: f64) -> bool {
        if x.is_finite() {
            true
        } else {
            self.found.push(Violation::NonFinite { field });
            false
        }
    }

    fn positive(&mut self, field: &'static str, x: f64) {
        if self.finite(field, x) && x <= 0.0 {
            self.found.push(Violation::NonPositive { field, value: x });
        }
    }

    fn non_negative(&mut self, field: &'static str, x: f64) {
        if self.finite(field, x) && x < 0.0 {
            self.found.push(Violation::Negative { field, value: x });
        }
    }

    fn in_range(&mut self, field: &'static str, x: f64, min: f64, max: f64) {
        if self.finite(field, x) && !(min..=max).contains(&x) {
            self.found.push(Violation::OutOfRange {
                field,
                value: x,
                min,
                max,
            });
        }
    }
}

fn cavity(
    c: &mut Checker,
    raw: &RawCavity,
    band: Band,
    names: [&'static str; 5],
) -> CavitySpec {
    let [omega, kappa, q, v_mode, q_max] = names;
    c.positive(omega, raw.omega);
    c.positive(v_mode, raw.v_mode);
    if let Some(qm) = raw.q_max {
        c.positive(q_max, qm);
    }
    let linewidth = match (raw.kappa, raw.q) {
        (Some(_), Some(_)) => {
            c.found.push(Violation::ConflictingFields {
                first: kappa,
                second: q,
            });
            raw.kappa
        }
        (Some(k), None) => {
            c.positive(kappa, k);
            Some(k)
        }
        (None, Some(qv)) => {
            c.positive(q, qv);
            Some(raw.omega / qv)
        }
        (None, None) => None,
    };
    let spec = CavitySpec {
        band,
        omega: AngularFrequency(raw.omega),
        kappa: linewidth.map(AngularFrequency),
        v_mode: raw.v_mode,
        q_max: raw.q_max,
    };
    if let (Some(qv), Some(qm)) = (spec.q(), spec.q_max) {
        if qv.is_finite() && qv > qm {
            c.found.push(Violation::QualityFactorExceedsMax {
                band,
                q: qv,
                q_max: qm,
            });
        }
    }
    spec
}

/// Checks every invariant, derives dependent quantities and returns the
/// validated inputs, or all violations at once.
pub fn validate(cfg: &SystemConfig) -> Result<DesignInputs, ValidationErrors> {
    let k = PhysicalConstants::CODATA_2018;
    let mut c = Checker::default();

    let ion = &cfg.ion;
    c.non_negative("ion.mu_g1", ion.mu_g1);
    c.positive("ion.d_g2", ion.d_g2);
    c.positive("ion.gamma_o", ion.gamma_o);
    if let Some(g) = ion.g_lande {
        c.positive("ion.g_lande", g);
    }
    if let Some(d) = ion.d_12 {
        c.positive("ion.d_12", d);
    }
    if let Some((w, p)) = ion.rabi_calibration {
        c.non_negative("ion.rabi_calibration.omega0", w);
        c.positive("ion.rabi_calibration.power", p);
    }

    c.positive("crystal.radius", cfg.crystal.radius);
    c.non_negative("crystal.rho", cfg.crystal.rho);

    let microwave = cavity(
        &mut c,
        &cfg.microwave_cavity,
        Band::Microwave,
        [
            "microwave_cavity.omega",
            "microwave_cavity.kappa",
            "microwave_cavity.Q",
            "microwave_cavity.V_mode",
            "microwave_cavity.Q_max",
        ],
    );
    let optical = cavity(
        &mut c,
        &cfg.optical_cavity,
        Band::Optical,
        [
            "optical_cavity.omega",
            "optical_cavity.kappa",
            "optical_cavity.Q",
            "optical_cavity.V_mode",
            "optical_cavity.Q_max",
        ],
    );
    let oc = &cfg.optical_cavity;
    if let Some(w) = oc.waist {
        c.positive("optical_cavity.waist", w);
    }
    if let Some(f) = oc.fsr {
        c.positive("optical_cavity.fsr", f);
    }
    if let Some(l) = oc.wavelength {
        c.positive("optical_cavity.wavelength", l);
    }
    if let Some(f) = oc.overlap {
        c.in_range("optical_cavity.overlap", f, 0.0, 1.0);
    }

    let m = &cfg.magnon;
    c.positive("magnon.mode_spacing", m.mode_spacing);
    let delta_m = m.delta_m.unwrap_or(m.mode_spacing);
    if c.finite("magnon.delta_M", delta_m) && delta_m.abs() > m.mode_spacing {
        c.found.push(Violation::DetuningOutsideModeWindow {
            delta_m,
            mode_spacing: m.mode_spacing,
        });
    }
    let gamma_m = m.gamma_m.unwrap_or(0.0);
    c.non_negative("magnon.gamma_m", gamma_m);
    if let Some(b) = m.b0 {
        c.non_negative("magnon.B0", b);
    }
    let b0 = m.b0.or_else(|| {
        let g = ion.g_lande?;
        kittel_field(&k, g, cfg.microwave_cavity.omega + delta_m).ok()
    });

    let d = &cfg.drive;
    c.non_negative("drive.pump_power", d.pump_power);
    let derived_pump = cfg.optical_cavity.omega - cfg.microwave_cavity.omega;
    c.positive("drive.omega_Omega", derived_pump);
    if let Some(given) = d.omega_omega {
        if (given - derived_pump).abs() > 1e-12 * derived_pump.abs() {
            c.found.push(Violation::ThreePhotonMismatch {
                given,
                derived: derived_pump,
            });
        }
    }
    let calibration = ion.rabi_calibration.map(|(w, p)| RabiCalibration {
        omega0: AngularFrequency(w),
        power: p,
    });
    let omega0 = match (d.omega0, calibration) {
        (Some(w), _) => {
            c.non_negative("drive.Omega0", w);
            w
        }
        (None, Some(cal)) => cal.rabi_at(d.pump_power).0,
        (None, None) => {
            c.found.push(Violation::MissingRabiSource);
            0.0
        }
    };
    if let Some(dl) = d.delta_o {
        c.finite("drive.delta_o", dl);
        if dl == 0.0 {
            c.found.push(Violation::NonPositive {
                field: "drive.delta_o",
                value: dl,
            });
        }
    }

    if !c.found.is_empty() {
        return Err(ValidationErrors(c.found));
    }

    Ok(DesignInputs {
        ion: IonSpecies {
            name: ion.name.clone().unwrap_or_default(),
            mu_g1: ion.mu_g1,
            d_g2: ion.d_g2,
            gamma_o: AngularFrequency(ion.gamma_o),
            g_lande: ion.g_lande,
            d_12: ion.d_12,
            rabi_calibration: calibration,
        },
        crystal: CrystalSample::new(cfg.crystal.radius, cfg.crystal.rho),
        microwave,
        optical,
        optical_layout: OpticalLayout {
            waist: oc.waist,
            fsr: oc.fsr.map(AngularFrequency),
            wavelength: oc.wavelength,
            overlap: oc.overlap,
        },
        magnon: MagnonSpec {
            delta_m: AngularFrequency(delta_m),
            mode_spacing: AngularFrequency(m.mode_spacing),
            gamma_m: AngularFrequency(gamma_m),
            b0,
        },
        drive: DriveSpec {
            omega_omega: AngularFrequency(derived_pump),
            pump_power: d.pump_power,
            omega0: AngularFrequency(omega0),
            delta_o: d.delta_o.map(AngularFrequency),
        },
    })
}
