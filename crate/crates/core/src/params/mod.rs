//! Physical constants, units, domain parameter types and config ingestion.

mod config;
mod constants;
mod types;
mod units;
mod validate;
mod zeeman;

pub use config::{
    config_from_value, inputs_digest, load_config, lookup_field, serialize_inputs, set_field,
    to_config_value, ConfigError, FieldKind, FieldSpec, RawCavity, RawCrystal, RawDrive,
    RawIon, RawMagnon, SystemConfig, SCHEMA,
};
pub use constants::PhysicalConstants;
pub use types::{
    sphere_volume, Band, CavitySpec, CrystalSample, DesignInputs, DriveSpec, IonSpecies,
    MagnonSpec, OpticalLayout, RabiCalibration,
};
pub use units::{bare_to_internal, parse_frequency, AngularFrequency, Dimension, Unit};
pub use validate::{validate, ValidationErrors, Violation};
pub use zeeman::{kittel_field, ZeemanError};

/// The bundled ErCl₃·6H₂O reference device document.
pub const REFERENCE_CONFIG: &str = include_str!("../../data/erclh.json");

/// Parses and validates the bundled reference config.
pub fn reference_inputs() -> DesignInputs {
    let cfg = load_config(REFERENCE_CONFIG).expect("bundled config parses");
    validate(&cfg).expect("bundled config validates")
}
