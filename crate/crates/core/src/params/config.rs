//! JSON config documents: schema, parsing into [`SystemConfig`] and writing
//! [`DesignInputs`] back out.
//!
//! Every numeric field is either a bare number or `{"value": x, "unit": tag}`.
//! Bare frequencies are Hz; all other bare numbers are SI.

use serde_json::{Map, Value};
use thiserror::Error;

use super::types::{
    Band, CavitySpec, DesignInputs, DriveSpec, IonSpecies, MagnonSpec, OpticalLayout,
    RabiCalibration,
};
use super::units::{bare_to_internal, Dimension, Unit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("malformed config document: {0}")]
    Parse(String),
    #[error("unknown field `{path}`")]
    UnknownField { path: String },
    #[error("missing field `{section}.{field}`")]
    MissingField { section: String, field: String },
    #[error("unknown unit tag `{unit}` on `{path}`")]
    UnknownUnit { path: String, unit: String },
    #[error("unit `{unit}` on `{path}` is not a {expected}")]
    UnitMismatch {
        path: String,
        unit: String,
        expected: Dimension,
    },
    #[error("invalid value for `{path}`: {reason}")]
    InvalidValue { path: String, reason: String },
}

impl ConfigError {
    /// The offending field's name without its section, where there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::MissingField { field, .. } => Some(field),
            ConfigError::UnknownField { path }
            | ConfigError::UnknownUnit { path, .. }
            | ConfigError::UnitMismatch { path, .. }
            | ConfigError::InvalidValue { path, .. } => path.rsplit('.').next(),
            ConfigError::Parse(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    Quantity(Dimension),
    Text,
    Object(&'static [FieldSpec]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    pub name: &'static str,
    pub kind: FieldKind,
    pub required: bool,
}

const fn req(name: &'static str, dim: Dimension) -> FieldSpec {
    FieldSpec {
        name,
        kind: FieldKind::Quantity(dim),
        required: true,
    }
}

const fn opt(name: &'static str, dim: Dimension) -> FieldSpec {
    FieldSpec {
        name,
        kind: FieldKind::Quantity(dim),
        required: false,
    }
}

use Dimension::{Bare, Frequency, Length, MagneticField, Power};

const CALIBRATION_FIELDS: &[FieldSpec] = &[req("omega0", Frequency), req("power", Power)];

const ION_FIELDS: &[FieldSpec] = &[
    FieldSpec {
        name: "name",
        kind: FieldKind::Text,
        required: false,
    },
    req("mu_g1", Bare),
    req("d_g2", Bare),
    req("gamma_o", Frequency),
    opt("g_lande", Bare),
    opt("d_12", Bare),
    FieldSpec {
        name: "rabi_calibration",
        kind: FieldKind::Object(CALIBRATION_FIELDS),
        required: false,
    },
];

const CRYSTAL_FIELDS: &[FieldSpec] = &[req("radius", Length), req("rho", Bare)];

const MICROWAVE_FIELDS: &[FieldSpec] = &[
    req("omega", Frequency),
    opt("kappa", Frequency),
    opt("Q", Bare),
    req("V_mode", Bare),
    opt("Q_max", Bare),
];

const OPTICAL_FIELDS: &[FieldSpec] = &[
    req("omega", Frequency),
    opt("kappa", Frequency),
    opt("Q", Bare),
    req("V_mode", Bare),
    opt("Q_max", Bare),
    opt("waist", Length),
    opt("fsr", Frequency),
    opt("wavelength", Length),
    opt("overlap", Bare),
];

const MAGNON_FIELDS: &[FieldSpec] = &[
    opt("delta_M", Frequency),
    req("mode_spacing", Frequency),
    opt("gamma_m", Frequency),
    opt("B0", MagneticField),
];

const DRIVE_FIELDS: &[FieldSpec] = &[
    opt("omega_Omega", Frequency),
    req("pump_power", Power),
    opt("Omega0", Frequency),
    opt("delta_o", Frequency),
];

/// Top-level sections and their fields.
pub const SCHEMA: &[(&str, &[FieldSpec])] = &[
    ("ion", ION_FIELDS),
    ("crystal", CRYSTAL_FIELDS),
    ("microwave_cavity", MICROWAVE_FIELDS),
    ("optical_cavity", OPTICAL_FIELDS),
    ("magnon", MAGNON_FIELDS),
    ("drive", DRIVE_FIELDS),
];

/// Looks up a dotted path such as `drive.pump_power` or
/// `ion.rabi_calibration.omega0` in the schema.
pub fn lookup_field(path: &str) -> Option<FieldSpec> {
    let mut parts = path.split('.');
    let section = parts.next()?;
    let mut fields = SCHEMA.iter().find(|(s, _)| *s == section)?.1;
    let mut found = None;
    for part in parts {
        if let Some(FieldSpec {
            kind: FieldKind::Object(inner),
            ..
        }) = found
        {
            fields = inner;
        } else if found.is_some() {
            return None;
        }
        found = Some(*fields.iter().find(|f| f.name == part)?);
    }
    found
}

/// Writes `value` at the dotted `path` of a raw document, creating
/// intermediate objects. The path must exist in the schema.
pub fn set_field(doc: &mut Value, path: &str, value: Value) -> Result<(), ConfigError> {
    if lookup_field(path).is_none() {
        return Err(ConfigError::UnknownField { path: path.into() });
    }
    let parts: Vec<&str> = path.split('.').collect();
    let mut cur = doc;
    for part in &parts[..parts.len() - 1] {
        let obj = cur.as_object_mut().ok_or_else(|| ConfigError::InvalidValue {
            path: path.into(),
            reason: "parent is not an object".into(),
        })?;
        cur = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    let obj = cur.as_object_mut().ok_or_else(|| ConfigError::InvalidValue {
        path: path.into(),
        reason: "parent is not an object".into(),
    })?;
    obj.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Parsed, unit-resolved but not yet validated configuration.
///
/// Values are in internal units (rad/s, m, W, T, SI).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub ion: RawIon,
    pub crystal: RawCrystal,
    pub microwave_cavity: RawCavity,
    pub optical_cavity: RawCavity,
    pub magnon: RawMagnon,
    pub drive: RawDrive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawIon {
    pub name: Option<String>,
    pub mu_g1: f64,
    pub d_g2: f64,
    pub gamma_o: f64,
    pub g_lande: Option<f64>,
    pub d_12: Option<f64>,
    /// `(omega0, power)`.
    pub rabi_calibration: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawCrystal {
    pub radius: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawCavity {
    pub omega: f64,
    pub kappa: Option<f64>,
    pub q: Option<f64>,
    pub v_mode: f64,
    pub q_max: Option<f64>,
    pub waist: Option<f64>,
    pub fsr: Option<f64>,
    pub wavelength: Option<f64>,
    pub overlap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawMagnon {
    pub delta_m: Option<f64>,
    pub mode_spacing: f64,
    pub gamma_m: Option<f64>,
    pub b0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDrive {
    pub omega_omega: Option<f64>,
    pub pump_power: f64,
    pub omega0: Option<f64>,
    pub delta_o: Option<f64>,
}

/// Parses a config document.
pub fn load_config(text: &str) -> Result<SystemConfig, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    config_from_value(&doc)
}

/// Same as [`load_config`] for an already-parsed JSON value.
pub fn config_from_value(doc: &Value) -> Result<SystemConfig, ConfigError> {
    let root = doc
        .as_object()
        .ok_or_else(|| ConfigError::Parse("top level must be an object".into()))?;
    for key in root.keys() {
        if !SCHEMA.iter().any(|(s, _)| s == key) {
            return Err(ConfigError::UnknownField { path: key.clone() });
        }
    }
    let section = |name: &'static str| -> Result<Section<'_>, ConfigError> {
        let fields = SCHEMA.iter().find(|(s, _)| *s == name).unwrap().1;
        Section::new(name.to_string(), root.get(name), fields)
    };

    let ion = section("ion")?;
    let calibration = match ion.object("rabi_calibration")? {
        Some(cal) => Some((cal.required("omega0")?, cal.required("power")?)),
        None => None,
    };
    let ion = RawIon {
        name: ion.text("name")?,
        mu_g1: ion.required("mu_g1")?,
        d_g2: ion.required("d_g2")?,
        gamma_o: ion.required("gamma_o")?,
        g_lande: ion.optional("g_lande")?,
        d_12: ion.optional("d_12")?,
        rabi_calibration: calibration,
    };

    let crystal = section("crystal")?;
    let crystal = RawCrystal {
        radius: crystal.required("radius")?,
        rho: crystal.required("rho")?,
    };

    let cavity = |name: &'static str| -> Result<RawCavity, ConfigError> {
        let s = section(name)?;
        let layout = |f: &str| {
            if s.fields.iter().any(|spec| spec.name == f) {
                s.optional(f)
            } else {
                Ok(None)
            }
        };
        Ok(RawCavity {
            omega: s.required("omega")?,
            kappa: s.optional("kappa")?,
            q: s.optional("Q")?,
            v_mode: s.required("V_mode")?,
            q_max: s.optional("Q_max")?,
            waist: layout("waist")?,
            fsr: layout("fsr")?,
            wavelength: layout("wavelength")?,
            overlap: layout("overlap")?,
        })
    };
    let microwave_cavity = cavity("microwave_cavity")?;
    let optical_cavity = cavity("optical_cavity")?;

    let magnon = section("magnon")?;
    let magnon = RawMagnon {
        delta_m: magnon.optional("delta_M")?,
        mode_spacing: magnon.required("mode_spacing")?,
        gamma_m: magnon.optional("gamma_m")?,
        b0: magnon.optional("B0")?,
    };

    let drive = section("drive")?;
    let drive = RawDrive {
        omega_omega: drive.optional("omega_Omega")?,
        pump_power: drive.required("pump_power")?,
        omega0: drive.optional("Omega0")?,
        delta_o: drive.optional("delta_o")?,
    };

    Ok(SystemConfig {
        ion,
        crystal,
        microwave_cavity,
        optical_cavity,
        magnon,
        drive,
    })
}

struct Section<'a> {
    path: String,
    map: Option<&'a Map<String, Value>>,
    fields: &'static [FieldSpec],
}

impl<'a> Section<'a> {
    fn new(
        path: String,
        value: Option<&'a Value>,
        fields: &'static [FieldSpec],
    ) -> Result<Self, ConfigError> {
        let map = match value {
            None => None,
            Some(Value::Object(m)) => Some(m),
            Some(_) => {
                return Err(ConfigError::InvalidValue {
                    path,
                    reason: "expected an object".into(),
                })
            }
        };
        if let Some(m) = map {
            for key in m.keys() {
                if !fields.iter().any(|f| f.name == key) {
                    return Err(ConfigError::UnknownField {
                        path: format!("{path}.{key}"),
                    });
                }
            }
        }
        Ok(Section { path, map, fields })
    }

    fn spec(&self, name: &str) -> FieldSpec {
        *self
            .fields
            .iter()
            .find(|f| f.name == name)
            .expect("field present in schema")
    }

    fn get(&self, name: &str) -> Option<&'a Value> {
        self.map.and_then(|m| m.get(name)).filter(|v| !v.is_null())
    }

    fn missing(&self, name: &str) -> ConfigError {
        ConfigError::MissingField {
            section: self.path.clone(),
            field: name.into(),
        }
    }

    fn optional(&self, name: &str) -> Result<Option<f64>, ConfigError> {
        let FieldKind::Quantity(dim) = self.spec(name).kind else {
            unreachable!("not a quantity field: {name}")
        };
        match self.get(name) {
            None => Ok(None),
            Some(v) => parse_quantity(v, dim, &format!("{}.{name}", self.path)).map(Some),
        }
    }

    fn required(&self, name: &str) -> Result<f64, ConfigError> {
        self.optional(name)?.ok_or_else(|| self.missing(name))
    }

    fn text(&self, name: &str) -> Result<Option<String>, ConfigError> {
        match self.get(name) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(ConfigError::InvalidValue {
                path: format!("{}.{name}", self.path),
                reason: "expected a string".into(),
            }),
        }
    }

    fn object(&self, name: &str) -> Result<Option<Section<'a>>, ConfigError> {
        let FieldKind::Object(fields) = self.spec(name).kind else {
            unreachable!("not an object field: {name}")
        };
        match self.get(name) {
            None => Ok(None),
            Some(v) => Section::new(format!("{}.{name}", self.path), Some(v), fields).map(Some),
        }
    }
}

fn parse_quantity(v: &Value, dim: Dimension, path: &str) -> Result<f64, ConfigError> {
    let invalid = |reason: &str| ConfigError::InvalidValue {
        path: path.into(),
        reason: reason.into(),
    };
    match v {
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(|| invalid("not representable as f64"))?;
            Ok(bare_to_internal(dim, x))
        }
        Value::Object(m) => {
            for key in m.keys() {
                if key != "value" && key != "unit" {
                    return Err(ConfigError::UnknownField {
                        path: format!("{path}.{key}"),
                    });
                }
            }
            let x = m
                .get("value")
                .and_then(Value::as_f64)
                .ok_or_else(|| invalid("tagged quantity needs a numeric `value`"))?;
            let tag = m
                .get("unit")
                .and_then(Value::as_str)
                .ok_or_else(|| invalid("tagged quantity needs a string `unit`"))?;
            let unit: Unit = tag.parse().map_err(|_| ConfigError::UnknownUnit {
                path: path.into(),
                unit: tag.into(),
            })?;
            if unit.dimension() != dim {
                return Err(ConfigError::UnitMismatch {
                    path: path.into(),
                    unit: tag.into(),
                    expected: dim,
                });
            }
            Ok(unit.to_internal(x))
        }
        _ => Err(invalid("expected a number or {value, unit}")),
    }
}

fn tagged(dim: Dimension, x: f64) -> Value {
    match Unit::internal_for(dim) {
        Some(u) => serde_json::json!({ "value": x, "unit": u.tag() }),
        None => serde_json::json!(x),
    }
}

fn put(map: &mut Map<String, Value>, key: &str, dim: Dimension, x: Option<f64>) {
    if let Some(x) = x {
        map.insert(key.into(), tagged(dim, x));
    }
}

fn cavity_value(c: &CavitySpec, layout: Option<&OpticalLayout>) -> Value {
    let mut m = Map::new();
    put(&mut m, "omega", Frequency, Some(c.omega.0));
    put(&mut m, "kappa", Frequency, c.kappa.map(|k| k.0));
    put(&mut m, "V_mode", Bare, Some(c.v_mode));
    put(&mut m, "Q_max", Bare, c.q_max);
    if let Some(l) = layout {
        put(&mut m, "waist", Length, l.waist);
        put(&mut m, "fsr", Frequency, l.fsr.map(|f| f.0));
        put(&mut m, "wavelength", Length, l.wavelength);
        put(&mut m, "overlap", Bare, l.overlap);
    }
    Value::Object(m)
}

/// Writes validated inputs as a config document that loads back to the same
/// values (dimensioned fields carry internal-unit tags).
pub fn to_config_value(inputs: &DesignInputs) -> Value {
    let ion: &IonSpecies = &inputs.ion;
    let mut ion_m = Map::new();
    ion_m.insert("name".into(), Value::String(ion.name.clone()));
    put(&mut ion_m, "mu_g1", Bare, Some(ion.mu_g1));
    put(&mut ion_m, "d_g2", Bare, Some(ion.d_g2));
    put(&mut ion_m, "gamma_o", Frequency, Some(ion.gamma_o.0));
    put(&mut ion_m, "g_lande", Bare, ion.g_lande);
    put(&mut ion_m, "d_12", Bare, ion.d_12);
    if let Some(RabiCalibration { omega0, power }) = ion.rabi_calibration {
        let mut cal = Map::new();
        put(&mut cal, "omega0", Frequency, Some(omega0.0));
        put(&mut cal, "power", Power, Some(power));
        ion_m.insert("rabi_calibration".into(), Value::Object(cal));
    }

    let mut crystal = Map::new();
    put(&mut crystal, "radius", Length, Some(inputs.crystal.radius));
    put(&mut crystal, "rho", Bare, Some(inputs.crystal.rho));

    let MagnonSpec {
        delta_m,
        mode_spacing,
        gamma_m,
        b0,
    } = inputs.magnon;
    let mut magnon = Map::new();
    put(&mut magnon, "delta_M", Frequency, Some(delta_m.0));
    put(&mut magnon, "mode_spacing", Frequency, Some(mode_spacing.0));
    put(&mut magnon, "gamma_m", Frequency, Some(gamma_m.0));
    put(&mut magnon, "B0", MagneticField, b0);

    let DriveSpec {
        omega_omega,
        pump_power,
        omega0,
        delta_o,
    } = inputs.drive;
    let mut drive = Map::new();
    put(&mut drive, "omega_Omega", Frequency, Some(omega_omega.0));
    put(&mut drive, "pump_power", Power, Some(pump_power));
    put(&mut drive, "Omega0", Frequency, Some(omega0.0));
    put(&mut drive, "delta_o", Frequency, delta_o.map(|d| d.0));

    let mut root = Map::new();
    root.insert("ion".into(), Value::Object(ion_m));
    root.insert("crystal".into(), Value::Object(crystal));
    debug_assert_eq!(inputs.microwave.band, Band::Microwave);
    root.insert(
        "microwave_cavity".into(),
        cavity_value(&inputs.microwave, None),
    );
    root.insert(
        "optical_cavity".into(),
        cavity_value(&inputs.optical, Some(&inputs.optical_layout)),
    );
    root.insert("magnon".into(), Value::Object(magnon));
    root.insert("drive".into(), Value::Object(drive));
    Value::Object(root)
}

/// Pretty-printed form of [`to_config_value`].
pub fn serialize_inputs(inputs: &DesignInputs) -> String {
    serde_json::to_string_pretty(&to_config_value(inputs)).expect("json values serialize")
}

/// Opaque token identifying a set of inputs: SHA-256 of the canonical
/// serialized document, hex encoded.
pub fn inputs_digest(inputs: &DesignInputs) -> String {
    use sha2::{Digest, Sha256};
    let canonical = serde_json::to_string(&to_config_value(inputs)).expect("json values serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}
