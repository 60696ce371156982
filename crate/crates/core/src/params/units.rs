//! Unit tags accepted in config documents and the angular-frequency newtype.
//!
//! Internally every frequency is angular (rad/s). Documents and CLI flags are
//! in Hz unless a tag says otherwise.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// An angular frequency in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngularFrequency(pub f64);

impl AngularFrequency {
    pub const ZERO: AngularFrequency = AngularFrequency(0.0);

    pub fn from_hz(hz: f64) -> Self {
        AngularFrequency(TAU * hz)
    }

    pub fn from_rad_per_s(w: f64) -> Self {
        AngularFrequency(w)
    }

    pub fn rad_per_s(self) -> f64 {
        self.0
    }

    pub fn hz(self) -> f64 {
        self.0 / TAU
    }
}

impl fmt::Display for AngularFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad/s", self.0)
    }
}

/// Physical dimension a config field expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    Length,
    Power,
    MagneticField,
    /// Anything given only as a bare SI number (dipoles, densities, volumes, ratios).
    Bare,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Frequency => "frequency",
            Dimension::Length => "length",
            Dimension::Power => "power",
            Dimension::MagneticField => "magnetic field",
            Dimension::Bare => "dimensionless/SI",
        };
        f.write_str(s)
    }
}

/// The enumerated unit tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    GHz,
    MHz,
    Hz,
    RadPerS,
    Mm,
    M,
    MicroW,
    W,
    Tesla,
}

impl Unit {
    pub const ALL: [Unit; 9] = [
        Unit::GHz,
        Unit::MHz,
        Unit::Hz,
        Unit::RadPerS,
        Unit::Mm,
        Unit::M,
        Unit::MicroW,
        Unit::W,
        Unit::Tesla,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Unit::GHz => "GHz",
            Unit::MHz => "MHz",
            Unit::Hz => "Hz",
            Unit::RadPerS => "rad/s",
            Unit::Mm => "mm",
            Unit::M => "m",
            Unit::MicroW => "uW",
            Unit::W => "W",
            Unit::Tesla => "T",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Unit::GHz | Unit::MHz | Unit::Hz | Unit::RadPerS => Dimension::Frequency,
            Unit::Mm | Unit::M => Dimension::Length,
            Unit::MicroW | Unit::W => Dimension::Power,
            Unit::Tesla => Dimension::MagneticField,
        }
    }

    /// Converts `value` in this unit to the internal unit (rad/s, m, W, T).
    pub fn to_internal(self, value: f64) -> f64 {
        match self {
            Unit::GHz => TAU * (value * 1e9),
            Unit::MHz => TAU * (value * 1e6),
            Unit::Hz => TAU * value,
            Unit::RadPerS => value,
            Unit::Mm => value * 1e-3,
            Unit::M => value,
            Unit::MicroW => value * 1e-6,
            Unit::W => value,
            Unit::Tesla => value,
        }
    }

    /// The tag used when writing internal values back out losslessly.
    pub fn internal_for(dim: Dimension) -> Option<Unit> {
        match dim {
            Dimension::Frequency => Some(Unit::RadPerS),
            Dimension::Length => Some(Unit::M),
            Dimension::Power => Some(Unit::W),
            Dimension::MagneticField => Some(Unit::Tesla),
            Dimension::Bare => None,
        }
    }
}

impl FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Unit::ALL
            .into_iter()
            .find(|u| u.tag() == s)
            .ok_or_else(|| s.to_string())
    }
}

/// Converts a bare number (no unit tag) of the given dimension to internal units.
/// Bare frequencies are read as Hz, everything else as SI base units.
pub fn bare_to_internal(dim: Dimension, value: f64) -> f64 {
    match dim {
        Dimension::Frequency => TAU * value,
        _ => value,
    }
}

/// Parses a CLI frequency such as `5GHz`, `2e6Hz`, `3e7rad/s` or a bare `1e6` (Hz).
pub fn parse_frequency(text: &str) -> Result<AngularFrequency, String> {
    let t = text.trim();
    for unit in [Unit::RadPerS, Unit::GHz, Unit::MHz, Unit::Hz] {
        if let Some(num) = t.strip_suffix(unit.tag()) {
            let v: f64 = num
                .trim()
                .parse()
                .map_err(|_| format!("invalid frequency `{text}`"))?;
            return Ok(AngularFrequency(unit.to_internal(v)));
        }
    }
    let v: f64 = t.parse().map_err(|_| format!("invalid frequency `{text}`"))?;
    Ok(AngularFrequency::from_hz(v))
}
