//! Physical constants (CODATA 2018).

use serde::{Deserialize, Serialize};

/// Set of fundamental constants used by every coupling formula.
///
/// Kept as a value rather than bare `const`s so the coupling routines can be
/// evaluated with rescaled constants in dimensional-analysis tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Vacuum permeability, T·m/A.
    pub mu0: f64,
    /// Vacuum permittivity, F/m.
    pub eps0: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Bohr magneton, J/T.
    pub mu_b: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar: 1.054_571_817e-34,
        mu0: 1.256_637_062_12e-6,
        eps0: 8.854_187_812_8e-12,
        c: 299_792_458.0,
        mu_b: 9.274_010_078_3e-24,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_relation_holds() {
        let k = PhysicalConstants::CODATA_2018;
        let prod = k.c * k.c * k.eps0 * k.mu0;
        assert!((prod - 1.0).abs() < 1e-9, "c^2 eps0 mu0 = {prod}");
    }
}
