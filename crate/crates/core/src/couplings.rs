//! Single-ion and collective coupling rates, and the effective
//! microwave–optical coupling obtained after eliminating the Kittel mode.
//!
//! All rates are angular (rad/s). Dipole projections onto the mode functions
//! enter as scalar factors in `[0, 1]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{DesignInputs, PhysicalConstants};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error("`{name}` = {value} violates precondition: {rule}")]
    Precondition {
        name: &'static str,
        value: f64,
        rule: &'static str,
    },
    #[error("optical detuning is zero; the excited state cannot be adiabatically eliminated")]
    ZeroOpticalDetuning,
    #[error("Kittel-mode detuning is zero; the magnon cannot be adiabatically eliminated")]
    ZeroMagnonDetuning,
    #[error("empty ion sample list")]
    NoSamples,
    #[error("non-finite result evaluating {0}")]
    Numeric(&'static str),
}

fn positive(name: &'static str, value: f64) -> Result<(), CouplingError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CouplingError::Precondition {
            name,
            value,
            rule: "must be > 0",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<(), CouplingError> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CouplingError::Precondition {
            name,
            value,
            rule: "must be >= 0",
        })
    }
}

fn unit_interval(name: &'static str, value: f64) -> Result<(), CouplingError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(CouplingError::Precondition {
            name,
            value,
            rule: "must lie in [0, 1]",
        })
    }
}

fn finite(what: &'static str, x: f64) -> Result<f64, CouplingError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CouplingError::Numeric(what))
    }
}

/// Vacuum magnetic-field coupling of one ion to the microwave mode,
/// `√(ω_μ μ₀ / 2ħV_μ) · μ_g1 · χ`.
pub fn single_ion_mu_coupling(
    k: &PhysicalConstants,
    omega_mu: f64,
    v_mu: f64,
    mu_g1: f64,
    chi: f64,
) -> Result<f64, CouplingError> {
    positive("omega_mu", omega_mu)?;
    positive("V_mu", v_mu)?;
    non_negative("mu_g1", mu_g1)?;
    unit_interval("chi", chi)?;
    let field = (omega_mu * k.mu0 / (2.0 * k.hbar * v_mu)).sqrt();
    finite("single-ion microwave coupling", field * mu_g1 * chi)
}

/// Vacuum electric-field coupling of one ion to the optical mode,
/// `√(ω_o / 2ħε₀V_o) · d_g2 · φ`.
pub fn single_ion_o_coupling(
    k: &PhysicalConstants,
    omega_o: f64,
    v_o: f64,
    d_g2: f64,
    phi: f64,
) -> Result<f64, CouplingError> {
    positive("omega_o", omega_o)?;
    positive("V_o", v_o)?;
    non_negative("d_g2", d_g2)?;
    unit_interval("phi", phi)?;
    let field = (omega_o / (2.0 * k.hbar * k.eps0 * v_o)).sqrt();
    finite("single-ion optical coupling", field * d_g2 * phi)
}

/// Collective microwave–Kittel coupling for a uniform microwave mode:
/// `√(ρV_c) · g_μ(χ = 1)`.
pub fn collective_mu_coupling(
    k: &PhysicalConstants,
    rho: f64,
    v_c: f64,
    omega_mu: f64,
    v_mu: f64,
    mu_g1: f64,
) -> Result<f64, CouplingError> {
    non_negative("rho", rho)?;
    positive("V_c", v_c)?;
    let g = single_ion_mu_coupling(k, omega_mu, v_mu, mu_g1, 1.0)?;
    finite("collective microwave coupling", (rho * v_c).sqrt() * g)
}

/// Arguments of [`collective_raman_coupling`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanCouplingInputs {
    pub rho: f64,
    pub v_c: f64,
    pub omega_o: f64,
    pub v_o: f64,
    pub d_g2: f64,
    pub omega0: f64,
    pub delta_o: f64,
    /// Optical overlap integral.
    pub overlap: f64,
}

/// Collective two-photon (Raman) coupling of the optical cavity to the
/// Kittel mode, `√(ρV_c) · g_o · (Ω₀/|Δ_o|) · F`.
pub fn collective_raman_coupling(
    k: &PhysicalConstants,
    p: &RamanCouplingInputs,
) -> Result<f64, CouplingError> {
    if p.delta_o == 0.0 {
        return Err(CouplingError::ZeroOpticalDetuning);
    }
    non_negative("rho", p.rho)?;
    positive("V_c", p.v_c)?;
    non_negative("Omega0", p.omega0)?;
    unit_interval("F", p.overlap)?;
    let g = single_ion_o_coupling(k, p.omega_o, p.v_o, p.d_g2, 1.0)?;
    finite(
        "collective Raman coupling",
        (p.rho * p.v_c).sqrt() * g * (p.omega0 / p.delta_o.abs()) * p.overlap,
    )
}

/// Effective coupling between the two cavities after eliminating the Kittel mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConversionCoupling {
    /// `|G_μ G_{o,Ω} / Δ_M|`, rad/s.
    pub magnitude: f64,
    /// Phase of `G_μ* G_{o,Ω} / Δ_M` for real signed inputs: 0 or π.
    pub phase: f64,
}

impl ConversionCoupling {
    pub fn complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(self.magnitude, self.phase)
    }
}

pub fn conversion_coupling(
    g_mu: f64,
    g_o: f64,
    delta_m: f64,
) -> Result<ConversionCoupling, CouplingError> {
    if delta_m == 0.0 {
        return Err(CouplingError::ZeroMagnonDetuning);
    }
    let signed = g_mu * g_o / delta_m;
    let signed = finite("conversion coupling", signed)?;
    Ok(ConversionCoupling {
        magnitude: signed.abs(),
        phase: if signed < 0.0 { std::f64::consts::PI } else { 0.0 },
    })
}

/// Mode amplitudes seen by one ion and its own optical detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonSample {
    /// Microwave mode amplitude |χ(r_k)|.
    pub chi: f64,
    /// Optical cavity mode amplitude |φ(r_k)|.
    pub phi: f64,
    /// Pump mode amplitude |ε(r_k)|.
    pub eps: f64,
    /// Optical detuning Δ_o,k (signed), rad/s.
    pub delta_o: f64,
}

/// Per-ion coupling rates at unit mode amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCouplings {
    /// g_μ at χ = 1.
    pub g_mu: f64,
    /// g_o at φ = 1.
    pub g_o: f64,
    /// Peak Rabi frequency Ω₀.
    pub omega0: f64,
}

/// Exact discrete collective sums
/// `G_μ = (1/√N) Σ g_μ,k` and `G_{o,Ω} = (1/√N) Σ Ω_k g_o,k / Δ_o,k`.
///
/// With `population = Some(N)` the samples are treated as a uniform random
/// draw from `N` ions, giving `√N · mean(...)`; otherwise `N` is the sample count.
pub fn discrete_collective_sums(
    samples: &[IonSample],
    unit: &UnitCouplings,
    population: Option<f64>,
) -> Result<(f64, f64), CouplingError> {
    if samples.is_empty() {
        return Err(CouplingError::NoSamples);
    }
    let mut sum_mu = 0.0;
    let mut sum_o = 0.0;
    for s in samples {
        if s.delta_o == 0.0 {
            return Err(CouplingError::ZeroOpticalDetuning);
        }
        sum_mu += unit.g_mu * s.chi;
        sum_o += unit.omega0 * s.eps * unit.g_o * s.phi / s.delta_o;
    }
    let m = samples.len() as f64;
    let scale = match population {
        Some(n) => n.sqrt() / m,
        None => 1.0 / m.sqrt(),
    };
    Ok((
        finite("discrete G_mu", sum_mu * scale)?,
        finite("discrete G_oOmega", sum_o * scale)?,
    ))
}

/// Coupling rates derived for one set of inputs at a given optical detuning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    pub g_mu: f64,
    pub g_o: f64,
    pub omega0: f64,
    /// Collective microwave coupling at full dipole projection.
    pub g_mu_collective: f64,
    /// Collective Raman coupling at the full available Rabi frequency.
    pub g_o_omega: f64,
    pub xi: ConversionCoupling,
    pub delta_o: f64,
    pub overlap: f64,
    pub inputs_digest: String,
}

impl CouplingSet {
    pub fn evaluate(
        k: &PhysicalConstants,
        inputs: &DesignInputs,
        delta_o: f64,
        overlap: f64,
    ) -> Result<Self, CouplingError> {
        let omega_mu = inputs.microwave.omega.0;
        let omega_o = inputs.optical.omega.0;
        let g_mu = single_ion_mu_coupling(k, omega_mu, inputs.microwave.v_mode, inputs.ion.mu_g1, 1.0)?;
        let g_o = single_ion_o_coupling(k, omega_o, inputs.optical.v_mode, inputs.ion.d_g2, 1.0)?;
        let g_mu_collective = collective_mu_coupling(
            k,
            inputs.crystal.rho,
            inputs.crystal.volume,
            omega_mu,
            inputs.microwave.v_mode,
            inputs.ion.mu_g1,
        )?;
        let g_o_omega = collective_raman_coupling(
            k,
            &RamanCouplingInputs {
                rho: inputs.crystal.rho,
                v_c: inputs.crystal.volume,
                omega_o,
                v_o: inputs.optical.v_mode,
                d_g2: inputs.ion.d_g2,
                omega0: inputs.drive.omega0.0,
                delta_o,
                overlap,
            },
        )?;
        let xi = conversion_coupling(g_mu_collective, g_o_omega, inputs.magnon.delta_m.0)?;
        Ok(CouplingSet {
            g_mu,
            g_o,
            omega0: inputs.drive.omega0.0,
            g_mu_collective,
            g_o_omega,
            xi,
            delta_o,
            overlap,
            inputs_digest: crate::params::inputs_digest(inputs),
        })
    }
}
