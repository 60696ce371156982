use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ScatteringError;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Two-port scattering coefficients at one common detuning `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPortS {
    pub r_mu: Complex64,
    pub r_o: Complex64,
    /// Microwave in, optical out.
    pub t_mo: Complex64,
    /// Optical in, microwave out.
    pub t_om: Complex64,
    pub omega: f64,
}

impl TwoPortS {
    pub fn eta(&self) -> f64 {
        self.t_mo.norm_sqr()
    }

    /// Largest departure from `|r|² + |t|² = 1` over both ports.
    pub fn unitarity_defect(&self) -> f64 {
        let mu = self.r_mu.norm_sqr() + self.t_mo.norm_sqr() - 1.0;
        let o = self.r_o.norm_sqr() + self.t_om.norm_sqr() - 1.0;
        mu.abs().max(o.abs())
    }
}

pub(crate) fn check_rates(kappa_mu: f64, kappa_o: f64) -> Result<(), ScatteringError> {
    for (name, v) in [("kappa_mu", kappa_mu), ("kappa_o", kappa_o)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ScatteringError::NonPositive { name, value: v });
        }
    }
    Ok(())
}

fn denominator(xi: Complex64, kappa_mu: f64, kappa_o: f64, omega: f64) -> Complex64 {
    let xi2 = xi.norm_sqr();
    (kappa_o / 2.0 + I * omega) * (kappa_mu / 2.0 + I * omega) + xi2
}

/// Input–output solution of the two coupled cavities
///
/// ```text
/// ȧ = -(κ_μ/2) a - iξ* b + √κ_μ a_in,   a_out = √κ_μ a - a_in
/// ḃ = -(κ_o/2) b - iξ  a + √κ_o b_in,   b_out = √κ_o b - b_in
/// ```
///
/// for inputs `∝ e^{iωt}`, giving `D = |ξ|² + (κ_o/2 + iω)(κ_μ/2 + iω)`.
pub fn smatrix(
    xi: Complex64,
    kappa_mu: f64,
    kappa_o: f64,
    omega: f64,
) -> Result<TwoPortS, ScatteringError> {
    check_rates(kappa_mu, kappa_o)?;
    if !omega.is_finite() || !xi.is_finite() {
        return Err(ScatteringError::NonFinite("smatrix argument"));
    }
    let d = denominator(xi, kappa_mu, kappa_o, omega);
    if d.norm_sqr() == 0.0 {
        return Err(ScatteringError::Singular { omega });
    }
    let xi2 = xi.norm_sqr();
    let root = (kappa_mu * kappa_o).sqrt();
    Ok(TwoPortS {
        r_mu: -(xi2 - (kappa_o / 2.0 + I * omega) * (kappa_mu / 2.0 - I * omega)) / d,
        r_o: -(xi2 - (kappa_mu / 2.0 + I * omega) * (kappa_o / 2.0 - I * omega)) / d,
        t_mo: -I * xi * root / d,
        t_om: -I * xi.conj() * root / d,
        omega,
    })
}

/// `η(ω) = |ξ|² κ_μ κ_o / |D|²`.
pub fn efficiency(xi: Complex64, kappa_mu: f64, kappa_o: f64, omega: f64) -> Result<f64, ScatteringError> {
    check_rates(kappa_mu, kappa_o)?;
    let d = denominator(xi, kappa_mu, kappa_o, omega);
    Ok(xi.norm_sqr() * kappa_mu * kappa_o / d.norm_sqr())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringSpectrum {
    pub omegas: Vec<f64>,
    pub entries: Vec<TwoPortS>,
    pub eta: Vec<f64>,
}

/// Grid of `n` points symmetric about zero, `ω_i = max·(2i - n + 1)/(n - 1)`,
/// so that `ω_i = -ω_{n-1-i}` exactly.
pub fn symmetric_grid(max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| max * (2.0 * i as f64 - m) / m)
        .collect()
}

/// Uniform grid on `[min, max]` with exact endpoints.
pub fn linear_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    if min == -max {
        return symmetric_grid(max, n);
    }
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let t = i as f64 / m;
            min * (1.0 - t) + max * t
        })
        .collect()
}

pub fn efficiency_spectrum(
    xi: Complex64,
    kappa_mu: f64,
    kappa_o: f64,
    omegas: &[f64],
) -> Result<ScatteringSpectrum, ScatteringError> {
    if omegas.iter().any(|w| !w.is_finite()) {
        return Err(ScatteringError::NonFinite("frequency grid"));
    }
    if omegas.windows(2).any(|w| w[1] < w[0]) {
        return Err(ScatteringError::UnsortedGrid);
    }
    let entries = omegas
        .iter()
        .map(|&w| smatrix(xi, kappa_mu, kappa_o, w))
        .collect::<Result<Vec<_>, _>>()?;
    let eta = omegas
        .iter()
        .map(|&w| efficiency(xi, kappa_mu, kappa_o, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScatteringSpectrum {
        omegas: omegas.to_vec(),
        entries,
        eta,
    })
}

pub const SPECTRUM_CSV_HEADER: &str =
    "omega_hz,eta,re_r_mu,im_r_mu,re_t_mo,im_t_mo,re_r_o,im_r_o,re_t_om,im_t_om";

impl ScatteringSpectrum {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{SPECTRUM_CSV_HEADER}")?;
        for (s, eta) in self.entries.iter().zip(&self.eta) {
            let hz = s.omega / std::f64::consts::TAU;
            let cols = [
                hz, *eta, s.r_mu.re, s.r_mu.im, s.t_mo.re, s.t_mo.im, s.r_o.re, s.r_o.im, s.t_om.re,
                s.t_om.im,
            ];
            let line = cols.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",");
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}
