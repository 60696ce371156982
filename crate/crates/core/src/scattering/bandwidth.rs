use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::smatrix::{check_rates, efficiency};
use super::ScatteringError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bandwidth {
    /// Full width between the outermost half-maximum crossings, rad/s.
    pub fwhm: f64,
    pub eta_peak: f64,
    /// Positive-side peak location (zero for a single peak).
    pub omega_peak: f64,
    pub eta_center: f64,
    pub split_resonance: bool,
}

const SEARCH_WINDOW: f64 = 1e6;

pub fn bandwidth_fwhm(xi: Complex64, kappa_mu: f64, kappa_o: f64) -> Result<Bandwidth, ScatteringError> {
    check_rates(kappa_mu, kappa_o)?;
    let eta = |w: f64| efficiency(xi, kappa_mu, kappa_o, w).unwrap_or(0.0);
    let eta_center = eta(0.0);
    if !(eta_center > 0.0) {
        return Err(ScatteringError::ZeroPeak);
    }

    // |D|² = (A - ω²)² + Bω² is a quadratic in ω², minimised at ω² = A - B/2.
    let a = xi.norm_sqr() + kappa_mu * kappa_o / 4.0;
    let b = (kappa_mu + kappa_o).powi(2) / 4.0;
    let u = a - b / 2.0;
    let split_resonance = u > 1e-12 * a;
    let omega_peak = if split_resonance { u.sqrt() } else { 0.0 };
    let eta_peak = eta(omega_peak).max(eta_center);
    let half = eta_peak / 2.0;

    let scale = kappa_mu.max(kappa_o).max(xi.norm());
    let mut lo = omega_peak;
    let mut hi = omega_peak + scale;
    while eta(hi) >= half {
        lo = hi;
        hi = omega_peak + 2.0 * (hi - omega_peak);
        if hi > SEARCH_WINDOW * scale {
            return Err(ScatteringError::NoHalfMaxCrossing {
                window: SEARCH_WINDOW * scale,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * hi {
            break;
        }
        if eta(mid) >= half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bandwidth {
        fwhm: lo + hi,
        eta_peak,
        omega_peak,
        eta_center,
        split_resonance,
    })
}
