use serde::{Deserialize, Serialize};

use super::geometry::{ModeProfile, ProfileKind};
use super::quadrature::{integrate, Tolerance};
use super::OpticsError;
use crate::params::sphere_volume;

/// How the product of the two `|cos kz|` factors is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StandingWave {
    /// Replace the product by its longitudinal mean: `(2/π)²` for
    /// incommensurate wavelengths, `1/2` for equal ones, `2/π` against a uniform mode.
    #[default]
    Averaged,
    /// Integrate the oscillating factors explicitly, splitting at every node.
    Resolved,
}

#[derive(Debug, Clone, Copy)]
pub struct OverlapOptions {
    pub standing_wave: StandingWave,
    pub outer: Tolerance,
    pub inner: Tolerance,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        OverlapOptions {
            standing_wave: StandingWave::Averaged,
            outer: Tolerance {
                rel: 1e-8,
                abs: 0.0,
                max_intervals: 200_000,
            },
            inner: Tolerance {
                rel: 1e-10,
                abs: 0.0,
                max_intervals: 500,
            },
        }
    }
}

fn mean_standing_factor(phi: &ModeProfile, eps: &ModeProfile) -> f64 {
    use std::f64::consts::FRAC_2_PI;
    match (phi.kind, eps.kind) {
        (ProfileKind::Uniform, ProfileKind::Uniform) => 1.0,
        (ProfileKind::Uniform, _) | (_, ProfileKind::Uniform) => FRAC_2_PI,
        _ if phi.wavelength == eps.wavelength && phi.axis_offset == eps.axis_offset => 0.5,
        _ => FRAC_2_PI * FRAC_2_PI,
    }
}

fn nodes(p: &ModeProfile, a: f64, b: f64, out: &mut Vec<f64>) {
    if p.kind == ProfileKind::Uniform {
        return;
    }
    let half = p.wavelength / 2.0;
    // nodes of |cos k(z - z0)| sit at z0 + λ/4 + nλ/2
    let first = p.axis_offset + p.wavelength / 4.0;
    let n0 = ((a - first) / half).ceil() as i64;
    let n1 = ((b - first) / half).floor() as i64;
    out.extend((n0..=n1).map(|n| first + n as f64 * half));
}

/// Normalized overlap `F = (1/V_c) ∫ |φ||ε| d³r` over a sphere of the given
/// radius centred on the beam axis, by nested adaptive quadrature
/// (axial outside, radial inside).
pub fn overlap_integral(
    phi: &ModeProfile,
    eps: &ModeProfile,
    sample_radius: f64,
    opts: &OverlapOptions,
) -> Result<f64, OpticsError> {
    super::geometry::positive("sample_radius", sample_radius)?;
    phi.check("phi")?;
    eps.check("eps")?;
    let r = sample_radius;

    let mut breaks = Vec::new();
    let mean = match opts.standing_wave {
        StandingWave::Averaged => Some(mean_standing_factor(phi, eps)),
        StandingWave::Resolved => {
            nodes(phi, -r, r, &mut breaks);
            nodes(eps, -r, r, &mut breaks);
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            None
        }
    };
    let uniform = phi.kind == ProfileKind::Uniform && eps.kind == ProfileKind::Uniform;
    // the column is cut off by the sphere surface within ~w²/R of the poles,
    // far below the first Kronrod node of a full-length interval
    let w = phi.waist.min(eps.waist);
    if w.is_finite() {
        for m in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let rho = m * w;
            if rho < r {
                let z = (r * r - rho * rho).sqrt();
                breaks.extend([-z, z]);
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }

    let mut inner_failure = None;
    let column = |z: f64| {
        let rmax = (r * r - z * z).max(0.0).sqrt();
        let radial = if uniform {
            std::f64::consts::PI * rmax * rmax
        } else {
            let f = |rho: f64| 2.0 * std::f64::consts::PI * rho * phi.envelope(rho, z) * eps.envelope(rho, z);
            let w = phi.beam_radius(z).min(eps.beam_radius(z));
            let scale = [0.5 * w, w, 2.0 * w, 4.0 * w, 8.0 * w];
            match integrate(f, 0.0, rmax, &scale, opts.inner) {
                Ok(e) => e.value,
                Err(nc) => {
                    inner_failure.get_or_insert(nc);
                    nc.value
                }
            }
        };
        let axial = mean.unwrap_or_else(|| phi.axial(z) * eps.axial(z));
        radial * axial
    };
    let total = integrate(column, -r, r, &breaks, opts.outer).map_err(|nc| OpticsError::Quadrature {
        value: nc.value,
        error: nc.error,
        intervals: nc.intervals,
    })?;
    if let Some(nc) = inner_failure {
        return Err(OpticsError::Quadrature {
            value: nc.value,
            error: nc.error,
            intervals: nc.intervals,
        });
    }
    Ok((total.value / sphere_volume(r)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn table_profiles() -> (ModeProfile, ModeProfile) {
        let lambda_o = 1.54e-6;
        // pump sits one microwave frequency (5 GHz) below the optical mode
        let lambda_p = lambda_o * 195e12 / (195e12 - 5e9);
        (ModeProfile::gaussian(27e-6, lambda_o), ModeProfile::gaussian(27e-6, lambda_p))
    }

    // Independent reference: closed-form radial integral of the two Gaussian
    // envelopes, composite Simpson along the axis.
    fn simpson_reference(w0: f64, lambda: f64, r: f64, mean: f64, n: usize) -> f64 {
        let zr = PI * w0 * w0 / lambda;
        let col = |z: f64| {
            let w2 = w0 * w0 * (1.0 + (z / zr).powi(2));
            let a = 2.0 / w2;
            let b2 = r * r - z * z;
            (w0 * w0 / w2) * PI / a * (1.0 - (-a * b2.max(0.0)).exp())
        };
        let h = 2.0 * r / n as f64;
        let mut s = col(-r) + col(r);
        for i in 1..n {
            let z = -r + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * col(z);
        }
        s * h / 3.0 * mean / (4.0 / 3.0 * PI * r.powi(3))
    }

    #[test]
    fn uniform_is_one() {
        let u = ModeProfile::uniform();
        let f = overlap_integral(&u, &u, 1e-3, &OverlapOptions::default()).unwrap();
        assert!((f - 1.0).abs() < 1e-12, "{f}");
    }

    #[test]
    fn table_overlap_class() {
        let (p, e) = table_profiles();
        let f = overlap_integral(&p, &e, 1e-3, &OverlapOptions::default()).unwrap();
        assert!((f - 2.4e-4).abs() / 2.4e-4 < 0.25, "{f}");
        let narrow = 3.0 * 27e-6_f64.powi(2) / (PI * PI * 1e-6);
        assert!((f - narrow).abs() / narrow < 1e-3, "{f} vs {narrow}");
        let reference = simpson_reference(27e-6, 1.54e-6, 1e-3, (2.0 / PI).powi(2), 20_000);
        assert!((f - reference).abs() / reference < 1e-6, "{f} vs {reference}");
    }

    #[test]
    fn half_radius_ratio() {
        let (p, e) = table_profiles();
        let o = OverlapOptions::default();
        let f1 = overlap_integral(&p, &e, 1e-3, &o).unwrap();
        let f2 = overlap_integral(&p, &e, 0.5e-3, &o).unwrap();
        let expected = simpson_reference(27e-6, 1.54e-6, 0.5e-3, 1.0, 20_000)
            / simpson_reference(27e-6, 1.54e-6, 1e-3, 1.0, 20_000);
        assert!((f2 / f1 - expected).abs() / expected < 1e-6);
        assert!((f2 / f1 - 4.0).abs() < 0.1, "{}", f2 / f1);
    }

    #[test]
    fn resolved_standing_waves_converge() {
        let (p, e) = table_profiles();
        let coarse = OverlapOptions {
            standing_wave: StandingWave::Resolved,
            outer: Tolerance {
                rel: 1e-5,
                ..OverlapOptions::default().outer
            },
            ..OverlapOptions::default()
        };
        let fine = OverlapOptions {
            standing_wave: StandingWave::Resolved,
            ..OverlapOptions::default()
        };
        let a = overlap_integral(&p, &e, 1e-3, &coarse).unwrap();
        let b = overlap_integral(&p, &e, 1e-3, &fine).unwrap();
        assert!((a - b).abs() / b < 1e-3);
        // nearly commensurate wavelengths keep the cos product close to cos²
        assert!(b > 2.4e-4 && b < 3.0e-4, "{b}");
    }

    #[test]
    fn equal_wavelengths_average_to_half() {
        let p = ModeProfile::gaussian(27e-6, 1.54e-6);
        let f = overlap_integral(&p, &p, 1e-3, &OverlapOptions::default()).unwrap();
        let reference = simpson_reference(27e-6, 1.54e-6, 1e-3, 0.5, 20_000);
        assert!((f - reference).abs() / reference < 1e-6, "{f} vs {reference}");
    }

    #[test]
    fn bad_radius() {
        let u = ModeProfile::uniform();
        assert!(overlap_integral(&u, &u, 0.0, &OverlapOptions::default()).is_err());
    }

    #[test]
    fn quadrature_budget_exhaustion() {
        let (p, e) = table_profiles();
        let o = OverlapOptions {
            standing_wave: StandingWave::Resolved,
            outer: Tolerance {
                rel: 1e-14,
                abs: 0.0,
                max_intervals: 10,
            },
            ..OverlapOptions::default()
        };
        assert!(matches!(
            overlap_integral(&p, &e, 1e-3, &o),
            Err(OpticsError::Quadrature { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn symmetric_in_profiles(w1 in 10e-6..80e-6f64, w2 in 10e-6..80e-6f64, l1 in 0.8e-6..2e-6f64, l2 in 0.8e-6..2e-6f64) {
            let a = ModeProfile::gaussian(w1, l1);
            let b = ModeProfile::gaussian(w2, l2);
            let o = OverlapOptions::default();
            let f_ab = overlap_integral(&a, &b, 1e-3, &o).unwrap();
            let f_ba = overlap_integral(&b, &a, 1e-3, &o).unwrap();
            prop_assert!((f_ab - f_ba).abs() <= 1e-12 * f_ab);
            prop_assert!((0.0..=1.0).contains(&f_ab));
        }

        #[test]
        fn decreasing_in_radius(w in 10e-6..80e-6f64, r in 0.3e-3..2e-3f64) {
            let (p, e) = (ModeProfile::gaussian(w, 1.54e-6), ModeProfile::gaussian(w, 1.55e-6));
            let o = OverlapOptions::default();
            let small = overlap_integral(&p, &e, r, &o).unwrap();
            let large = overlap_integral(&p, &e, 1.2 * r, &o).unwrap();
            prop_assert!(large < small);
        }
    }
}
