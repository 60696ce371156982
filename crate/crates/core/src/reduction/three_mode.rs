use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::scattering::{efficiency, impedance_solve, TwoPortS};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Microwave cavity `a`, optical cavity `b` and Kittel mode `m` with
///
/// ```text
/// H = δ_μ a†a + δ_o2 b†b + Δ_M m†m + G_μ(a†m + m†a) - G_{o,Ω}(b†m + m†b)
/// ```
///
/// in the frame rotating with the signal. Only `a` and `b` are open ports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeModeSystem {
    pub g_mu: f64,
    pub g_o_omega: f64,
    pub delta_m: f64,
    pub gamma_m: f64,
    pub kappa_mu: f64,
    pub kappa_o: f64,
    pub delta_mu: f64,
    pub delta_o2: f64,
}

impl ThreeModeSystem {
    /// Symmetric linewidths from the impedance-matching solution; with
    /// `compensated` the cavities are retuned by their pulls.
    pub fn matched(g_mu: f64, g_o_omega: f64, delta_m: f64, compensated: bool) -> Result<Self, ReductionError> {
        let m = impedance_solve(g_mu.abs(), g_o_omega.abs(), delta_m.abs(), 1.0, 1.0)?;
        let (delta_mu, delta_o2) = if compensated {
            (cavity_pull(g_mu, delta_m)?, cavity_pull(g_o_omega, delta_m)?)
        } else {
            (0.0, 0.0)
        };
        Ok(ThreeModeSystem {
            g_mu,
            g_o_omega,
            delta_m,
            gamma_m: 0.0,
            kappa_mu: m.kappa,
            kappa_o: m.kappa,
            delta_mu,
            delta_o2,
        })
    }

    /// Effective coupling of the two-mode model, `G_μ G_{o,Ω}/Δ_M`.
    pub fn xi(&self) -> f64 {
        self.g_mu * self.g_o_omega / self.delta_m
    }

    fn check(&self) -> Result<(), ReductionError> {
        let vals = [
            ("G_mu", self.g_mu),
            ("G_oOmega", self.g_o_omega),
            ("delta_M", self.delta_m),
            ("delta_mu", self.delta_mu),
            ("delta_o2", self.delta_o2),
        ];
        for (name, v) in vals {
            if !v.is_finite() {
                return Err(ReductionError::Precondition { name, value: v });
            }
        }
        for (name, v) in [("kappa_mu", self.kappa_mu), ("kappa_o", self.kappa_o)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ReductionError::Precondition { name, value: v });
            }
        }
        if !(self.gamma_m >= 0.0 && self.gamma_m.is_finite()) {
            return Err(ReductionError::Precondition {
                name: "gamma_m",
                value: self.gamma_m,
            });
        }
        Ok(())
    }

    fn response(&self, omega: f64) -> Matrix3<Complex64> {
        let z = Complex64::new(0.0, 0.0);
        Matrix3::new(
            I * (omega + self.delta_mu) + self.kappa_mu / 2.0,
            z,
            I * self.g_mu,
            z,
            I * (omega + self.delta_o2) + self.kappa_o / 2.0,
            -I * self.g_o_omega,
            I * self.g_mu,
            -I * self.g_o_omega,
            I * (omega + self.delta_m) + self.gamma_m / 2.0,
        )
    }
}

/// `|G|²/Δ_M`, the detuning by which a cavity must be retuned to undo the
/// Kittel-mode pull.
pub fn cavity_pull(g: f64, delta_m: f64) -> Result<f64, ReductionError> {
    if delta_m == 0.0 || !delta_m.is_finite() {
        return Err(ReductionError::Precondition {
            name: "delta_M",
            value: delta_m,
        });
    }
    Ok(g * g / delta_m)
}

/// Exact 3×3 frequency-domain response with input–output boundary
/// conditions on the two cavities.
pub fn three_mode_smatrix(sys: &ThreeModeSystem, omega: f64) -> Result<TwoPortS, ReductionError> {
    sys.check()?;
    let m = sys.response(omega);
    let lu = m.lu();
    let det = lu.determinant();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(det.norm() > 1e-14 * scale.powi(3)) {
        return Err(ReductionError::Singular { omega });
    }
    let (sk_mu, sk_o) = (sys.kappa_mu.sqrt(), sys.kappa_o.sqrt());
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let from_mu = lu
        .solve(&Vector3::new(one * sk_mu, zero, zero))
        .ok_or(ReductionError::Singular { omega })?;
    let from_o = lu
        .solve(&Vector3::new(zero, one * sk_o, zero))
        .ok_or(ReductionError::Singular { omega })?;
    Ok(TwoPortS {
        r_mu: sk_mu * from_mu[0] - 1.0,
        t_mo: sk_o * from_mu[1],
        r_o: sk_o * from_o[1] - 1.0,
        t_om: sk_mu * from_o[0],
        omega,
    })
}

/// Two-mode prediction for the same system: `ξ = G_μG_{o,Ω}/Δ_M` with the
/// cavity pulls assumed compensated.
pub fn two_mode_eta(sys: &ThreeModeSystem, omega: f64) -> Result<f64, ReductionError> {
    Ok(efficiency(
        Complex64::new(sys.xi(), 0.0),
        sys.kappa_mu,
        sys.kappa_o,
        omega,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub omega: f64,
    pub eta: f64,
}

/// Maximum of `η₃` on `[-window, window]`: a coarse scan followed by
/// golden-section refinement around the best sample.
pub fn three_mode_peak(sys: &ThreeModeSystem, window: f64, samples: usize) -> Result<Peak, ReductionError> {
    let eta = |w: f64| three_mode_smatrix(sys, w).map(|s| s.eta());
    let n = samples.max(3);
    let step = 2.0 * window / (n - 1) as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..n {
        let e = eta(-window + i as f64 * step)?;
        if e > best.1 {
            best = (i, e);
        }
    }
    let centre = -window + best.0 as f64 * step;
    let (mut a, mut b) = (centre - step, centre + step);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (eta(x1)?, eta(x2)?);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * window.max(centre.abs()) {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = eta(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = eta(x2)?;
        }
    }
    let omega = 0.5 * (a + b);
    let e = eta(omega)?;
    Ok(if e >= best.1 {
        Peak { omega, eta: e }
    } else {
        Peak { omega: centre, eta: best.1 }
    })
}

/// `sup |η₃(ω) − η₂(ω)|` over `ω ∈ [-κ, κ]` (κ the larger linewidth),
/// sampled on `samples` equally spaced points.
pub fn sup_deviation(sys: &ThreeModeSystem, samples: usize) -> Result<f64, ReductionError> {
    let k = sys.kappa_mu.max(sys.kappa_o);
    let grid = crate::scattering::symmetric_grid(k, samples.max(2));
    let mut worst: f64 = 0.0;
    for w in grid {
        let d = three_mode_smatrix(sys, w)?.eta() - two_mode_eta(sys, w)?;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// Eigenvalues of the closed (lossless) three-mode Hamiltonian, ascending.
pub fn normal_modes(sys: &ThreeModeSystem) -> [f64; 3] {
    let h = Matrix3::new(
        sys.delta_mu,
        0.0,
        sys.g_mu,
        0.0,
        sys.delta_o2,
        -sys.g_o_omega,
        sys.g_mu,
        -sys.g_o_omega,
        sys.delta_m,
    );
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1], ev[2]]
}
