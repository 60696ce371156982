use serde::{Deserialize, Serialize};

use super::ScatteringError;

/// Symmetric-linewidth impedance-matching solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    pub kappa: f64,
    pub q_mu: f64,
    pub q_o: f64,
}

/// `κ = 2 G_μ G_{o,Ω} / Δ_M` with `κ_μ = κ_o = κ`, so that `2|ξ| = κ`.
pub fn impedance_solve(
    g_mu: f64,
    g_o_omega: f64,
    delta_m: f64,
    omega_mu: f64,
    omega_o: f64,
) -> Result<Matching, ScatteringError> {
    for (name, v) in [
        ("G_mu", g_mu),
        ("G_oOmega", g_o_omega),
        ("delta_M", delta_m),
        ("omega_mu", omega_mu),
        ("omega_o", omega_o),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(ScatteringError::NonPositive { name, value: v });
        }
    }
    if delta_m == 0.0 {
        return Err(ScatteringError::NonPositive {
            name: "delta_M",
            value: delta_m,
        });
    }
    let kappa = 2.0 * g_mu * g_o_omega / delta_m;
    if kappa == 0.0 {
        return Err(ScatteringError::NoMatching);
    }
    Ok(Matching {
        kappa,
        q_mu: omega_mu / kappa,
        q_o: omega_o / kappa,
    })
}
