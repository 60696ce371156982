use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::FeasibilityError;
use crate::couplings::{collective_mu_coupling, collective_raman_coupling, RamanCouplingInputs};
use crate::optics::resolve_overlap;
use crate::params::{DesignInputs, PhysicalConstants};
use crate::scattering::{bandwidth_fwhm, efficiency, impedance_solve};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPolicy {
    /// Δ_o as a multiple of the optical linewidth.
    pub linewidth_multiple: f64,
    /// Target couplings are Δ_M divided by this.
    pub separation_factor: f64,
    /// Fraction of the magnon mode spacing used as Δ_M.
    pub detuning_derate: f64,
    /// Minimum Δ_o/Ω₀ and Δ_o/g_μ.
    pub adiabatic_threshold: f64,
}

impl Default for DesignPolicy {
    fn default() -> Self {
        DesignPolicy {
            linewidth_multiple: 5.0,
            separation_factor: 10.0,
            detuning_derate: 1.0,
            adiabatic_threshold: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    pub delta_o: f64,
    pub delta_m: f64,
    pub omega0: f64,
    pub g_mu: f64,
    pub g_o_omega: f64,
    pub xi: f64,
    pub kappa: f64,
    pub q_mu: f64,
    pub q_o: f64,
    pub bandwidth: f64,
    /// Microwave dipole projection needed to bring G_μ down to its target.
    pub chi: f64,
    /// Single-ion microwave coupling at that projection.
    pub g_mu_single: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shortfall {
    pub target_g_o_omega: f64,
    pub max_g_o_omega: f64,
    /// `target / achievable`.
    pub factor: f64,
    pub omega0_required: f64,
    pub omega0_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignPlan {
    /// Both couplings at target, ignoring the Ω₀ limit.
    pub nominal: DesignPoint,
    /// Design with Ω₀ clamped at the maximum available value.
    pub achievable: DesignPoint,
    pub shortfall: Option<Shortfall>,
    /// Collective couplings at full dipole projection and full Rabi frequency.
    pub max_g_mu: f64,
    pub max_g_o_omega: f64,
    pub overlap: f64,
}

fn point(
    inputs: &DesignInputs,
    delta_o: f64,
    delta_m: f64,
    omega0: f64,
    g_mu: f64,
    g_o: f64,
    chi: f64,
    g_mu_single: f64,
) -> Result<DesignPoint, FeasibilityError> {
    let m = impedance_solve(g_mu, g_o, delta_m, inputs.microwave.omega.0, inputs.optical.omega.0)?;
    let xi = g_mu * g_o / delta_m;
    let bw = bandwidth_fwhm(Complex64::new(xi, 0.0), m.kappa, m.kappa)?;
    Ok(DesignPoint {
        delta_o,
        delta_m,
        omega0,
        g_mu,
        g_o_omega: g_o,
        xi,
        kappa: m.kappa,
        q_mu: m.q_mu,
        q_o: m.q_o,
        bandwidth: bw.fwhm,
        chi,
        g_mu_single,
    })
}

/// Builds the nominal and achievable design points from material limits.
pub fn heuristic_design(
    k: &PhysicalConstants,
    inputs: &DesignInputs,
    policy: &DesignPolicy,
) -> Result<DesignPlan, FeasibilityError> {
    let gamma_o = inputs.ion.gamma_o.0;
    if !(gamma_o > 0.0 && gamma_o.is_finite()) {
        return Err(FeasibilityError::InvalidInput {
            name: "ion.gamma_o",
            value: gamma_o,
        });
    }
    for (name, v) in [
        ("linewidth_multiple", policy.linewidth_multiple),
        ("separation_factor", policy.separation_factor),
        ("detuning_derate", policy.detuning_derate),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(FeasibilityError::InvalidInput { name, value: v });
        }
    }
    let delta_o = inputs
        .drive
        .delta_o
        .map(|d| d.0)
        .unwrap_or(policy.linewidth_multiple * gamma_o);
    let delta_m = (policy.detuning_derate * inputs.magnon.delta_m.0).abs();
    if delta_m == 0.0 {
        return Err(FeasibilityError::InvalidInput {
            name: "magnon.delta_M",
            value: delta_m,
        });
    }
    let target = delta_m / policy.separation_factor;
    let overlap = resolve_overlap(k, inputs)?;
    let omega_mu = inputs.microwave.omega.0;

    let max_g_mu = collective_mu_coupling(
        k,
        inputs.crystal.rho,
        inputs.crystal.volume,
        omega_mu,
        inputs.microwave.v_mode,
        inputs.ion.mu_g1,
    )?;
    let raman = |omega0: f64| {
        collective_raman_coupling(
            k,
            &RamanCouplingInputs {
                rho: inputs.crystal.rho,
                v_c: inputs.crystal.volume,
                omega_o: inputs.optical.omega.0,
                v_o: inputs.optical.v_mode,
                d_g2: inputs.ion.d_g2,
                omega0,
                delta_o,
                overlap,
            },
        )
    };
    let omega0_max = inputs.drive.omega0.0;
    let max_g_o = raman(omega0_max)?;
    // G_{o,Ω} is linear in Ω₀, so the inversion is a single ratio.
    let per_rabi = raman(1.0)?;
    if per_rabi == 0.0 {
        return Err(FeasibilityError::InvalidInput {
            name: "G_oOmega per unit Rabi frequency",
            value: 0.0,
        });
    }
    let omega0_required = target / per_rabi;

    // The χ knob can only lower G_μ.
    let g_mu = target.min(max_g_mu);
    let chi = if max_g_mu > 0.0 { g_mu / max_g_mu } else { 0.0 };
    let g_mu_single = crate::couplings::single_ion_mu_coupling(
        k,
        omega_mu,
        inputs.microwave.v_mode,
        inputs.ion.mu_g1,
        chi,
    )?;

    let nominal = point(inputs, delta_o, delta_m, omega0_required, g_mu, target, chi, g_mu_single)?;
    let (omega0, g_o) = if omega0_required <= omega0_max {
        (omega0_required, target)
    } else {
        (omega0_max, max_g_o)
    };
    let achievable = point(inputs, delta_o, delta_m, omega0, g_mu, g_o, chi, g_mu_single)?;
    let shortfall = (omega0_required > omega0_max).then(|| Shortfall {
        target_g_o_omega: target,
        max_g_o_omega: max_g_o,
        factor: target / max_g_o,
        omega0_required,
        omega0_max,
    });
    Ok(DesignPlan {
        nominal,
        achievable,
        shortfall,
        max_g_mu,
        max_g_o_omega: max_g_o,
        overlap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    AImpedance,
    BAdiabaticOptical,
    CAdiabaticMagnon,
    DLinewidth,
    EBandwidth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub id: ConditionId,
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

const SLACK: f64 = 1e-9;
const MATCH_TOLERANCE: f64 = 1e-9;

fn at_least(ratio: f64, threshold: f64) -> bool {
    ratio >= threshold * (1.0 - SLACK)
}

/// Evaluates conditions (a)–(e) for one design point; always returns all five.
pub fn check_conditions(
    design: &DesignPoint,
    inputs: &DesignInputs,
    policy: &DesignPolicy,
) -> Vec<ConditionCheck> {
    let mut out = Vec::with_capacity(5);

    let ratio_a = 2.0 * design.g_mu * design.g_o_omega / (design.kappa * design.delta_m);
    let eta0 = efficiency(Complex64::new(design.xi, 0.0), design.kappa, design.kappa, 0.0).unwrap_or(f64::NAN);
    let q_mu_ok = inputs.microwave.q_max.is_none_or(|q| design.q_mu <= q);
    let q_o_ok = inputs.optical.q_max.is_none_or(|q| design.q_o <= q);
    let mut detail = format!(
        "eta(0) = {eta0:.6}; Q_mu = {:.4e}, Q_o = {:.4e}",
        design.q_mu, design.q_o
    );
    if !q_mu_ok {
        detail += &format!("; Q_mu exceeds Q_max = {:.4e}", inputs.microwave.q_max.unwrap_or(f64::NAN));
    }
    if !q_o_ok {
        detail += &format!("; Q_o exceeds Q_max = {:.4e}", inputs.optical.q_max.unwrap_or(f64::NAN));
    }
    out.push(ConditionCheck {
        id: ConditionId::AImpedance,
        ratio: ratio_a,
        threshold: 1.0,
        pass: (ratio_a - 1.0).abs() <= MATCH_TOLERANCE && q_mu_ok && q_o_ok,
        detail,
    });

    let by_rabi = design.delta_o / design.omega0;
    let by_g = design.delta_o / design.g_mu_single;
    let ratio_b = by_rabi.min(by_g);
    out.push(ConditionCheck {
        id: ConditionId::BAdiabaticOptical,
        ratio: ratio_b,
        threshold: policy.adiabatic_threshold,
        pass: at_least(ratio_b, policy.adiabatic_threshold),
        detail: format!("delta_o/Omega0 = {by_rabi:.4e}; delta_o/g_mu = {by_g:.4e}"),
    });

    let by_mu = design.delta_m / design.g_mu;
    let by_o = design.delta_m / design.g_o_omega;
    let ratio_c = by_mu.min(by_o);
    out.push(ConditionCheck {
        id: ConditionId::CAdiabaticMagnon,
        ratio: ratio_c,
        threshold: policy.separation_factor,
        pass: at_least(ratio_c, policy.separation_factor),
        detail: format!("delta_M/G_mu = {by_mu:.4e}; delta_M/G_oOmega = {by_o:.4e}"),
    });

    let ratio_d = design.delta_o / inputs.ion.gamma_o.0;
    out.push(ConditionCheck {
        id: ConditionId::DLinewidth,
        ratio: ratio_d,
        threshold: policy.linewidth_multiple,
        pass: at_least(ratio_d, policy.linewidth_multiple),
        detail: format!("delta_o/gamma_o = {ratio_d:.6}"),
    });

    // Largest bandwidth allowed by (c): both couplings at Δ_M/separation.
    let g_cap = design.delta_m / policy.separation_factor;
    let ceiling = std::f64::consts::SQRT_2 * 2.0 * g_cap * g_cap / design.delta_m;
    let ratio_e = design.bandwidth / ceiling;
    out.push(ConditionCheck {
        id: ConditionId::EBandwidth,
        ratio: ratio_e,
        threshold: 0.0,
        pass: true,
        detail: format!(
            "bandwidth = {:.6e} Hz ({:.1}% of the {:.6e} Hz allowed by (c)); G_mu at {:.1}%, G_oOmega at {:.1}% of target",
            design.bandwidth / std::f64::consts::TAU,
            100.0 * ratio_e,
            ceiling / std::f64::consts::TAU,
            100.0 * design.g_mu / g_cap,
            100.0 * design.g_o_omega / g_cap,
        ),
    });
    out
}
