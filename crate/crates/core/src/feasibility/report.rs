use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::design::{check_conditions, heuristic_design, ConditionCheck, DesignPlan, DesignPoint, DesignPolicy};
use super::FeasibilityError;
use crate::optics::layout_geometry;
use crate::params::{inputs_digest, reference_inputs, AngularFrequency, DesignInputs, PhysicalConstants};
use crate::scattering::bandwidth_fwhm;

pub const REPORT_SCHEMA: u32 = 1;

/// Upper end of the published Raman coupling range for the reference device, Hz.
const QUOTED_MAX_G_O_OMEGA_HZ: f64 = 63e6;

/// Relative mismatch above which a configured and a derived value are flagged.
const FLAG_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub hz: f64,
    pub rad_per_s: f64,
}

impl From<f64> for Frequency {
    fn from(w: f64) -> Self {
        Frequency {
            hz: AngularFrequency(w).hz(),
            rad_per_s: w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportDesign {
    pub delta_o: Frequency,
    pub delta_m: Frequency,
    pub omega0: Frequency,
    pub g_mu_single: Frequency,
    pub g_mu: Frequency,
    pub g_o_omega: Frequency,
    pub xi: Frequency,
    pub kappa: Frequency,
    pub q_mu: f64,
    pub q_o: f64,
    pub bandwidth: Frequency,
    pub chi: f64,
}

impl From<&DesignPoint> for ReportDesign {
    fn from(p: &DesignPoint) -> Self {
        ReportDesign {
            delta_o: p.delta_o.into(),
            delta_m: p.delta_m.into(),
            omega0: p.omega0.into(),
            g_mu_single: p.g_mu_single.into(),
            g_mu: p.g_mu.into(),
            g_o_omega: p.g_o_omega.into(),
            xi: p.xi.into(),
            kappa: p.kappa.into(),
            q_mu: p.q_mu,
            q_o: p.q_o,
            bandwidth: p.bandwidth.into(),
            chi: p.chi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortfallReport {
    pub target_g_o_omega: Frequency,
    pub max_g_o_omega: Frequency,
    pub factor: f64,
    pub omega0_required: Frequency,
    pub omega0_max: Frequency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub id: String,
    pub computed: f64,
    pub reference: f64,
    pub ratio: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub schema: u32,
    pub inputs_digest: String,
    pub policy: DesignPolicy,
    pub overlap: f64,
    /// Design with the available pump; the conditions refer to this one.
    pub design: ReportDesign,
    /// Both couplings at target regardless of the available pump.
    pub nominal: ReportDesign,
    pub shortfall: Option<ShortfallReport>,
    pub eta_peak: f64,
    pub eta_center: f64,
    pub bandwidth: Frequency,
    pub split_resonance: bool,
    pub conditions: Vec<ConditionCheck>,
    pub nominal_conditions: Vec<ConditionCheck>,
    pub all_pass: bool,
    pub discrepancies: Vec<Discrepancy>,
    pub warnings: Vec<String>,
}

impl FeasibilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn discrepancies(k: &PhysicalConstants, inputs: &DesignInputs, plan: &DesignPlan) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    if inputs_digest(inputs) == inputs_digest(&reference_inputs()) {
        let computed = AngularFrequency(plan.max_g_o_omega).hz();
        let ratio = computed / QUOTED_MAX_G_O_OMEGA_HZ;
        out.push(Discrepancy {
            id: "g_o_omega_range".into(),
            computed,
            reference: QUOTED_MAX_G_O_OMEGA_HZ,
            ratio,
            detail: format!(
                "G_oOmega at full pump evaluates to {computed:.4e} Hz ({:.4e} rad/s); the quoted range ends at {QUOTED_MAX_G_O_OMEGA_HZ:.4e} Hz",
                plan.max_g_o_omega
            ),
        });
    }
    if let Ok(g) = layout_geometry(k, inputs) {
        let configured = inputs.optical.v_mode;
        let ratio = configured / g.v_o;
        if (ratio - 1.0).abs() > FLAG_TOLERANCE {
            out.push(Discrepancy {
                id: "optical_v_mode".into(),
                computed: g.v_o,
                reference: configured,
                ratio,
                detail: format!(
                    "pi w0^2 L / 4 from the layout gives {:.4e} m^3; configured V_mode is {configured:.4e} m^3 and is the value used",
                    g.v_o
                ),
            });
        }
    }
    out
}

/// Assembles the report. The pass flag follows `checks` alone.
pub fn emit_report(
    k: &PhysicalConstants,
    inputs: &DesignInputs,
    policy: &DesignPolicy,
    plan: &DesignPlan,
    checks: Vec<ConditionCheck>,
) -> Result<FeasibilityReport, FeasibilityError> {
    let a = &plan.achievable;
    let bw = bandwidth_fwhm(Complex64::new(a.xi, 0.0), a.kappa, a.kappa)?;
    let mut warnings = Vec::new();
    if checks.is_empty() {
        warnings.push("no design conditions were evaluated".to_string());
    }
    if let Some(s) = &plan.shortfall {
        warnings.push(format!(
            "pump limits G_oOmega to {:.3}% of target; Omega0 would need to be {:.4e} Hz",
            100.0 / s.factor,
            AngularFrequency(s.omega0_required).hz()
        ));
    }
    let all_pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
    Ok(FeasibilityReport {
        schema: REPORT_SCHEMA,
        inputs_digest: inputs_digest(inputs),
        policy: *policy,
        overlap: plan.overlap,
        design: a.into(),
        nominal: (&plan.nominal).into(),
        shortfall: plan.shortfall.map(|s| ShortfallReport {
            target_g_o_omega: s.target_g_o_omega.into(),
            max_g_o_omega: s.max_g_o_omega.into(),
            factor: s.factor,
            omega0_required: s.omega0_required.into(),
            omega0_max: s.omega0_max.into(),
        }),
        eta_peak: bw.eta_peak,
        eta_center: bw.eta_center,
        bandwidth: bw.fwhm.into(),
        split_resonance: bw.split_resonance,
        nominal_conditions: check_conditions(&plan.nominal, inputs, policy),
        conditions: checks,
        all_pass,
        discrepancies: discrepancies(k, inputs, plan),
        warnings,
    })
}

/// Design, check and report in one call.
pub fn analyze(
    k: &PhysicalConstants,
    inputs: &DesignInputs,
    policy: &DesignPolicy,
) -> Result<FeasibilityReport, FeasibilityError> {
    let plan = heuristic_design(k, inputs, policy)?;
    let checks = check_conditions(&plan.achievable, inputs, policy);
    emit_report(k, inputs, policy, &plan, checks)
}
