use std::f64::consts::{SQRT_2, TAU};

use proptest::prelude::*;

use super::*;
use crate::params::{reference_inputs, AngularFrequency, DesignInputs, PhysicalConstants};

const K: PhysicalConstants = PhysicalConstants::CODATA_2018;

fn plan(inputs: &DesignInputs) -> DesignPlan {
    heuristic_design(&K, inputs, &DesignPolicy::default()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Raman coupling written out directly from the material constants.
fn raman_oracle(inputs: &DesignInputs, omega0: f64, delta_o: f64) -> f64 {
    let field = (inputs.optical.omega.0 / (2.0 * K.hbar * K.eps0 * inputs.optical.v_mode)).sqrt();
    (inputs.crystal.rho * inputs.crystal.volume).sqrt()
        * field
        * inputs.ion.d_g2
        * omega0
        / delta_o
        * inputs.optical_layout.overlap.unwrap()
}

#[test]
fn nominal_reference_design() {
    let p = plan(&reference_inputs());
    let n = p.nominal;
    assert!(rel(n.delta_m, TAU * 100e6) < 1e-15);
    assert!(rel(n.delta_o, 5.0 * TAU * 1.24e9) < 1e-15);
    assert!(rel(n.g_mu, TAU * 10e6) < 1e-15);
    assert!(rel(n.g_o_omega, TAU * 10e6) < 1e-15);
    assert!(rel(n.kappa, TAU * 2e6) < 1e-14);
    assert!(rel(n.q_mu, 2500.0) < 1e-12);
    assert!(rel(n.q_o, 9.75e7) < 1e-12);
    assert!(rel(n.bandwidth, SQRT_2 * n.kappa) < 1e-9);
    let per_rabi = raman_oracle(&reference_inputs(), 1.0, n.delta_o);
    assert!(rel(n.omega0, TAU * 10e6 / per_rabi) < 1e-12);
    assert!(rel(n.omega0, TAU * 1.318_181_530_9e8) < 1e-9);
}

#[test]
fn achievable_design_clamps_the_pump() {
    let inputs = reference_inputs();
    let p = plan(&inputs);
    let a = p.achievable;
    assert_eq!(a.omega0, inputs.drive.omega0.0);
    let g_o = raman_oracle(&inputs, a.omega0, a.delta_o);
    assert!(rel(a.g_o_omega, g_o) < 1e-12);
    assert!(rel(g_o, 3.241_257_678_6e7) < 1e-9);
    assert!(rel(a.kappa, 2.0 * a.g_mu * g_o / a.delta_m) < 1e-14);
    assert!(rel(a.q_o, inputs.optical.omega.0 / a.kappa) < 1e-14);
    assert!(rel(a.bandwidth, SQRT_2 * a.kappa) < 1e-9);
    assert!(AngularFrequency(a.bandwidth).hz() > 1e6);
    let s = p.shortfall.unwrap();
    assert!(rel(s.factor, a.delta_m / 10.0 / g_o) < 1e-12);
    assert!(a.chi > 0.0 && a.chi < 1.0);
}

#[test]
fn reference_conditions_pass() {
    let inputs = reference_inputs();
    let p = plan(&inputs);
    let checks = check_conditions(&p.achievable, &inputs, &DesignPolicy::default());
    assert_eq!(checks.len(), 5);
    for c in &checks {
        assert!(c.pass, "{c:?}");
    }
    assert!((checks[1].ratio - 6.2e9 / 68e6).abs() < 1e-9);
    assert!(checks[0].detail.contains("eta(0) = 1.000000"));
}

#[test]
fn explicit_detuning_is_honoured() {
    let mut inputs = reference_inputs();
    inputs.drive.delta_o = Some(AngularFrequency::from_hz(3.0e9));
    let p = plan(&inputs);
    assert_eq!(p.achievable.delta_o, TAU * 3.0e9);
    let checks = check_conditions(&p.achievable, &inputs, &DesignPolicy::default());
    assert!(!checks[3].pass);
}

#[test]
fn zero_optical_linewidth_is_an_error() {
    let mut inputs = reference_inputs();
    inputs.ion.gamma_o = AngularFrequency(0.0);
    assert!(matches!(
        heuristic_design(&K, &inputs, &DesignPolicy::default()),
        Err(FeasibilityError::InvalidInput { name: "ion.gamma_o", .. })
    ));
}

#[test]
fn tiny_mode_spacing_fails_matching() {
    let mut inputs = reference_inputs();
    inputs.magnon.mode_spacing = AngularFrequency::from_hz(1e3);
    inputs.magnon.delta_m = inputs.magnon.mode_spacing;
    let r = analyze(&K, &inputs, &DesignPolicy::default()).unwrap();
    assert!(!r.all_pass);
    assert!(!r.conditions[0].pass);
    assert!(r.conditions[0].detail.contains("exceeds Q_max"));
}

#[test]
fn wider_mode_spacing_scales_until_the_pump_clamp() {
    let base = reference_inputs();
    let mut wide = base.clone();
    wide.magnon.mode_spacing = AngularFrequency(base.magnon.mode_spacing.0 * 10.0);
    wide.magnon.delta_m = wide.magnon.mode_spacing;
    let (p0, p1) = (plan(&base), plan(&wide));
    assert!(rel(p1.nominal.kappa, 10.0 * p0.nominal.kappa) < 1e-12);
    assert!(rel(p1.nominal.bandwidth, 10.0 * p0.nominal.bandwidth) < 1e-9);
    // G_oΩ is already at its limit, so G_μ·G_oΩ/Δ_M stays put.
    assert!(rel(p1.achievable.kappa, p0.achievable.kappa) < 1e-12);
}

#[test]
fn report_is_deterministic_and_flags_discrepancies() {
    let inputs = reference_inputs();
    let a = analyze(&K, &inputs, &DesignPolicy::default()).unwrap();
    let b = analyze(&K, &inputs, &DesignPolicy::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.schema, REPORT_SCHEMA);
    assert_eq!(a.inputs_digest.len(), 64);
    let ids: Vec<_> = a.discrepancies.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(ids, ["g_o_omega_range", "optical_v_mode"]);
    assert!(rel(a.discrepancies[1].ratio, 2.9e-11 / 1.716_477_490_7e-11) < 1e-9);
    let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert!(rel(v["design"]["kappa"]["hz"].as_f64().unwrap() * TAU, v["design"]["kappa"]["rad_per_s"].as_f64().unwrap()) < 1e-15);
    assert!(rel(a.eta_peak, 1.0) < 1e-12);
    assert!(!a.split_resonance);
}

#[test]
fn empty_checks_warn_and_fail() {
    let inputs = reference_inputs();
    let p = plan(&inputs);
    let r = emit_report(&K, &inputs, &DesignPolicy::default(), &p, Vec::new()).unwrap();
    assert!(!r.all_pass);
    assert!(r.warnings.iter().any(|w| w.contains("no design conditions")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn design_invariants_near_reference(
        rho in 0.5..2.0f64,
        spacing in 0.3..3.0f64,
        v_mu in 0.5..2.0f64,
        omega0 in 0.5..2.0f64,
    ) {
        let mut inputs = reference_inputs();
        inputs.crystal.rho *= rho;
        inputs.magnon.mode_spacing.0 *= spacing;
        inputs.magnon.delta_m = inputs.magnon.mode_spacing;
        inputs.microwave.v_mode *= v_mu;
        inputs.drive.omega0.0 *= omega0;
        let policy = DesignPolicy::default();
        let p = plan(&inputs);
        for d in [p.nominal, p.achievable] {
            prop_assert!(rel(d.bandwidth, SQRT_2 * d.kappa) < 1e-9);
            prop_assert!(rel(d.kappa, 2.0 * d.g_mu * d.g_o_omega / d.delta_m) < 1e-12);
            let c = check_conditions(&d, &inputs, &policy);
            prop_assert!((c[0].ratio - 1.0).abs() < 1e-9);
            prop_assert!(c[2].pass && c[3].pass);
            prop_assert!(c[2].ratio >= policy.separation_factor * (1.0 - 1e-12));
        }
        prop_assert!(p.achievable.omega0 <= inputs.drive.omega0.0);
        prop_assert!(p.achievable.g_o_omega <= p.nominal.g_o_omega * (1.0 + 1e-12));
    }
}
