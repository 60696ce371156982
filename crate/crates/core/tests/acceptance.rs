//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::{SQRT_2, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xducer::couplings::{collective_mu_coupling, single_ion_mu_coupling};
use xducer::feasibility::{analyze, ConditionId, DesignPolicy};
use xducer::optics::{layout_geometry, overlap_integral, pump_rabi, ModeProfile, OverlapOptions, RabiSource};
use xducer::params::{reference_inputs, AngularFrequency, PhysicalConstants};
use xducer::reduction::{
    elimination_error_scaling, geometric_points, raman_stage_oracle, three_mode_report, RamanStageSystem,
    ThreeModeSystem,
};
use xducer::scattering::{bandwidth_fwhm, efficiency, impedance_solve, smatrix, steady_state_transmission, OdeOptions};
use xducer::Complex64;

const K: PhysicalConstants = PhysicalConstants::CODATA_2018;

// Tolerances, one per check.
const TOL_KAPPA_REL: f64 = 1e-9;
const TOL_Q_REL: f64 = 0.01;
const TOL_ETA_ABS: f64 = 1e-12;
const TOL_FWHM_REL: f64 = 1e-6;
const TOL_UNITARITY: f64 = 1e-10;
const UNITARITY_DRAWS: usize = 10_000;
const UNITARITY_OMEGAS: usize = 16;
const UNITARITY_BUDGET_S: f64 = 10.0;
const TOL_G_MU_COLLECTIVE_REL: f64 = 0.05;
const TOL_G_MU_SINGLE_REL: f64 = 0.10;
const TOL_OVERLAP_REL: f64 = 0.25;
const OVERLAP_BUDGET_S: f64 = 5.0;
const TOL_THREE_MODE_REL: f64 = 0.04;
const TOL_EXPONENT_ABS: f64 = 0.3;
const RAMAN_BOUND_FACTOR: f64 = 10.0;
const ODE_DRAWS: usize = 100;
const TOL_ODE_REL: f64 = 1e-6;
const RABI_FACTOR: f64 = 5.0;
const BANDWIDTH_FLOOR_HZ: f64 = 1e6;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1() -> (bool, String) {
    let inputs = reference_inputs();
    let m = impedance_solve(TAU * 10e6, TAU * 10e6, TAU * 100e6, inputs.microwave.omega.0, inputs.optical.omega.0);
    let Ok(m) = m else { return (false, format!("{m:?}")) };
    let ok = rel(m.kappa, TAU * 2e6) <= TOL_KAPPA_REL
        && rel(m.q_mu, 2.5e3) <= TOL_Q_REL
        && rel(m.q_o, 9.75e7) <= TOL_Q_REL;
    (
        ok,
        format!(
            "kappa = {:.9e} Hz, Q_mu = {:.6e}, Q_o = {:.6e} (quoted 9.7e7 is 0.5% below)",
            m.kappa / TAU,
            m.q_mu,
            m.q_o
        ),
    )
}

fn c2() -> (bool, String) {
    let k = TAU * 2e6;
    let matched = efficiency(Complex64::new(k / 2.0, 0.0), k, k, 0.0).unwrap();
    let strong = efficiency(Complex64::new(k, 0.0), k, k, 0.0).unwrap();
    let ok = (matched - 1.0).abs() <= TOL_ETA_ABS && (strong - 0.64).abs() <= TOL_ETA_ABS;
    (ok, format!("eta(0) matched = {matched:.15}, xi = kappa: {strong:.15}"))
}

fn c3() -> (bool, String) {
    let k = TAU * 2e6;
    match bandwidth_fwhm(Complex64::new(k / 2.0, 0.0), k, k) {
        Ok(b) => {
            let e = rel(b.fwhm, SQRT_2 * k);
            (e <= TOL_FWHM_REL, format!("FWHM = {:.9e} Hz, rel error {e:.2e}", b.fwhm / TAU))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn c4() -> (bool, String) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..UNITARITY_DRAWS {
        let km = 10f64.powf(rng.gen_range(-2.0..2.0));
        let ko = 10f64.powf(rng.gen_range(-2.0..2.0));
        let xi = Complex64::from_polar(10f64.powf(rng.gen_range(-2.0..2.0)), rng.gen_range(0.0..TAU));
        let span = 10.0 * km.max(ko);
        for _ in 0..UNITARITY_OMEGAS {
            let w = rng.gen_range(-span..=span);
            worst = worst.max(smatrix(xi, km, ko, w).unwrap().unitarity_defect());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= TOL_UNITARITY && secs < UNITARITY_BUDGET_S,
        format!("worst defect {worst:.2e} over {UNITARITY_DRAWS} draws x {UNITARITY_OMEGAS} frequencies in {secs:.2} s"),
    )
}

fn c5() -> (bool, String) {
    let i = reference_inputs();
    let big = collective_mu_coupling(&K, i.crystal.rho, i.crystal.volume, i.microwave.omega.0, i.microwave.v_mode, i.ion.mu_g1)
        .unwrap();
    let small = single_ion_mu_coupling(&K, i.microwave.omega.0, i.microwave.v_mode, i.ion.mu_g1, 1.0).unwrap();
    let ok = rel(big, 3.13e9) <= TOL_G_MU_COLLECTIVE_REL && rel(small, 0.76) <= TOL_G_MU_SINGLE_REL;
    (ok, format!("G_mu = {big:.4e} rad/s, g_mu = {small:.4} rad/s"))
}

fn c6() -> (bool, String) {
    let start = Instant::now();
    let phi = ModeProfile::gaussian(27e-6, 1540e-9);
    let inputs = reference_inputs();
    let eps = ModeProfile::gaussian(27e-6, 1540e-9 * inputs.optical.omega.0 / inputs.drive.omega_omega.0);
    match overlap_integral(&phi, &eps, 1e-3, &OverlapOptions::default()) {
        Ok(f) => {
            let secs = start.elapsed().as_secs_f64();
            let e = rel(f, 2.4e-4);
            (
                e <= TOL_OVERLAP_REL && secs < OVERLAP_BUDGET_S,
                format!("F = {f:.5e} ({:.1}% from 2.4e-4) in {secs:.2} s", 100.0 * e),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn c7() -> (bool, String) {
    let (g, d) = (TAU * 10e6, TAU * 100e6);
    let report = match three_mode_report(g, g, d, 0.0) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let base = ThreeModeSystem::matched(g, g, d, false).unwrap();
    let scaling = match elimination_error_scaling(&base, &[1.0, 2.0, 4.0, 8.0]) {
        Ok(s) => s,
        Err(e) => return (false, e.to_string()),
    };
    let dev = report.uncompensated.peak_rel_deviation;
    let ok = dev <= TOL_THREE_MODE_REL && (scaling.exponent + 2.0).abs() <= TOL_EXPONENT_ABS;
    (
        ok,
        format!(
            "peak deviation {:.3}% at {:.4e} Hz; exponent {:.3} (uncompensated peak error exponent {:.3})",
            100.0 * dev,
            report.uncompensated.peak.omega / TAU,
            scaling.exponent,
            scaling.peak_exponent
        ),
    )
}

fn c8() -> (bool, String) {
    let (g, omega) = (3e3, 1e7);
    let mut worst = 0.0f64;
    for d in geometric_points(1e9, 1e11, 9) {
        for delta in [d, -d] {
            let r = match raman_stage_oracle(&RamanStageSystem::single(g, omega, delta)) {
                Ok(r) => r,
                Err(e) => return (false, e.to_string()),
            };
            let bound = RAMAN_BOUND_FACTOR * (omega / delta).powi(2);
            let ion = r.ions[0];
            worst = worst.max(ion.coupling_rel_error / bound).max(ion.stark_rel_error / bound);
        }
    }
    (
        worst <= 1.0,
        format!("worst rel error / (10 (Omega/delta_o)^2) = {worst:.3} over delta_o in [1e9, 1e11] rad/s, both signs"),
    )
}

fn c9() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..ODE_DRAWS {
        let km = rng.gen_range(0.5..2.0);
        let ko = rng.gen_range(0.5..2.0);
        let xi = Complex64::from_polar(rng.gen_range(0.2..1.5), rng.gen_range(0.0..TAU));
        let w = rng.gen_range(-2.0..2.0);
        let opts = OdeOptions {
            atol: 1e-12,
            ..OdeOptions::default()
        };
        let t = match steady_state_transmission(xi, km, ko, w, &opts) {
            Ok(t) => t,
            Err(e) => return (false, e.to_string()),
        };
        let exact = smatrix(xi, km, ko, w).unwrap().t_mo;
        worst = worst.max((t - exact).norm() / exact.norm());
    }
    (worst <= TOL_ODE_REL, format!("worst rel error {worst:.2e} over {ODE_DRAWS} draws"))
}

fn c10() -> (bool, String) {
    let i = reference_inputs();
    let geometry = layout_geometry(&K, &i).unwrap();
    let kappa_o = AngularFrequency(i.optical.omega.0 / i.optical.q_max.unwrap());
    let cal = pump_rabi(&K, 1e-6, &geometry, kappa_o, RabiSource::Calibration(i.ion.rabi_calibration.unwrap())).unwrap();
    let exact = cal.0 == AngularFrequency::from_hz(68e6).0;
    let phys = pump_rabi(&K, 1e-6, &geometry, kappa_o, RabiSource::Physics { d_12: Some(i.ion.d_g2) }).unwrap();
    // Reference magnitudes for formula outputs are rad/s values under Hz labels; 68e6 is read the same way.
    let natural = 68e6 / phys.0;
    let strict = cal.0 / phys.0;
    (
        exact && (1.0 / RABI_FACTOR..=RABI_FACTOR).contains(&natural),
        format!(
            "calibration {} Hz exact; physics {:.4e} rad/s; ratio {natural:.3} against 6.8e7 rad/s, {strict:.2} against 2pi x 68 MHz",
            cal.hz(),
            phys.0
        ),
    )
}

fn c11() -> (bool, String) {
    let r = match analyze(&K, &reference_inputs(), &DesignPolicy::default()) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let want = [
        (ConditionId::AImpedance, 1.0),
        (ConditionId::BAdiabaticOptical, 10.0),
        (ConditionId::CAdiabaticMagnon, 10.0),
        (ConditionId::DLinewidth, 5.0),
    ];
    let mut ok = r.bandwidth.hz > BANDWIDTH_FLOOR_HZ;
    let mut parts = Vec::new();
    for (id, threshold) in want {
        let Some(c) = r.conditions.iter().find(|c| c.id == id) else {
            return (false, format!("{id:?} missing"));
        };
        ok &= c.pass && c.threshold == threshold;
        ok &= if id == ConditionId::AImpedance {
            (c.ratio - 1.0).abs() <= TOL_KAPPA_REL
        } else {
            c.ratio >= threshold * (1.0 - 1e-9)
        };
        parts.push(format!("{:.4}", c.ratio));
    }
    (ok, format!("ratios (a)-(d) = [{}], bandwidth {:.4e} Hz", parts.join(", "), r.bandwidth.hz))
}

type Check = fn() -> (bool, String);

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("impedance matching", c1),
        ("peak efficiency", c2),
        ("bandwidth", c3),
        ("two-port unitarity", c4),
        ("collective coupling", c5),
        ("overlap integral", c6),
        ("adiabatic elimination", c7),
        ("Raman-stage oracle", c8),
        ("time/frequency consistency", c9),
        ("Rabi calibration", c10),
        ("feasibility report", c11),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!("{} [{:>2}] {name}: {detail}", if ok { "PASS" } else { "FAIL" }, n + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
