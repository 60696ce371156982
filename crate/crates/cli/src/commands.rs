use std::fs;
use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::Value;
use xducer::couplings::single_ion_o_coupling;
use xducer::Complex64;
use xducer::feasibility::{analyze, heuristic_design, DesignPolicy, FeasibilityError, Frequency};
use xducer::params::{config_from_value, reference_inputs, validate, AngularFrequency, DesignInputs, PhysicalConstants};
use xducer::reduction::{
    elimination_error_scaling, geometric_points, raman_error_scaling, raman_report, three_mode_report,
    RamanStageSystem, ThreeModeSystem,
};
use xducer::scattering::{efficiency_spectrum, impedance_solve, linear_grid, ScatteringError};

use crate::error::CliError;
use crate::OracleMode;

pub const K: PhysicalConstants = PhysicalConstants::CODATA_2018;

/// Multipliers on Δ_M for the elimination-error fit.
const SCALING_MULTIPLIERS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
const RAMAN_SWEEP_POINTS: usize = 9;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn inputs_from_value(doc: &Value) -> Result<DesignInputs, String> {
    let cfg = config_from_value(doc).map_err(|e| e.to_string())?;
    validate(&cfg).map_err(|e| e.to_string())
}

pub fn load_inputs(path: &Path) -> Result<DesignInputs, CliError> {
    inputs_from_value(&read_json(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn design_error(e: FeasibilityError) -> CliError {
    match e {
        FeasibilityError::InvalidInput { .. } => CliError::Usage(e.to_string()),
        other => CliError::numeric(other),
    }
}

fn scattering_error(e: ScatteringError) -> CliError {
    match e {
        ScatteringError::NonPositive { .. } | ScatteringError::NonFinite(_) | ScatteringError::NoMatching => {
            CliError::Usage(e.to_string())
        }
        other => CliError::numeric(other),
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

pub fn feasibility(config: &Path, out: Option<&Path>, policy: DesignPolicy) -> Result<ExitCode, CliError> {
    let inputs = load_inputs(config)?;
    let report = analyze(&K, &inputs, &policy).map_err(design_error)?;
    write_output(out, &to_json(&report))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(if report.all_pass {
        ExitCode::SUCCESS
    } else {
        for c in report.conditions.iter().filter(|c| !c.pass) {
            eprintln!("condition {:?} failed: {}", c.id, c.detail);
        }
        ExitCode::from(2)
    })
}

/// Linewidths used for the efficiency model: configured ones where given,
/// otherwise the matched design value.
pub fn linewidths(inputs: &DesignInputs, designed: f64) -> (f64, f64) {
    (
        inputs.microwave.kappa.map_or(designed, |k| k.0),
        inputs.optical.kappa.map_or(designed, |k| k.0),
    )
}

pub fn efficiency(
    config: &Path,
    omega_min: Option<AngularFrequency>,
    omega_max: Option<AngularFrequency>,
    points: usize,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!("--points must be at least 2, got {points}")));
    }
    let inputs = load_inputs(config)?;
    let plan = heuristic_design(&K, &inputs, &DesignPolicy::default()).map_err(design_error)?;
    let a = plan.achievable;
    let (kappa_mu, kappa_o) = linewidths(&inputs, a.kappa);
    let span = 10.0 * kappa_mu.max(kappa_o);
    let hi = omega_max.map_or(span, |w| w.0);
    let lo = omega_min.map_or(-hi, |w| w.0);
    if !(lo < hi) {
        return Err(CliError::Usage(format!(
            "--omega-min ({} Hz) must be below --omega-max ({} Hz)",
            AngularFrequency(lo).hz(),
            AngularFrequency(hi).hz()
        )));
    }
    let grid = linear_grid(lo, hi, points);
    let spectrum = efficiency_spectrum(Complex64::new(a.xi, 0.0), kappa_mu, kappa_o, &grid).map_err(scattering_error)?;
    let mut buf = Vec::new();
    spectrum
        .write_csv(&mut buf)
        .map_err(|source| CliError::Io {
            path: "<buffer>".into(),
            source,
        })?;
    write_output(out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MatchOutput {
    g_mu: Frequency,
    g_o_omega: Frequency,
    delta_m: Frequency,
    kappa: Frequency,
    q_mu: f64,
    q_o: f64,
}

pub fn matching(
    g_mu: AngularFrequency,
    g_o: AngularFrequency,
    delta_m: AngularFrequency,
    omega_mu: Option<AngularFrequency>,
    omega_o: Option<AngularFrequency>,
    config: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let inputs = match config {
        Some(p) => load_inputs(p)?,
        None => reference_inputs(),
    };
    let w_mu = omega_mu.unwrap_or(inputs.microwave.omega);
    let w_o = omega_o.unwrap_or(inputs.optical.omega);
    let m = impedance_solve(g_mu.0, g_o.0, delta_m.0, w_mu.0, w_o.0).map_err(scattering_error)?;
    let out = MatchOutput {
        g_mu: g_mu.0.into(),
        g_o_omega: g_o.0.into(),
        delta_m: delta_m.0.into(),
        kappa: m.kappa.into(),
        q_mu: m.q_mu,
        q_o: m.q_o,
    };
    write_output(None, &to_json(&out))?;
    Ok(ExitCode::SUCCESS)
}

pub fn oracle(config: &Path, mode: OracleMode, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let inputs = load_inputs(config)?;
    let gamma_m = inputs.magnon.gamma_m.0;
    let bytes = match mode {
        OracleMode::ThreeMode | OracleMode::Scaling => {
            let plan = heuristic_design(&K, &inputs, &DesignPolicy::default()).map_err(design_error)?;
            let n = plan.nominal;
            if mode == OracleMode::ThreeMode {
                to_json(&three_mode_report(n.g_mu, n.g_o_omega, n.delta_m, gamma_m).map_err(CliError::numeric)?)
            } else {
                let mut base = ThreeModeSystem::matched(n.g_mu, n.g_o_omega, n.delta_m, false)
                    .map_err(CliError::numeric)?;
                base.gamma_m = gamma_m;
                to_json(&elimination_error_scaling(&base, &SCALING_MULTIPLIERS).map_err(CliError::numeric)?)
            }
        }
        OracleMode::Raman => {
            let g_o = single_ion_o_coupling(&K, inputs.optical.omega.0, inputs.optical.v_mode, inputs.ion.d_g2, 1.0)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let omega = inputs.drive.omega0.0;
            let delta_o = inputs
                .drive
                .delta_o
                .map_or(DesignPolicy::default().linewidth_multiple * inputs.ion.gamma_o.0, |d| d.0);
            let mut sys = RamanStageSystem::single(g_o, omega, delta_o);
            sys.kappa_o = inputs.optical.kappa.map_or(0.0, |k| k.0);
            // Relative errors vanish identically without a drive; there is nothing to fit.
            let sweep = if omega == 0.0 {
                None
            } else {
                let deltas: Vec<f64> = geometric_points(delta_o.abs(), 100.0 * delta_o.abs(), RAMAN_SWEEP_POINTS)
                    .into_iter()
                    .map(|d| d.copysign(delta_o))
                    .collect();
                Some(raman_error_scaling(g_o, omega, &deltas).map_err(CliError::numeric)?)
            };
            to_json(&raman_report(&sys, sweep).map_err(CliError::numeric)?)
        }
    };
    write_output(out, &bytes)?;
    Ok(ExitCode::SUCCESS)
}
