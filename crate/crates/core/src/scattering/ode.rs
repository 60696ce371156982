//! Time-domain integration of the two-cavity equations of motion with an
//! embedded Dormand–Prince 5(4) integrator.

use num_complex::Complex64;

use super::smatrix::check_rates;
use super::ScatteringError;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step, s; zero picks one from the fastest rate.
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-16,
            h_init: 0.0,
            h_min: 1e-30,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Waveforms {
    pub times: Vec<f64>,
    pub a_in: Vec<Complex64>,
    pub a_out: Vec<Complex64>,
    pub b_out: Vec<Complex64>,
    /// `∫|a_in|² dt` over the whole run.
    pub input_energy: f64,
    pub a_out_energy: f64,
    pub b_out_energy: f64,
    pub steps: usize,
}

// State: a, b, and three running energy integrals carried in the real parts.
type State = [Complex64; 5];

struct System<'a> {
    xi: Complex64,
    kappa_mu: f64,
    kappa_o: f64,
    a_in: &'a dyn Fn(f64) -> Complex64,
}

impl System<'_> {
    fn rhs(&self, t: f64, y: &State) -> State {
        let (a, b) = (y[0], y[1]);
        let drive = (self.a_in)(t);
        let a_out = self.kappa_mu.sqrt() * a - drive;
        let b_out = self.kappa_o.sqrt() * b;
        [
            -0.5 * self.kappa_mu * a - I * self.xi.conj() * b + self.kappa_mu.sqrt() * drive,
            -0.5 * self.kappa_o * b - I * self.xi * a,
            Complex64::new(drive.norm_sqr(), 0.0),
            Complex64::new(a_out.norm_sqr(), 0.0),
            Complex64::new(b_out.norm_sqr(), 0.0),
        ]
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..5 {
            out[i] += k[i] * (h * c);
        }
    }
    out
}

/// Integrates from rest (zero intracavity fields) with `b_in = 0`, sampling
/// the output fields at each of `sample_times` (sorted, ≥ 0).
pub fn time_domain_oracle(
    xi: Complex64,
    kappa_mu: f64,
    kappa_o: f64,
    a_in: &dyn Fn(f64) -> Complex64,
    sample_times: &[f64],
    opts: &OdeOptions,
) -> Result<Waveforms, ScatteringError> {
    check_rates(kappa_mu, kappa_o)?;
    if sample_times.windows(2).any(|w| w[1] < w[0]) || sample_times.first().is_some_and(|&t| t < 0.0) {
        return Err(ScatteringError::UnsortedGrid);
    }
    let sys = System {
        xi,
        kappa_mu,
        kappa_o,
        a_in,
    };
    let fastest = kappa_mu.max(kappa_o).max(xi.norm());
    let mut h = if opts.h_init > 0.0 { opts.h_init } else { 0.01 / fastest };
    let mut t = 0.0;
    let mut y: State = [Complex64::new(0.0, 0.0); 5];
    let mut k1 = sys.rhs(t, &y);
    let mut out = Waveforms {
        times: Vec::with_capacity(sample_times.len()),
        a_in: Vec::with_capacity(sample_times.len()),
        a_out: Vec::with_capacity(sample_times.len()),
        b_out: Vec::with_capacity(sample_times.len()),
        input_energy: 0.0,
        a_out_energy: 0.0,
        b_out_energy: 0.0,
        steps: 0,
    };
    let record = |t: f64, y: &State, out: &mut Waveforms| {
        let drive = a_in(t);
        out.times.push(t);
        out.a_in.push(drive);
        out.a_out.push(kappa_mu.sqrt() * y[0] - drive);
        out.b_out.push(kappa_o.sqrt() * y[1]);
    };

    for &target in sample_times {
        while t < target {
            if out.steps >= opts.max_steps {
                return Err(ScatteringError::MaxSteps { t });
            }
            let step = h.min(target - t);
            let k2 = sys.rhs(t + C2 * step, &axpy(&y, &[(A21, &k1)], step));
            let k3 = sys.rhs(t + C3 * step, &axpy(&y, &[(A31, &k1), (A32, &k2)], step));
            let k4 = sys.rhs(
                t + C4 * step,
                &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], step),
            );
            let k5 = sys.rhs(
                t + C5 * step,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], step),
            );
            let k6 = sys.rhs(
                t + step,
                &axpy(
                    &y,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                    step,
                ),
            );
            let y_new = axpy(
                &y,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
                step,
            );
            let k7 = sys.rhs(t + step, &y_new);
            let mut err: f64 = 0.0;
            for i in 0..5 {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                    * step;
                let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                err = err.max(e.norm() / sc);
            }
            out.steps += 1;
            if err <= 1.0 || step <= opts.h_min {
                t = if step == target - t { target } else { t + step };
                y = y_new;
                k1 = k7;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // only grow `h` from a full step, never from one shortened to hit a sample
            if err > 1.0 || step == h {
                h = step * factor;
            }
            if h < opts.h_min {
                return Err(ScatteringError::StepUnderflow { t, h });
            }
        }
        record(t, &y, &mut out);
    }
    out.input_energy = y[2].re;
    out.a_out_energy = y[3].re;
    out.b_out_energy = y[4].re;
    Ok(out)
}

/// Drives `a_in = e^{iωt}` from rest and returns `b_out/a_in` once the
/// transient has decayed by `e^{-40}`. Fails if the ratio still drifts.
pub fn steady_state_transmission(
    xi: Complex64,
    kappa_mu: f64,
    kappa_o: f64,
    omega: f64,
    opts: &OdeOptions,
) -> Result<Complex64, ScatteringError> {
    check_rates(kappa_mu, kappa_o)?;
    let slowest = 0.5 * kappa_mu.min(kappa_o);
    let t_end = 40.0 / slowest;
    let drive = move |t: f64| Complex64::from_polar(1.0, omega * t);
    let times = [0.9 * t_end, t_end];
    let w = time_domain_oracle(xi, kappa_mu, kappa_o, &drive, &times, opts)?;
    let early = w.b_out[0] / w.a_in[0];
    let late = w.b_out[1] / w.a_in[1];
    let drift = (late - early).norm() / late.norm().max(1e-300);
    if late.norm() > 0.0 && drift > 1e-7 {
        return Err(ScatteringError::NotSteady { drift });
    }
    Ok(late)
}
