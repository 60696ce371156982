use serde::Deserialize;
use xducer::feasibility::{heuristic_design, DesignPolicy};
use xducer::params::{AngularFrequency, DesignInputs};
use xducer::scattering::bandwidth_fwhm;
use xducer::Complex64;

use crate::commands::{linewidths, K};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Observable {
    #[serde(rename = "eta_peak")]
    EtaPeak,
    #[serde(rename = "bandwidth")]
    Bandwidth,
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "Q_o")]
    QO,
    #[serde(rename = "G_mu")]
    GMu,
    #[serde(rename = "G_oOmega")]
    GOOmega,
    #[serde(rename = "xi")]
    Xi,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::EtaPeak => "eta_peak",
            Observable::Bandwidth => "bandwidth",
            Observable::Kappa => "kappa",
            Observable::QO => "Q_o",
            Observable::GMu => "G_mu",
            Observable::GOOmega => "G_oOmega",
            Observable::Xi => "xi",
        }
    }
}

/// All observables for one device; frequencies in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observed {
    eta_peak: f64,
    bandwidth: f64,
    kappa: f64,
    q_o: f64,
    g_mu: f64,
    g_o_omega: f64,
    xi: f64,
}

impl Observed {
    pub fn get(&self, o: Observable) -> f64 {
        match o {
            Observable::EtaPeak => self.eta_peak,
            Observable::Bandwidth => self.bandwidth,
            Observable::Kappa => self.kappa,
            Observable::QO => self.q_o,
            Observable::GMu => self.g_mu,
            Observable::GOOmega => self.g_o_omega,
            Observable::Xi => self.xi,
        }
    }
}

/// `G_mu` and `G_oOmega` are the material limits (full dipole projection,
/// full pump). `kappa` and `xi` come from the achievable design; `eta_peak`,
/// `bandwidth` and `Q_o` use configured linewidths where present.
pub fn observe(inputs: &DesignInputs) -> Result<Observed, String> {
    let plan = heuristic_design(&K, inputs, &DesignPolicy::default()).map_err(|e| e.to_string())?;
    let a = plan.achievable;
    let (kappa_mu, kappa_o) = linewidths(inputs, a.kappa);
    let bw = bandwidth_fwhm(Complex64::new(a.xi, 0.0), kappa_mu, kappa_o).map_err(|e| e.to_string())?;
    let hz = |w: f64| AngularFrequency(w).hz();
    Ok(Observed {
        eta_peak: bw.eta_peak,
        bandwidth: hz(bw.fwhm),
        kappa: hz(a.kappa),
        q_o: inputs.optical.omega.0 / kappa_o,
        g_mu: hz(plan.max_g_mu),
        g_o_omega: hz(plan.max_g_o_omega),
        xi: hz(a.xi),
    })
}
