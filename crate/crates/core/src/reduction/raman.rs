//! Exact elimination of the optically excited level in the linearized
//! single-excitation sector of the ion–cavity–pump system.
//!
//! Basis: the cavity photon `b`, and per ion `k` a spin excitation `s1_k`
//! and an optical excitation `s2_k`. The cavity couples to `s2_k` with
//! `g_k`, the pump couples `s1_k` to `s2_k` with `Ω_k`. The `s2_k` block is
//! folded into an energy-dependent operator on `{b, s1_k}`, each low-lying
//! eigenvalue is solved self-consistently, and the exact hermitian effective
//! Hamiltonian is rebuilt from the normalized projected eigenvectors.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::ReductionError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanIon {
    pub g_o: f64,
    pub omega: f64,
    pub delta_o: f64,
    pub delta_mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamanStageSystem {
    pub ions: Vec<RamanIon>,
    /// Cavity detuning in the same frame.
    pub cavity_detuning: f64,
    /// Carried for reporting; the closed-system elimination does not use it.
    pub kappa_o: f64,
}

pub const MAX_IONS: usize = 20;
pub const ADIABATIC_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IonResult {
    pub coupling: f64,
    pub coupling_reference: f64,
    pub coupling_rel_error: f64,
    pub stark: f64,
    pub stark_reference: f64,
    pub stark_rel_error: f64,
    /// `|Ω/Δ_o|`.
    pub adiabaticity: f64,
    pub precondition_violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamanResult {
    pub ions: Vec<IonResult>,
    pub cavity_pull: f64,
    pub cavity_pull_reference: f64,
    /// Exact low-lying eigenvalues of the full system.
    pub energies: Vec<f64>,
    pub iterations: usize,
}

fn rel_error(exact: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        exact.abs()
    } else {
        ((exact - reference) / reference).abs()
    }
}

/// Full Hamiltonian in the order `[b, s1_1..s1_n, s2_1..s2_n]`.
pub fn full_hamiltonian(sys: &RamanStageSystem) -> DMatrix<f64> {
    let n = sys.ions.len();
    let mut h = DMatrix::zeros(2 * n + 1, 2 * n + 1);
    h[(0, 0)] = sys.cavity_detuning;
    for (k, ion) in sys.ions.iter().enumerate() {
        let (s1, s2) = (1 + k, 1 + n + k);
        h[(s1, s1)] = ion.delta_mu;
        h[(s2, s2)] = ion.delta_o;
        h[(s2, 0)] = ion.g_o;
        h[(0, s2)] = ion.g_o;
        h[(s2, s1)] = ion.omega;
        h[(s1, s2)] = ion.omega;
    }
    h
}

fn folded(sys: &RamanStageSystem, e: f64) -> DMatrix<f64> {
    let n = sys.ions.len();
    let mut h = DMatrix::zeros(n + 1, n + 1);
    h[(0, 0)] = sys.cavity_detuning;
    for (k, ion) in sys.ions.iter().enumerate() {
        let s1 = 1 + k;
        h[(s1, s1)] += ion.delta_mu;
        let d = e - ion.delta_o;
        h[(0, 0)] += ion.g_o * ion.g_o / d;
        h[(s1, s1)] += ion.omega * ion.omega / d;
        h[(0, s1)] += ion.g_o * ion.omega / d;
        h[(s1, 0)] += ion.g_o * ion.omega / d;
    }
    h
}

fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(&idx.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (values, vectors)
}

pub fn raman_stage_oracle(sys: &RamanStageSystem) -> Result<RamanResult, ReductionError> {
    let n = sys.ions.len();
    if n == 0 || n > MAX_IONS {
        return Err(ReductionError::Precondition {
            name: "ion count",
            value: n as f64,
        });
    }
    for ion in &sys.ions {
        for (name, v) in [
            ("g_o", ion.g_o),
            ("Omega", ion.omega),
            ("delta_o", ion.delta_o),
            ("delta_mu", ion.delta_mu),
        ] {
            if !v.is_finite() {
                return Err(ReductionError::Precondition { name, value: v });
            }
        }
        if ion.delta_o == 0.0 {
            return Err(ReductionError::Precondition {
                name: "delta_o",
                value: 0.0,
            });
        }
    }

    let dim = n + 1;
    let (mut energies, _) = sorted_eigen(folded(sys, 0.0));
    let mut vectors = DMatrix::zeros(dim, dim);
    let mut iterations = 0;
    for j in 0..dim {
        let mut e = energies[j];
        let mut converged = false;
        for it in 0..200 {
            let (vals, vecs) = sorted_eigen(folded(sys, e));
            let next = vals[j];
            vectors.set_column(j, &vecs.column(j));
            let step = (next - e).abs();
            e = next;
            iterations = iterations.max(it + 1);
            let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            if step <= 1e-15 * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(ReductionError::FitFailure(format!(
                "self-consistent energy {j} did not converge"
            )));
        }
        energies[j] = e;
    }

    // Normalize each exact eigenvector in the full space, keep its projection.
    let mut c = vectors.clone();
    for j in 0..dim {
        let v: DVector<f64> = vectors.column(j).into_owned();
        let mut q2 = 0.0;
        for (k, ion) in sys.ions.iter().enumerate() {
            let q = (ion.g_o * v[0] + ion.omega * v[1 + k]) / (energies[j] - ion.delta_o);
            q2 += q * q;
        }
        let norm = (v.norm_squared() + q2).sqrt();
        c.set_column(j, &(v / norm));
    }
    let overlap = c.transpose() * &c;
    let eig = SymmetricEigen::new(overlap);
    if eig.eigenvalues.iter().any(|&l| !(l > 1e-12)) {
        return Err(ReductionError::FitFailure(
            "projected eigenvectors are linearly dependent".into(),
        ));
    }
    let inv_sqrt = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()))
        * eig.eigenvectors.transpose();
    let u = c * inv_sqrt;
    let h_eff = &u * DMatrix::from_diagonal(&DVector::from_vec(energies.clone())) * u.transpose();

    let ions = sys
        .ions
        .iter()
        .enumerate()
        .map(|(k, ion)| {
            let s1 = 1 + k;
            let coupling = 0.5 * (h_eff[(0, s1)] + h_eff[(s1, 0)]);
            let stark = h_eff[(s1, s1)] - ion.delta_mu;
            let coupling_reference = -ion.g_o * ion.omega / ion.delta_o;
            let stark_reference = -ion.omega * ion.omega / ion.delta_o;
            let adiabaticity = (ion.omega / ion.delta_o).abs();
            IonResult {
                coupling,
                coupling_reference,
                coupling_rel_error: rel_error(coupling, coupling_reference),
                stark,
                stark_reference,
                stark_rel_error: rel_error(stark, stark_reference),
                adiabaticity,
                precondition_violated: adiabaticity > ADIABATIC_LIMIT,
            }
        })
        .collect();
    let cavity_pull_reference = -sys.ions.iter().map(|i| i.g_o * i.g_o / i.delta_o).sum::<f64>();
    Ok(RamanResult {
        ions,
        cavity_pull: h_eff[(0, 0)] - sys.cavity_detuning,
        cavity_pull_reference,
        energies,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn single(g: f64, omega: f64, delta: f64) -> RamanStageSystem {
        RamanStageSystem {
            ions: vec![RamanIon {
                g_o: g,
                omega,
                delta_o: delta,
                delta_mu: 0.0,
            }],
            cavity_detuning: 0.0,
            kappa_o: 0.0,
        }
    }

    #[test]
    fn single_ion_example() {
        let r = raman_stage_oracle(&single(3e3, 1e7, 1e10)).unwrap();
        let ion = r.ions[0];
        assert!((ion.coupling.abs() - 3.0).abs() < 1e-4, "{}", ion.coupling);
        assert!(ion.coupling_rel_error < 10.0 * 1e-6, "{}", ion.coupling_rel_error);
        assert!((ion.stark.abs() - 1e4).abs() < 1.0, "{}", ion.stark);
        assert!(ion.stark_rel_error < 10.0 * 1e-6);
        assert!(!ion.precondition_violated);
    }

    #[test]
    fn undriven_ion_decouples() {
        let r = raman_stage_oracle(&single(3e3, 0.0, 1e10)).unwrap();
        assert!(r.ions[0].coupling.abs() < 1e-12);
        assert!(r.ions[0].stark.abs() < 1e-12);
        assert!((r.cavity_pull - r.cavity_pull_reference).abs() < 1e-9 * r.cavity_pull_reference.abs());
    }

    #[test]
    fn reproduces_full_spectrum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let ions = (0..5)
            .map(|_| RamanIon {
                g_o: rng.gen_range(1e3..5e3),
                omega: rng.gen_range(1e6..1e7),
                delta_o: rng.gen_range(5e8..2e9) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                delta_mu: rng.gen_range(-1e4..1e4),
            })
            .collect();
        let sys = RamanStageSystem {
            ions,
            cavity_detuning: 200.0,
            kappa_o: 0.0,
        };
        let r = raman_stage_oracle(&sys).unwrap();
        let full = SymmetricEigen::new(full_hamiltonian(&sys)).eigenvalues;
        for e in &r.energies {
            let nearest = full.iter().map(|f| (f - e).abs()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-6 * 2e9, "{e}");
        }
    }

    #[test]
    fn strong_drive_is_flagged() {
        let r = raman_stage_oracle(&single(3e3, 5e9, 1e10)).unwrap();
        assert!(r.ions[0].precondition_violated);
    }

    #[test]
    fn rejects_empty_and_resonant() {
        assert!(raman_stage_oracle(&RamanStageSystem {
            ions: vec![],
            cavity_detuning: 0.0,
            kappa_o: 0.0
        })
        .is_err());
        assert!(raman_stage_oracle(&single(1.0, 1.0, 0.0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn errors_bounded_by_adiabaticity(g in 1e2..1e4f64, w in 1e5..1e8f64, d in 1e9..1e11f64, sign in proptest::bool::ANY) {
            let d = if sign { d } else { -d };
            let r = raman_stage_oracle(&single(g, w, d)).unwrap();
            let bound = 10.0 * (w / d).powi(2);
            prop_assert!(r.ions[0].coupling_rel_error <= bound.max(1e-12));
            prop_assert!(r.ions[0].stark_rel_error <= bound.max(1e-12));
        }
    }
}
