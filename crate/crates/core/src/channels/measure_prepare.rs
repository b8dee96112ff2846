use serde::Serialize;

use super::KrausChannel;
use crate::error::{QgravError, Result};
use crate::gravity_states::{B1, B2, E1, E2};
use crate::qmat::{ComplexMatrix, DensityOperator, Pauli, Tolerances};

/// Weights below this are dropped from Kraus factorisations.
const RANK_CUTOFF: f64 = 1e-15;

/// A POVM together with the state prepared on each outcome.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub effects: Vec<ComplexMatrix>,
    pub preps: Vec<DensityOperator>,
}

impl Measurement {
    pub fn channel(&self) -> Result<KrausChannel> {
        measure_prepare(&self.effects, &self.preps)
    }
}

fn pauli_eigenprojector(p: Pauli, bit: u8) -> ComplexMatrix {
    ComplexMatrix::projector(&p.eigenstate(bit))
}

fn pauli_eigenstate(p: Pauli, bit: u8) -> DensityOperator {
    DensityOperator::pure(&p.eigenstate(bit), &["q"]).expect("normalised")
}

/// Z-basis measurement with eigenstate re-preparation.
pub fn z_measurement() -> Measurement {
    Measurement {
        effects: vec![
            pauli_eigenprojector(Pauli::Z, 0),
            pauli_eigenprojector(Pauli::Z, 1),
        ],
        preps: vec![pauli_eigenstate(Pauli::Z, 0), pauli_eigenstate(Pauli::Z, 1)],
    }
}

/// Equal mixture of X- and Z-basis measurements as one four-outcome POVM
/// `{½|+⟩⟨+|, ½|−⟩⟨−|, ½|0⟩⟨0|, ½|1⟩⟨1|}`, each outcome re-preparing its
/// eigenstate.
pub fn mixed_xz_measurement() -> Measurement {
    let mut effects = Vec::with_capacity(4);
    let mut preps = Vec::with_capacity(4);
    for p in [Pauli::X, Pauli::Z] {
        for bit in 0..2 {
            effects.push(pauli_eigenprojector(p, bit).scale_real(0.5));
            preps.push(pauli_eigenstate(p, bit));
        }
    }
    Measurement { effects, preps }
}

/// `ρ ↦ Σ_x Tr(Π_x ρ) σ_x` with rank-one Kraus operators
/// `√(α μ) |f⟩⟨e|` built from the spectral decompositions of each effect
/// (`α`, `e`) and each prepared state (`μ`, `f`).
pub fn measure_prepare(
    effects: &[ComplexMatrix],
    preps: &[DensityOperator],
) -> Result<KrausChannel> {
    if effects.is_empty() || effects.len() != preps.len() {
        return Err(QgravError::Invalid(format!(
            "{} effects against {} preparations",
            effects.len(),
            preps.len()
        )));
    }
    let d_in = effects[0].rows();
    let d_out = preps[0].dim();
    let tol = Tolerances::default();
    let mut sum = ComplexMatrix::zeros(d_in, d_in);
    for e in effects {
        if e.rows() != d_in || !e.is_square() {
            return Err(QgravError::DimensionMismatch(
                "effects must share one square shape".into(),
            ));
        }
        let min = e.hermitian_eigenvalues()?[0];
        if min < -tol.sign {
            return Err(QgravError::NotPositive(min));
        }
        sum = sum.try_add(e)?;
    }
    let err = sum.max_abs_diff(&ComplexMatrix::identity(d_in));
    if err > tol.exact {
        return Err(QgravError::Invalid(format!(
            "effects do not resolve the identity (deviation {err:.3e})"
        )));
    }
    if preps.iter().any(|p| p.dim() != d_out) {
        return Err(QgravError::DimensionMismatch(
            "preparations must share one dimension".into(),
        ));
    }

    let mut ops = Vec::new();
    for (effect, prep) in effects.iter().zip(preps) {
        let (alphas, es) = effect.hermitian_eigen()?;
        let (mus, fs) = prep.matrix().hermitian_eigen()?;
        for (alpha, e) in alphas.iter().zip(&es) {
            if *alpha <= RANK_CUTOFF {
                continue;
            }
            for (mu, f) in mus.iter().zip(&fs) {
                if *mu <= RANK_CUTOFF {
                    continue;
                }
                ops.push(ComplexMatrix::outer(f, e).scale_real((alpha * mu).sqrt()));
            }
        }
    }
    KrausChannel::new(ops)
}

/// `post ∘ (measure and prepare) ∘ pre` as one channel.
pub fn conditional_state_preparation(
    pre: &KrausChannel,
    measurement: &Measurement,
    post: &KrausChannel,
) -> Result<KrausChannel> {
    pre.then(&measurement.channel()?)?.then(post)
}

/// Z-basis measure-and-prepare qubit channel.
pub fn degrading_map() -> KrausChannel {
    z_measurement()
        .channel()
        .expect("Z measurement is a channel")
}

/// `p·d(E) + (1 − p)·E`.
pub fn remote_sim_mix(
    p: f64,
    d: &KrausChannel,
    e_state: &DensityOperator,
) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QgravError::OutOfRange(format!(
            "probability {p} is outside [0, 1]"
        )));
    }
    d.apply(e_state)?.mix(e_state, p)
}

/// Which basis of the mixed measurement fired, and hence which remote output
/// is simulated from which local environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SimulationBranch {
    X,
    Z,
}

impl SimulationBranch {
    /// `(source, target)`: X simulates B1 from E2, Z simulates B2 from E1.
    pub fn route(self) -> (&'static str, &'static str) {
        match self {
            SimulationBranch::X => (E2, B1),
            SimulationBranch::Z => (E1, B2),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RemoteSimulation {
    pub branch: SimulationBranch,
    pub source: &'static str,
    pub target: &'static str,
    pub probability: f64,
    pub state: DensityOperator,
}

/// Degrades the local environment state towards the remote output with
/// success probability `p`, tagged with the branch that selected the route.
pub fn remote_simulation(
    p: f64,
    branch: SimulationBranch,
    e_state: &DensityOperator,
) -> Result<RemoteSimulation> {
    let (source, target) = branch.route();
    let state = remote_sim_mix(p, &degrading_map(), e_state)?;
    let state = state.relabel(&[target])?;
    Ok(RemoteSimulation {
        branch,
        source,
        target,
        probability: p,
        state,
    })
}
