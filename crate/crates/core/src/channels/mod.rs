//! Kraus-represented quantum channels.
//!
//! A [`KrausChannel`] is a list of equal-shaped `d_out x d_in` matrices with
//! `Σ K†K = I`. Everything else in this module builds channels out of that
//! one type: complements, compositions, measure-and-prepare maps, the
//! anti-degradable qubit family and the flagged two-branch channel.

mod anti_degradable;
mod measure_prepare;
mod super_channel;

pub use anti_degradable::{anti_degradable_channel, AntiDegradableParams, TransferMatrix};
pub use measure_prepare::{
    conditional_state_preparation, degrading_map, measure_prepare, mixed_xz_measurement,
    remote_sim_mix, remote_simulation, z_measurement, Measurement, RemoteSimulation,
    SimulationBranch,
};
pub use super_channel::{super_channel_compose, SuperChannel};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QgravError, Result};
use crate::qmat::{ComplexMatrix, DensityOperator, Pauli};

/// Completeness tolerance enforced on construction.
pub const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kraus_ops: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus_ops.first().ok_or_else(|| {
            QgravError::Invalid("channel needs at least one Kraus operator".into())
        })?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if kraus_ops
            .iter()
            .any(|k| k.rows() != d_out || k.cols() != d_in)
        {
            return Err(QgravError::DimensionMismatch(
                "Kraus operators must share one shape".into(),
            ));
        }
        let ch = Self {
            kraus_ops,
            d_in,
            d_out,
        };
        let err = ch.completeness_error();
        if err > COMPLETENESS_TOL {
            return Err(QgravError::Incomplete(err));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus_ops: vec![ComplexMatrix::identity(dim)],
            d_in: dim,
            d_out: dim,
        }
    }

    /// Conjugation by a unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Discards the input and prepares `|ψ⟩`.
    pub fn prepare(psi: &[Complex64], d_in: usize) -> Result<Self> {
        let ops = (0..d_in)
            .map(|j| {
                let mut k = ComplexMatrix::zeros(psi.len(), d_in);
                for (i, z) in psi.iter().enumerate() {
                    k[(i, j)] = *z;
                }
                k
            })
            .collect();
        Self::new(ops)
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// max |Σ K†K − I| entrywise.
    pub fn completeness_error(&self) -> f64 {
        let sum = self
            .kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(self.d_in, self.d_in), |acc, k| {
                &acc + &(&k.adjoint() * k)
            });
        sum.max_abs_diff(&ComplexMatrix::identity(self.d_in))
    }

    /// `Σ K X K†` for an arbitrary `d_in x d_in` operator `X`.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.d_in || x.cols() != self.d_in {
            return Err(QgravError::DimensionMismatch(format!(
                "{}x{} operator into a channel with input dimension {}",
                x.rows(),
                x.cols(),
                self.d_in
            )));
        }
        self.kraus_ops
            .iter()
            .try_fold(ComplexMatrix::zeros(self.d_out, self.d_out), |acc, k| {
                acc.try_add(&k.sandwich(x)?)
            })
    }

    /// Applies the channel to a state. Slot labels carry over when the
    /// dimension is unchanged; otherwise the output slots are `o0, o1, …`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = self.apply_matrix(rho.matrix())?;
        let slots: Vec<String> = if self.d_out == self.d_in {
            rho.slots().to_vec()
        } else if self.d_out.is_power_of_two() {
            (0..self.d_out.trailing_zeros())
                .map(|k| format!("o{k}"))
                .collect()
        } else {
            return Err(QgravError::DimensionMismatch(format!(
                "output dimension {} is not a qubit register",
                self.d_out
            )));
        };
        DensityOperator::new_unit_trace(out, &slots, rho.tolerance().max(COMPLETENESS_TOL))
    }

    /// Applies a qubit channel to one slot of a multi-qubit state.
    pub fn apply_to_slot(&self, rho: &DensityOperator, slot: &str) -> Result<DensityOperator> {
        if self.d_in != 2 || self.d_out != 2 {
            return Err(QgravError::DimensionMismatch(
                "apply_to_slot needs a qubit channel".into(),
            ));
        }
        let k = rho.slot_index(slot)?;
        let n = rho.num_qubits();
        let left = ComplexMatrix::identity(1 << k);
        let right = ComplexMatrix::identity(1 << (n - 1 - k));
        let embedded = Self {
            kraus_ops: self
                .kraus_ops
                .iter()
                .map(|op| left.kron(op).kron(&right))
                .collect(),
            d_in: rho.dim(),
            d_out: rho.dim(),
        };
        embedded.apply(rho)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &KrausChannel) -> Result<KrausChannel> {
        if self.d_out != then.d_in {
            return Err(QgravError::DimensionMismatch(format!(
                "cannot feed dimension {} into dimension {}",
                self.d_out, then.d_in
            )));
        }
        let mut ops = Vec::with_capacity(self.kraus_ops.len() * then.kraus_ops.len());
        for a in &self.kraus_ops {
            for b in &then.kraus_ops {
                ops.push(b.try_mul(a)?);
            }
        }
        KrausChannel::new(ops)
    }

    /// Convex mixture `Σ w_k N_k`.
    pub fn mixture(parts: &[(f64, &KrausChannel)]) -> Result<KrausChannel> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(QgravError::OutOfRange(
                "mixture weights must form a distribution".into(),
            ));
        }
        let ops = parts
            .iter()
            .flat_map(|(w, ch)| ch.kraus_ops.iter().map(move |k| k.scale_real(w.sqrt())))
            .collect();
        KrausChannel::new(ops)
    }

    /// Choi operator `Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|)` on `in ⊗ out`.
    pub fn choi(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d_in * self.d_out, self.d_in * self.d_out);
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let mut unit = ComplexMatrix::zeros(self.d_in, self.d_in);
                unit[(i, j)] = Complex64::new(1.0, 0.0);
                let image = self.apply_matrix(&unit).expect("shape fixed");
                for a in 0..self.d_out {
                    for b in 0..self.d_out {
                        out[(i * self.d_out + a, j * self.d_out + b)] = image[(a, b)];
                    }
                }
            }
        }
        out
    }

    /// Largest deviation between the two channels' outputs over the
    /// matrix-unit basis `|i⟩⟨j|`.
    pub fn action_distance(&self, other: &KrausChannel) -> f64 {
        if self.d_in != other.d_in || self.d_out != other.d_out {
            return f64::INFINITY;
        }
        self.choi().max_abs_diff(&other.choi())
    }

    /// Complementary channel from the Stinespring isometry
    /// `V|ψ⟩ = Σ_k K_k|ψ⟩ ⊗ |k⟩_E`; the environment dimension is the number
    /// of Kraus operators.
    pub fn complementary(&self) -> KrausChannel {
        let env = self.kraus_ops.len();
        let ops = (0..self.d_out)
            .map(|j| {
                let mut f = ComplexMatrix::zeros(env, self.d_in);
                for (k, op) in self.kraus_ops.iter().enumerate() {
                    for i in 0..self.d_in {
                        f[(k, i)] = op[(j, i)];
                    }
                }
                f
            })
            .collect();
        KrausChannel {
            kraus_ops: ops,
            d_in: self.d_in,
            d_out: env,
        }
    }

    /// Affine action on Bloch coordinates `(1, w_x, w_y, w_z)`:
    /// `T[k][l] = ½ Tr[σ_k N(σ_l)]`.
    pub fn transfer_matrix(&self) -> Result<TransferMatrix> {
        if self.d_in != 2 || self.d_out != 2 {
            return Err(QgravError::DimensionMismatch(
                "transfer matrix is defined for qubit channels".into(),
            ));
        }
        let mut t = [[0.0; 4]; 4];
        for (l, pl) in Pauli::ALL.iter().enumerate() {
            let image = self.apply_matrix(&pl.matrix())?;
            for (k, pk) in Pauli::ALL.iter().enumerate() {
                t[k][l] = 0.5 * (&pk.matrix() * &image).trace().re;
            }
        }
        Ok(t)
    }

    pub fn record(&self) -> KrausRecord {
        KrausRecord {
            d_in: self.d_in,
            d_out: self.d_out,
            kraus: self
                .kraus_ops
                .iter()
                .map(|k| k.entries().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn from_record(rec: &KrausRecord) -> Result<Self> {
        let ops = rec
            .kraus
            .iter()
            .map(|flat| {
                ComplexMatrix::from_vec(
                    rec.d_out,
                    rec.d_in,
                    flat.iter()
                        .map(|[re, im]| Complex64::new(*re, *im))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

/// Serialised channel: each Kraus operator as row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausRecord {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

/// Controlled assignment of two qubit channels to two slots:
/// `A_ij = |0⟩⟨0| ⊗ K_i ⊗ L_j + |1⟩⟨1| ⊗ L_j ⊗ K_i` on
/// `(control, slot1, slot2)`, with `K` from `first` and `L` from `second`.
pub fn controlled_assignment(first: &KrausChannel, second: &KrausChannel) -> Result<KrausChannel> {
    for ch in [first, second] {
        if ch.d_in != 2 || ch.d_out != 2 {
            return Err(QgravError::DimensionMismatch(
                "controlled assignment needs qubit channels".into(),
            ));
        }
    }
    let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
    let p1 = ComplexMatrix::diag(&[0.0, 1.0]);
    let mut ops = Vec::with_capacity(first.kraus_ops.len() * second.kraus_ops.len());
    for k in &first.kraus_ops {
        for l in &second.kraus_ops {
            ops.push(&p0.kron(k).kron(l) + &p1.kron(l).kron(k));
        }
    }
    KrausChannel::new(ops)
}
