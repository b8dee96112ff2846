//! Toffoli-NOR gate and the SR latch built from two of them.
//!
//! Three-qubit registers are ordered `(x, y, z)` with `x` most significant.
//! The Toffoli-NOR gate maps `|x, y, z⟩ ↦ |x, y, z ⊕ (x̄·ȳ)⟩`.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{controlled_assignment, KrausChannel};
use crate::error::{QgravError, Result};
use crate::gravity_states::{gravity_tripartite, GravityStateParams, Validity};
use crate::qmat::{
    basis_ket, fidelity_pure, kron_ket, partial_trace, von_neumann_entropy, ComplexMatrix,
    DensityOperator, MatrixRecord, Tolerances,
};
use crate::separability::ppt_check;

pub const Q: &str = "Q";
pub const Q_BAR: &str = "Qbar";
const CONTROL: &str = "C";

/// The 8×8 permutation swapping `|000⟩` and `|001⟩`.
pub fn toffoli_nor_unitary() -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(8);
    u[(0, 0)] = Complex64::new(0.0, 0.0);
    u[(1, 1)] = Complex64::new(0.0, 0.0);
    u[(0, 1)] = Complex64::new(1.0, 0.0);
    u[(1, 0)] = Complex64::new(1.0, 0.0);
    u
}

/// `√X = ½[[1+i, 1−i], [1−i, 1+i]]`.
pub fn sqrt_x() -> ComplexMatrix {
    let p = Complex64::new(0.5, 0.5);
    let m = Complex64::new(0.5, -0.5);
    ComplexMatrix::from_vec(2, 2, vec![p, m, m, p]).expect("2x2")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gate {
    Not(usize),
    Cnot { control: usize, target: usize },
    CSqrtX { control: usize, target: usize },
    CSqrtXDag { control: usize, target: usize },
}

impl Gate {
    /// Full unitary of the gate on `num_qubits` qubits.
    pub fn unitary(&self, num_qubits: usize) -> ComplexMatrix {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        match *self {
            Gate::Not(q) => single(num_qubits, q, &x),
            Gate::Cnot { control, target } => controlled(num_qubits, control, target, &x),
            Gate::CSqrtX { control, target } => controlled(num_qubits, control, target, &sqrt_x()),
            Gate::CSqrtXDag { control, target } => {
                controlled(num_qubits, control, target, &sqrt_x().adjoint())
            }
        }
    }
}

fn single(n: usize, q: usize, op: &ComplexMatrix) -> ComplexMatrix {
    (0..n).fold(ComplexMatrix::identity(1), |acc, k| {
        if k == q {
            acc.kron(op)
        } else {
            acc.kron(&ComplexMatrix::identity(2))
        }
    })
}

fn controlled(n: usize, control: usize, target: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let dim = 1 << n;
    let mut u = ComplexMatrix::identity(dim);
    let cbit = 1 << (n - 1 - control);
    let tbit = 1 << (n - 1 - target);
    for row in 0..dim {
        if row & cbit == 0 {
            continue;
        }
        let r = usize::from(row & tbit != 0);
        for s in 0..2 {
            let col = if s == 1 { row | tbit } else { row & !tbit };
            u[(row, col)] = op[(r, s)];
        }
    }
    u
}

/// NOT on x and y around the controlled-controlled-X built from
/// controlled-√X gates and CNOTs.
pub fn toffoli_nor_decomposition() -> Vec<Gate> {
    let (x, y, z) = (0, 1, 2);
    vec![
        Gate::Not(x),
        Gate::Not(y),
        Gate::CSqrtX {
            control: y,
            target: z,
        },
        Gate::Cnot {
            control: x,
            target: y,
        },
        Gate::CSqrtXDag {
            control: y,
            target: z,
        },
        Gate::Cnot {
            control: x,
            target: y,
        },
        Gate::CSqrtX {
            control: x,
            target: z,
        },
        Gate::Not(x),
        Gate::Not(y),
    ]
}

/// Product of the circuit, first gate applied first.
pub fn compose_circuit(gates: &[Gate], num_qubits: usize) -> ComplexMatrix {
    gates
        .iter()
        .fold(ComplexMatrix::identity(1 << num_qubits), |acc, g| {
            &g.unitary(num_qubits) * &acc
        })
}

/// Max entrywise distance between `a` and `e^{iθ} b`, with θ taken from the
/// largest entry of `b`.
pub fn phase_aligned_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let (mut idx, mut best) = ((0, 0), -1.0);
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            if b[(i, j)].norm() > best {
                best = b[(i, j)].norm();
                idx = (i, j);
            }
        }
    }
    if best == 0.0 || a[idx].norm() == 0.0 {
        return a.max_abs_diff(b);
    }
    let phase = a[idx] / b[idx];
    let phase = phase / phase.norm();
    let mut aligned = b.clone();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            aligned[(i, j)] = b[(i, j)] * phase;
        }
    }
    a.max_abs_diff(&aligned)
}

/// Classical NOR evaluated by the Toffoli-NOR gate on `|x, y, 0⟩`.
pub fn nor(x: u8, y: u8) -> u8 {
    let idx = (usize::from(x) << 2) | (usize::from(y) << 1);
    let out = toffoli_nor_unitary()
        .apply_to(&basis_ket(3, idx))
        .expect("8-dim ket");
    let hit = out
        .iter()
        .position(|c| c.norm() > 0.5)
        .expect("permutation");
    (hit & 1) as u8
}

/// Controlled assignment of the set and reset maps: control `|0⟩` sends
/// `map_r` to `Q` and `map_s` to `Q̄`, control `|1⟩` swaps them.
pub fn latch_step(map_s: &KrausChannel, map_r: &KrausChannel) -> Result<KrausChannel> {
    controlled_assignment(map_r, map_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatchControl {
    Fixed0,
    Fixed1,
    Plus,
}

impl std::str::FromStr for LatchControl {
    type Err = QgravError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" | "fixed0" => Ok(Self::Fixed0),
            "1" | "fixed1" => Ok(Self::Fixed1),
            "plus" | "+" => Ok(Self::Plus),
            other => Err(QgravError::Invalid(format!(
                "unknown latch control {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatchConfig {
    pub control: LatchControl,
    pub inputs: [u8; 2],
    pub kappa: f64,
}

impl LatchConfig {
    pub fn new(control: LatchControl, inputs: [u8; 2], kappa: f64) -> Result<Self> {
        if inputs.iter().any(|&b| b > 1) {
            return Err(QgravError::OutOfRange(format!(
                "latch inputs must be bits, got {inputs:?}"
            )));
        }
        if !(0.0..=1.0).contains(&kappa) {
            return Err(QgravError::OutOfRange(format!(
                "kappa must lie in [0, 1], got {kappa}"
            )));
        }
        Ok(Self {
            control,
            inputs,
            kappa,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub c: u8,
    pub s: u8,
    pub r: u8,
    pub q: u8,
    pub q_bar: u8,
}

/// Metadata describing the tripartite resource state at `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaRecord {
    pub kappa: f64,
    pub validity: Validity,
}

#[derive(Debug, Clone)]
pub struct LatchResult {
    pub joint_state: DensityOperator,
    pub fidelity_bell: f64,
    pub negativity: f64,
    pub marginal_entropy: f64,
    pub table_row: Option<TableRow>,
    /// Output of the Kraus channel with the control traced out, for
    /// comparison with the coherent reading.
    pub decohered_state: Option<DensityOperator>,
    pub kappa: KappaRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatchReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_row: Option<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_state: Option<MatrixRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decohered_state: Option<MatrixRecord>,
    pub fidelity_bell: f64,
    pub negativity: f64,
    pub marginal_entropy: f64,
    pub kappa: KappaRecord,
}

impl From<&LatchResult> for LatchReport {
    fn from(r: &LatchResult) -> Self {
        let coherent = r.table_row.is_none();
        Self {
            table_row: r.table_row,
            joint_state: coherent.then(|| MatrixRecord::from(r.joint_state.matrix())),
            decohered_state: r
                .decohered_state
                .as_ref()
                .map(|d| MatrixRecord::from(d.matrix())),
            fidelity_bell: r.fidelity_bell,
            negativity: r.negativity,
            marginal_entropy: r.marginal_entropy,
            kappa: r.kappa,
        }
    }
}

/// `(|10⟩ + |01⟩)/√2` on `(Q, Q̄)`.
pub fn bell_target() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![Complex64::new(0.0, 0.0); 4];
    v[1] = Complex64::new(h, 0.0);
    v[2] = Complex64::new(h, 0.0);
    v
}

/// Control bit `c` selects set (`c = 0`) or reset (`c = 1`). The gate fed by
/// the active line is evaluated first, the other one reads its output, and
/// the latch inputs only seed the first gate's feedback line.
fn classical_row(c: u8, inputs: [u8; 2]) -> TableRow {
    let (s, r) = if c == 0 { (1, 0) } else { (0, 1) };
    let (q, q_bar) = if s == 1 {
        let q_bar = nor(s, inputs[0]);
        (nor(r, q_bar), q_bar)
    } else {
        let q = nor(r, inputs[1]);
        (q, nor(s, q))
    };
    TableRow { c, s, r, q, q_bar }
}

fn pair_ket(q: u8, q_bar: u8) -> Vec<Complex64> {
    basis_ket(2, (usize::from(q) << 1) | usize::from(q_bar))
}

pub fn run_latch(cfg: &LatchConfig) -> Result<LatchResult> {
    let cfg = LatchConfig::new(cfg.control, cfg.inputs, cfg.kappa)?;
    let tol = Tolerances::default();
    let slots = [Q, Q_BAR];
    let (joint_state, table_row, decohered_state) = match cfg.control {
        LatchControl::Fixed0 | LatchControl::Fixed1 => {
            let c = u8::from(cfg.control == LatchControl::Fixed1);
            let row = classical_row(c, cfg.inputs);
            let rho = DensityOperator::pure(&pair_ket(row.q, row.q_bar), &slots)?;
            (rho, Some(row), None)
        }
        LatchControl::Plus => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let mut joint = [Complex64::new(0.0, 0.0); 8];
            for c in 0..2u8 {
                let row = classical_row(c, cfg.inputs);
                let branch = kron_ket(&basis_ket(1, usize::from(c)), &pair_ket(row.q, row.q_bar));
                for (acc, amp) in joint.iter_mut().zip(branch) {
                    *acc += h * amp;
                }
            }
            // project the control onto |+⟩
            let mut out = vec![Complex64::new(0.0, 0.0); 4];
            for (i, o) in out.iter_mut().enumerate() {
                *o = h * (joint[i] + joint[4 + i]);
            }
            let norm = out.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < tol.sign {
                return Err(QgravError::InvalidState(
                    "control projection vanished".into(),
                ));
            }
            for a in &mut out {
                *a /= norm;
            }
            let rho = DensityOperator::pure(&out, &slots)?;
            (rho, None, Some(decohered_latch(cfg.inputs)?))
        }
    };
    let fidelity_bell = fidelity_pure(&joint_state, &bell_target())?;
    let negativity = ppt_check(&joint_state, Q, tol.sign)?.negativity;
    let marginal_entropy = von_neumann_entropy(&partial_trace(&joint_state, &[Q_BAR])?)?;
    let resource = gravity_tripartite(GravityStateParams::new(cfg.kappa)?);
    Ok(LatchResult {
        joint_state,
        fidelity_bell,
        negativity,
        marginal_entropy,
        table_row,
        decohered_state,
        kappa: KappaRecord {
            kappa: cfg.kappa,
            validity: resource.validity,
        },
    })
}

/// `latch_step` applied to `|+⟩⟨+|_C ⊗ |00⟩⟨00|`, with preparation maps
/// writing the fixed-control rows, followed by discarding the control.
fn decohered_latch(inputs: [u8; 2]) -> Result<DensityOperator> {
    let set_row = classical_row(0, inputs);
    let reset_row = classical_row(1, inputs);
    if (set_row.q, set_row.q_bar) != (reset_row.q_bar, reset_row.q) {
        return Err(QgravError::InvalidState(
            "latch rows are not mirror images".into(),
        ));
    }
    let write = |bit: u8| KrausChannel::prepare(&basis_ket(1, usize::from(bit)), 2);
    let map_r = write(set_row.q)?;
    let map_s = write(set_row.q_bar)?;
    let step = latch_step(&map_s, &map_r)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
    let input = DensityOperator::pure(&kron_ket(&plus, &basis_ket(2, 0)), &[CONTROL, Q, Q_BAR])?;
    let out = step.apply(&input)?;
    partial_trace(&out, &[CONTROL])
}
