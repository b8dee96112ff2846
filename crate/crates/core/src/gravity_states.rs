//! Explicit states of the gravity-environment model.
//!
//! Slot labels: `GE` is the gravity environment, `E1`/`E2` the local
//! environments and `B1`/`B2` the remote outputs. The tripartite state lives
//! on `(GE, E1, B2)` in that order.

use serde::Serialize;

use crate::error::{QgravError, Result};
use crate::qmat::{ComplexMatrix, DensityOperator, Tolerances};

pub const GE: &str = "GE";
pub const E1: &str = "E1";
pub const E2: &str = "E2";
pub const B1: &str = "B1";
pub const B2: &str = "B2";

/// Role-aligned labels used when mixing the two parallel assignments.
pub const LOCAL_ENV: &str = "E";
pub const REMOTE_OUT: &str = "B";

/// The mixing weight Ω of the tripartite family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GravityStateParams {
    omega: f64,
}

impl GravityStateParams {
    pub fn new(omega: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega) {
            return Err(QgravError::OutOfRange(format!(
                "omega = {omega} is outside [0, 1]"
            )));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Whether Ω lies in the regime Ω ≤ 1/3 the model is stated for.
    pub fn in_stated_regime(&self) -> bool {
        self.omega <= 1.0 / 3.0 + 1e-15
    }

    /// Weight ½ − ½Ω carried by the off-peak diagonal and the coherences.
    fn mix_weight(&self) -> f64 {
        0.5 - 0.5 * self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlMode {
    Fixed,
    Superposed,
}

/// Control register: an equal classical mixture (`Fixed`) or `|+⟩⟨+|`.
pub fn control_state(mode: ControlMode) -> DensityOperator {
    let m = match mode {
        ControlMode::Fixed => ComplexMatrix::diag(&[0.5, 0.5]),
        ControlMode::Superposed => ComplexMatrix::from_real(2, 2, &[0.5; 4]),
    };
    DensityOperator::new(m, &["C"], Tolerances::default().exact).expect("control states are valid")
}

/// Positivity record attached to a constructed operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validity {
    pub min_eigenvalue: f64,
    pub is_psd: bool,
    pub in_stated_regime: bool,
}

/// The tripartite operator together with its positivity record.
#[derive(Debug, Clone)]
pub struct GravityState {
    pub rho: DensityOperator,
    pub validity: Validity,
}

fn tripartite_matrix(p: GravityStateParams) -> ComplexMatrix {
    let w = p.mix_weight();
    let o = p.omega;
    let mut m = ComplexMatrix::diag(&[o, w, 0.0, w, 0.0, w, o, w]);
    m[(0, 6)] = num_complex::Complex64::new(w, 0.0);
    m[(6, 0)] = num_complex::Complex64::new(w, 0.0);
    m.scale_real(0.5)
}

/// The tripartite state on `(GE, E1, B2)`.
///
/// Returned for every Ω ∈ [0, 1]; the matrix is only positive for Ω ≥ 1/3
/// (its smallest eigenvalue is (3Ω − 1)/4), which `validity` records.
pub fn gravity_tripartite(p: GravityStateParams) -> GravityState {
    let tol = Tolerances::default();
    let rho = DensityOperator::new_unit_trace(tripartite_matrix(p), &[GE, E1, B2], tol.exact)
        .expect("tripartite matrix is Hermitian with unit trace");
    let min_eigenvalue = rho.min_eigenvalue().expect("Hermitian");
    GravityState {
        validity: Validity {
            min_eigenvalue,
            is_psd: min_eigenvalue >= -tol.sign,
            in_stated_regime: p.in_stated_regime(),
        },
        rho,
    }
}

/// Bell-diagonal marginal on `(GE, E1)`; a valid state for every Ω.
pub fn bell_diagonal_marginal(p: GravityStateParams) -> DensityOperator {
    let w = p.mix_weight();
    let peak = 0.5 + 0.5 * p.omega;
    let m = ComplexMatrix::from_real(
        4,
        4,
        &[
            peak, 0.0, 0.0, w, //
            0.0, w, 0.0, 0.0, //
            0.0, 0.0, w, 0.0, //
            w, 0.0, 0.0, peak,
        ],
    )
    .scale_real(0.5);
    DensityOperator::new(m, &[GE, E1], Tolerances::default().exact)
        .expect("marginal is a state for all omega")
}

/// Equal mixture of the two parallel assignments `(GE, E1, B2)` and
/// `(GE, E2, B1)`, aligned on the roles `(GE, E, B)`.
pub fn parallel_mixture(omega: f64) -> Result<DensityOperator> {
    let p = GravityStateParams::new(omega)?;
    let first = gravity_tripartite(p).rho;
    let second = first.relabel(&[GE, E2, B1])?;
    let roles = [GE, LOCAL_ENV, REMOTE_OUT];
    first.relabel(&roles)?.mix(&second.relabel(&roles)?, 0.5)
}

/// Local Bloch components `r`, `s` (along z) and correlations `c1..c3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellDiagonalParams {
    pub r: f64,
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalParams {
    pub fn new(r: f64, s: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("s", s), ("c1", c1), ("c2", c2), ("c3", c3)] {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(QgravError::OutOfRange(format!(
                    "|{name}| = {} > 1",
                    v.abs()
                )));
            }
        }
        Ok(Self { r, s, c1, c2, c3 })
    }

    /// Zero Bloch vectors and correlations (c1, c2, c3).
    pub fn correlations(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        Self::new(0.0, 0.0, c1, c2, c3)
    }

    /// Parameters of [`bell_diagonal_marginal`] at Ω.
    pub fn from_omega(p: GravityStateParams) -> Self {
        let c1 = (1.0 - p.omega) / 2.0;
        Self {
            r: 0.0,
            s: 0.0,
            c1,
            c2: -c1,
            c3: p.omega,
        }
    }

    /// |c1| + |c2| + |c3| ≤ 1 (holds on the Ω family, with equality).
    pub fn within_correlation_octahedron(&self) -> bool {
        self.c1.abs() + self.c2.abs() + self.c3.abs() <= 1.0 + 1e-12
    }

    fn matrix(&self) -> ComplexMatrix {
        let Self { r, s, c1, c2, c3 } = *self;
        ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0 + r + s + c3,
                0.0,
                0.0,
                c1 - c2, //
                0.0,
                1.0 + r - s - c3,
                c1 + c2,
                0.0, //
                0.0,
                c1 + c2,
                1.0 - r + s - c3,
                0.0, //
                c1 - c2,
                0.0,
                0.0,
                1.0 - r - s + c3,
            ],
        )
        .scale_real(0.25)
    }
}

/// Two-qubit state ¼(I⊗I + r σz⊗I + s I⊗σz + Σ c_i σ_i⊗σ_i) on `(GE, E1)`.
pub fn bell_diagonal_build(p: &BellDiagonalParams) -> Result<DensityOperator> {
    let tol = Tolerances::default();
    let rho = DensityOperator::new_unit_trace(p.matrix(), &[GE, E1], tol.exact)?;
    let min = rho.min_eigenvalue()?;
    if min < -tol.sign {
        return Err(QgravError::NotPositive(min));
    }
    Ok(rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellEigenvalues {
    pub u_plus: f64,
    pub u_minus: f64,
    pub v_plus: f64,
    pub v_minus: f64,
}

impl BellEigenvalues {
    pub fn as_array(&self) -> [f64; 4] {
        [self.u_plus, self.u_minus, self.v_plus, self.v_minus]
    }

    /// Ascending order, for comparison against a dense eigensolver.
    pub fn sorted(&self) -> [f64; 4] {
        let mut a = self.as_array();
        a.sort_by(f64::total_cmp);
        a
    }

    /// Correlations reconstructed from the spectrum on the Ω family:
    /// `c1 = u₊ − u₋`, `c2 = −c1`, `c3 = 1 + 2·c2`.
    pub fn family_correlations(&self) -> (f64, f64, f64) {
        let c1 = self.u_plus - self.u_minus;
        let c2 = -c1;
        (c1, c2, 1.0 + 2.0 * c2)
    }
}

/// Closed-form spectrum: the `v` pair comes from the inner 2×2 block, the
/// `u` pair from the corner block.
pub fn bell_eigenvalues(p: &BellDiagonalParams) -> BellEigenvalues {
    let inner = ((p.r - p.s).powi(2) + (p.c1 + p.c2).powi(2)).sqrt();
    let outer = ((p.r + p.s).powi(2) + (p.c1 - p.c2).powi(2)).sqrt();
    BellEigenvalues {
        u_plus: 0.25 * (1.0 + p.c3 + outer),
        u_minus: 0.25 * (1.0 + p.c3 - outer),
        v_plus: 0.25 * (1.0 - p.c3 + inner),
        v_minus: 0.25 * (1.0 - p.c3 - inner),
    }
}

/// Ω = 1 − 2(u₊ − u₋).
pub fn omega_from_eigenvalues(e: &BellEigenvalues) -> f64 {
    1.0 - 2.0 * (e.u_plus - e.u_minus)
}
