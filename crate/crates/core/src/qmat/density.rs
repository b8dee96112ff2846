use num_complex::Complex64;

use super::matrix::{c, ComplexMatrix};
use crate::error::{QgravError, Result};

/// Numerical tolerances shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Exact-identity checks (Hermiticity, trace, entrywise equality).
    pub exact: f64,
    /// Eigenvalue sign decisions (PSD, PPT verdicts).
    pub sign: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-12,
            sign: 1e-9,
        }
    }
}

/// A Hermitian unit-trace operator on an ordered list of qubit slots.
///
/// Slot 0 is the most significant bit of the basis index, i.e. the leftmost
/// qubit in a ket `|b0 b1 … b_{n-1}⟩`.
///
/// [`DensityOperator::new`] additionally enforces positivity. Operators built
/// with [`DensityOperator::new_unit_trace`] may carry negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    slots: Vec<String>,
    tolerance: f64,
}

fn check_shape(matrix: &ComplexMatrix, slots: &[String]) -> Result<()> {
    if !matrix.is_square() || matrix.rows() != 1usize << slots.len() {
        return Err(QgravError::DimensionMismatch(format!(
            "{}x{} matrix for {} qubit slots",
            matrix.rows(),
            matrix.cols(),
            slots.len()
        )));
    }
    for (i, s) in slots.iter().enumerate() {
        if slots[..i].contains(s) {
            return Err(QgravError::Invalid(format!("duplicate slot label `{s}`")));
        }
    }
    Ok(())
}

impl DensityOperator {
    /// Validated density operator: Hermitian, unit trace and PSD within `tolerance`.
    pub fn new<S: AsRef<str>>(matrix: ComplexMatrix, slots: &[S], tolerance: f64) -> Result<Self> {
        let rho = Self::new_unit_trace(matrix, slots, tolerance)?;
        let min = rho.min_eigenvalue()?;
        if min < -tolerance {
            return Err(QgravError::NotPositive(min));
        }
        Ok(rho)
    }

    /// Hermitian, unit-trace operator without the positivity requirement.
    pub fn new_unit_trace<S: AsRef<str>>(
        matrix: ComplexMatrix,
        slots: &[S],
        tolerance: f64,
    ) -> Result<Self> {
        let slots: Vec<String> = slots.iter().map(|s| s.as_ref().to_owned()).collect();
        check_shape(&matrix, &slots)?;
        let herr = matrix.hermiticity_error();
        if herr > tolerance {
            return Err(QgravError::NotHermitian(herr));
        }
        let tr = matrix.trace();
        if (tr - c(1.0, 0.0)).norm() > tolerance {
            return Err(QgravError::BadTrace(tr.re, 1.0));
        }
        Ok(Self {
            matrix,
            slots,
            tolerance,
        })
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` must be normalised.
    pub fn pure<S: AsRef<str>>(psi: &[Complex64], slots: &[S]) -> Result<Self> {
        Self::new(
            ComplexMatrix::projector(psi),
            slots,
            Tolerances::default().exact,
        )
    }

    /// Used by operations whose output is valid whenever their input is.
    pub(crate) fn from_parts(matrix: ComplexMatrix, slots: Vec<String>, tolerance: f64) -> Self {
        debug_assert!(matrix.is_square() && matrix.rows() == 1 << slots.len());
        Self {
            matrix,
            slots,
            tolerance,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn slots(&self) -> &[String] {
        &self.slots
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_qubits(&self) -> usize {
        self.slots.len()
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Same operator, new slot labels.
    pub fn relabel<S: AsRef<str>>(&self, slots: &[S]) -> Result<Self> {
        let slots: Vec<String> = slots.iter().map(|s| s.as_ref().to_owned()).collect();
        check_shape(&self.matrix, &slots)?;
        Ok(Self {
            matrix: self.matrix.clone(),
            slots,
            tolerance: self.tolerance,
        })
    }

    pub fn slot_index(&self, label: &str) -> Result<usize> {
        self.slots
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| QgravError::UnknownSlot(label.to_owned()))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.matrix.hermitian_eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn is_psd(&self) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -self.tolerance)
    }

    /// Convex combination `w·self + (1-w)·other`; slot lists must agree.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        if self.slots != other.slots {
            return Err(QgravError::DimensionMismatch(format!(
                "slot lists {:?} and {:?} differ",
                self.slots, other.slots
            )));
        }
        let m = self
            .matrix
            .scale_real(weight)
            .try_add(&other.matrix.scale_real(1.0 - weight))?;
        Ok(Self::from_parts(m, self.slots.clone(), self.tolerance))
    }
}

/// Kronecker product of two operators; slot lists concatenate.
pub fn tensor_product(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
    let mut slots = a.slots.clone();
    slots.extend(b.slots.iter().cloned());
    check_shape(
        &ComplexMatrix::zeros(1 << slots.len(), 1 << slots.len()),
        &slots,
    )?;
    Ok(DensityOperator::from_parts(
        a.matrix.kron(&b.matrix),
        slots,
        a.tolerance.max(b.tolerance),
    ))
}

/// Traces out the named slots and returns the operator on the rest, in
/// their original order.
pub fn partial_trace<S: AsRef<str>>(
    rho: &DensityOperator,
    remove: &[S],
) -> Result<DensityOperator> {
    let n = rho.num_qubits();
    let mut removed = vec![false; n];
    for label in remove {
        removed[rho.slot_index(label.as_ref())?] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&k| !removed[k]).collect();
    let traced: Vec<usize> = (0..n).filter(|&k| removed[k]).collect();
    let bit = |k: usize| 1usize << (n - 1 - k);

    let compose = |indices: &[usize], value: usize| -> usize {
        let m = indices.len();
        indices
            .iter()
            .enumerate()
            .filter(|&(pos, _)| value >> (m - 1 - pos) & 1 == 1)
            .map(|(_, &k)| bit(k))
            .sum()
    };

    let d_keep = 1usize << kept.len();
    let d_trace = 1usize << traced.len();
    let mut out = ComplexMatrix::zeros(d_keep, d_keep);
    for i in 0..d_keep {
        let fi = compose(&kept, i);
        for j in 0..d_keep {
            let fj = compose(&kept, j);
            let mut acc = c(0.0, 0.0);
            for t in 0..d_trace {
                let ft = compose(&traced, t);
                acc += rho.matrix[(fi | ft, fj | ft)];
            }
            out[(i, j)] = acc;
        }
    }
    let slots = kept.iter().map(|&k| rho.slots[k].clone()).collect();
    Ok(DensityOperator::from_parts(out, slots, rho.tolerance))
}

/// Transposes the indices of one slot; the result may have negative
/// eigenvalues.
pub fn partial_transpose(rho: &DensityOperator, slot: &str) -> Result<ComplexMatrix> {
    let k = rho.slot_index(slot)?;
    let mask = 1usize << (rho.num_qubits() - 1 - k);
    let d = rho.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            // swap bit k between the row and column index
            let (bi, bj) = (i & mask, j & mask);
            let ni = (i & !mask) | bj;
            let nj = (j & !mask) | bi;
            out[(ni, nj)] = rho.matrix[(i, j)];
        }
    }
    Ok(out)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.hermitian_eigenvalues()
}

/// `-Σ λ log₂ λ` over a probability vector, with `0·log 0 = 0`.
pub fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let ev = rho.eigenvalues()?;
    if ev[0] < -rho.tolerance.max(Tolerances::default().sign) {
        return Err(QgravError::InvalidState(format!(
            "negative eigenvalue {:.3e}",
            ev[0]
        )));
    }
    Ok(shannon_bits(ev).max(0.0))
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_pure(rho: &DensityOperator, psi: &[Complex64]) -> Result<f64> {
    let rp = rho.matrix.apply_to(psi)?;
    let f: Complex64 = psi.iter().zip(&rp).map(|(a, b)| a.conj() * b).sum();
    Ok(f.re.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> DensityOperator {
        let h = c(FRAC_1_SQRT_2, 0.0);
        let z = c(0.0, 0.0);
        DensityOperator::pure(&[h, z, z, h], &["A", "B"]).unwrap()
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let rho = bell();
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(partial_trace(&rho, &["A"])
            .unwrap()
            .matrix()
            .approx_eq(&half, 1e-15));
        assert!(partial_trace(&rho, &["B"])
            .unwrap()
            .matrix()
            .approx_eq(&half, 1e-15));
    }

    #[test]
    fn tracing_everything_leaves_the_trace() {
        let rho = bell();
        let t = partial_trace(&rho, &["A", "B"]).unwrap();
        assert_eq!(t.dim(), 1);
        assert!((t.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unknown_slot_is_an_error() {
        let rho = bell();
        assert_eq!(
            partial_trace(&rho, &["C"]).unwrap_err(),
            QgravError::UnknownSlot("C".into())
        );
        assert!(partial_transpose(&rho, "C").is_err());
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let rho = bell();
        for slot in ["A", "B"] {
            let ev = partial_transpose(&rho, slot)
                .unwrap()
                .hermitian_eigenvalues()
                .unwrap();
            assert!((ev[0] + 0.5).abs() < 1e-14);
            for v in &ev[1..] {
                assert!((v - 0.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn product_state_partial_transpose_is_psd() {
        let zero = DensityOperator::new(ComplexMatrix::diag(&[1.0, 0.0]), &["A"], 1e-12).unwrap();
        let plus = DensityOperator::new(
            ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]),
            &["B"],
            1e-12,
        )
        .unwrap();
        let rho = tensor_product(&zero, &plus).unwrap();
        assert_eq!(rho.slots(), ["A", "B"]);
        for slot in ["A", "B"] {
            let ev = partial_transpose(&rho, slot)
                .unwrap()
                .hermitian_eigenvalues()
                .unwrap();
            assert!(ev[0] > -1e-14);
        }
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell()).unwrap().abs() < 1e-12);
        let mixed = DensityOperator::new(ComplexMatrix::identity(2).scale_real(0.5), &["A"], 1e-12)
            .unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let rho = bell();
        let h = c(FRAC_1_SQRT_2, 0.0);
        let z = c(0.0, 0.0);
        assert!((fidelity_pure(&rho, &[h, z, z, h]).unwrap() - 1.0).abs() < 1e-14);
        assert!(fidelity_pure(&rho, &[h, z, z, -h]).unwrap().abs() < 1e-14);
        let mixed = DensityOperator::new(ComplexMatrix::identity(2).scale_real(0.5), &["A"], 1e-12)
            .unwrap();
        assert!((fidelity_pure(&mixed, &[h, c(0.0, FRAC_1_SQRT_2)]).unwrap() - 0.5).abs() < 1e-14);
        assert!(fidelity_pure(&mixed, &[h, z, z, h]).is_err());
    }

    #[test]
    fn construction_rejects_bad_operators() {
        let bad_trace = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityOperator::new(bad_trace, &["A"], 1e-12),
            Err(QgravError::BadTrace(..))
        ));
        let negative = ComplexMatrix::diag(&[1.5, -0.5]);
        assert!(matches!(
            DensityOperator::new(negative.clone(), &["A"], 1e-12),
            Err(QgravError::NotPositive(_))
        ));
        assert!(DensityOperator::new_unit_trace(negative, &["A"], 1e-12).is_ok());
        assert!(DensityOperator::new(
            ComplexMatrix::identity(2).scale_real(0.5),
            &["A", "B"],
            1e-12
        )
        .is_err());
    }
}
