//! Partial-transpose (PPT) audits.

use serde::Serialize;

use crate::error::{QgravError, Result};
use crate::gravity_states::{
    bell_diagonal_marginal, gravity_tripartite, GravityStateParams, B2, E1, GE,
};
use crate::qmat::{partial_transpose, DensityOperator, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PPT")]
    Ppt,
    #[serde(rename = "NPT")]
    Npt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PptReport {
    /// The transposed slot.
    pub cut: String,
    pub min_eigenvalue: f64,
    /// Sum of |negative eigenvalues| of the partial transpose.
    pub negativity: f64,
    pub verdict: Verdict,
    pub spectrum: Vec<f64>,
}

/// Eigen-decomposes the partial transpose on `slot`. Eigenvalues above
/// `-sign_tol` count as non-negative.
pub fn ppt_check(rho: &DensityOperator, slot: &str, sign_tol: f64) -> Result<PptReport> {
    let pt = partial_transpose(rho, slot)?;
    let exact = Tolerances::default().exact.max(rho.tolerance());
    let herr = pt.hermiticity_error();
    if herr > exact {
        return Err(QgravError::NotHermitian(herr));
    }
    let tr = pt.trace();
    if (tr.re - 1.0).abs() > exact || tr.im.abs() > exact {
        return Err(QgravError::BadTrace(tr.re, 1.0));
    }
    let spectrum = pt.hermitian_eigenvalues()?;
    let min_eigenvalue = spectrum[0];
    let verdict = if min_eigenvalue < -sign_tol {
        Verdict::Npt
    } else {
        Verdict::Ppt
    };
    let negativity = match verdict {
        Verdict::Npt => spectrum
            .iter()
            .filter(|&&x| x < -sign_tol)
            .map(|x| -x)
            .sum(),
        Verdict::Ppt => 0.0,
    };
    Ok(PptReport {
        cut: slot.to_owned(),
        min_eigenvalue,
        negativity,
        verdict,
        spectrum,
    })
}

/// PPT reports for every single-slot cut of `rho`.
pub fn all_cuts(rho: &DensityOperator, sign_tol: f64) -> Result<Vec<PptReport>> {
    rho.slots()
        .iter()
        .map(|s| ppt_check(rho, s, sign_tol))
        .collect()
}

/// A computed verdict next to the verdict the model asserts for that cut.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutAudit {
    #[serde(flatten)]
    pub report: PptReport,
    pub asserted: Verdict,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub is_psd: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionAudit {
    pub omega: f64,
    pub tripartite_psd: PsdReport,
    pub tripartite_cuts: Vec<CutAudit>,
    pub marginal_cuts: Vec<CutAudit>,
    /// Cuts whose computed verdict disagrees with the asserted one.
    pub discrepancies: Vec<String>,
}

/// Verdicts the model asserts: the tripartite state is entangled across the
/// `GE | E1 B2` cut and PPT across the other two, and the Bell-diagonal
/// marginal is separable.
fn asserted_tripartite(slot: &str) -> Verdict {
    if slot == GE {
        Verdict::Npt
    } else {
        Verdict::Ppt
    }
}

/// PPT audit of the tripartite state (cuts `GE`, `E1`, `B2`) and of its
/// `(GE, E1)` marginal (both cuts) at Ω.
pub fn full_partition_audit(omega: f64, tol: Tolerances) -> Result<PartitionAudit> {
    let p = GravityStateParams::new(omega)?;
    let state = gravity_tripartite(p);
    let marginal = bell_diagonal_marginal(p);

    let audit =
        |rho: &DensityOperator, asserted: &dyn Fn(&str) -> Verdict| -> Result<Vec<CutAudit>> {
            all_cuts(rho, tol.sign).map(|reports| {
                reports
                    .into_iter()
                    .map(|report| {
                        let asserted = asserted(&report.cut);
                        CutAudit {
                            consistent: asserted == report.verdict,
                            asserted,
                            report,
                        }
                    })
                    .collect()
            })
        };
    let tripartite_cuts = audit(&state.rho, &asserted_tripartite)?;
    let marginal_cuts = audit(&marginal, &|_| Verdict::Ppt)?;

    let mut discrepancies = Vec::new();
    for (scope, cuts) in [
        ("tripartite", &tripartite_cuts),
        ("marginal", &marginal_cuts),
    ] {
        for c in cuts.iter().filter(|c| !c.consistent) {
            discrepancies.push(format!(
                "{scope} cut {}: computed {:?} (min eigenvalue {:.6e}), asserted {:?}",
                c.report.cut, c.report.verdict, c.report.min_eigenvalue, c.asserted
            ));
        }
    }
    if !state.validity.is_psd {
        discrepancies.push(format!(
            "tripartite operator is not positive (min eigenvalue {:.6e})",
            state.validity.min_eigenvalue
        ));
    }

    Ok(PartitionAudit {
        omega,
        tripartite_psd: PsdReport {
            min_eigenvalue: state.validity.min_eigenvalue,
            is_psd: state.validity.is_psd,
        },
        tripartite_cuts,
        marginal_cuts,
        discrepancies,
    })
}

/// Slots of the tripartite state in audit order.
pub const TRIPARTITE_CUTS: [&str; 3] = [GE, E1, B2];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::ComplexMatrix;

    const SIGN: f64 = 1e-9;

    #[test]
    fn bell_state_is_npt() {
        let bell = ComplexMatrix::from_real(
            4,
            4,
            &[
                0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.5,
            ],
        );
        let rho = DensityOperator::new(bell, &["A", "B"], 1e-12).unwrap();
        for slot in ["A", "B"] {
            let r = ppt_check(&rho, slot, SIGN).unwrap();
            assert_eq!(r.verdict, Verdict::Npt);
            assert!((r.min_eigenvalue + 0.5).abs() < 1e-14);
            assert!((r.negativity - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn werner_at_one_third_is_ppt() {
        // (1/3)|Φ+⟩⟨Φ+| + (2/3) I/4
        let v = 1.0 / 3.0;
        let mut m = ComplexMatrix::identity(4).scale_real((1.0 - v) / 4.0);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] += num_complex::Complex64::new(v / 2.0, 0.0);
        }
        let rho = DensityOperator::new(m, &["A", "B"], 1e-12).unwrap();
        let r = ppt_check(&rho, "A", SIGN).unwrap();
        assert_eq!(r.verdict, Verdict::Ppt);
        assert_eq!(r.negativity, 0.0);
        assert!(r.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn tripartite_ge_cut_at_one_third() {
        let st = gravity_tripartite(GravityStateParams::new(1.0 / 3.0).unwrap());
        let r = ppt_check(&st.rho, GE, SIGN).unwrap();
        assert_eq!(r.verdict, Verdict::Npt);
        assert!((r.min_eigenvalue + 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn audit_at_one_third() {
        let a = full_partition_audit(1.0 / 3.0, Tolerances::default()).unwrap();
        let mins: Vec<f64> = a
            .tripartite_cuts
            .iter()
            .map(|c| c.report.min_eigenvalue)
            .collect();
        assert!((mins[0] + 1.0 / 6.0).abs() < 1e-12);
        assert!((mins[1] + 1.0 / 6.0).abs() < 1e-12);
        assert!(mins[2].abs() < 1e-12);
        assert_eq!(a.tripartite_cuts[2].report.verdict, Verdict::Ppt);
        assert!(a
            .marginal_cuts
            .iter()
            .all(|c| c.report.verdict == Verdict::Ppt));
        // the E1 cut is the one that contradicts the asserted pattern
        assert!(!a.tripartite_cuts[1].consistent);
        assert_eq!(a.discrepancies.len(), 1);
        assert!(a.tripartite_psd.is_psd);
    }

    #[test]
    fn audit_at_one_is_all_ppt() {
        let a = full_partition_audit(1.0, Tolerances::default()).unwrap();
        assert!(a
            .tripartite_cuts
            .iter()
            .all(|c| c.report.verdict == Verdict::Ppt));
    }

    #[test]
    fn audit_rejects_bad_omega() {
        assert!(full_partition_audit(-0.5, Tolerances::default()).is_err());
    }
}
