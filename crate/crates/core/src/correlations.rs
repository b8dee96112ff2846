//! Entropic correlations of two-qubit states, in bits.
//!
//! The closed-form classical correlation of Bell-diagonal states is paired
//! with an independent brute-force route that minimises the post-measurement
//! conditional entropy over projective measurements on the Bloch sphere.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QgravError, Result};
use crate::gravity_states::{
    bell_diagonal_marginal, bell_eigenvalues, BellDiagonalParams, GravityStateParams,
};
use crate::qmat::{
    partial_trace, shannon_bits, von_neumann_entropy, ComplexMatrix, DensityOperator,
};

/// Entropy in bits of a qubit with Bloch-vector length `a`:
/// `1 − ½(1−a)log₂(1−a) − ½(1+a)log₂(1+a)`.
fn bloch_entropy(a: f64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&a) {
        return Err(QgravError::InvalidState(format!(
            "Bloch length {a} outside [0, 1]"
        )));
    }
    let a = a.min(1.0);
    Ok(shannon_bits([(1.0 - a) / 2.0, (1.0 + a) / 2.0]))
}

fn two_qubit_marginals(rho: &DensityOperator) -> Result<(DensityOperator, DensityOperator)> {
    if rho.num_qubits() != 2 {
        return Err(QgravError::DimensionMismatch(format!(
            "expected a two-qubit state, got {} qubits",
            rho.num_qubits()
        )));
    }
    let slots = rho.slots();
    Ok((
        partial_trace(rho, &[&slots[1]])?,
        partial_trace(rho, &[&slots[0]])?,
    ))
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &DensityOperator) -> Result<f64> {
    let (a, b) = two_qubit_marginals(rho)?;
    Ok(von_neumann_entropy(&a)? + von_neumann_entropy(&b)? - von_neumann_entropy(rho)?)
}

/// Mutual information from the closed-form marginal entropies and the
/// closed-form spectrum `u±, v±`.
pub fn mutual_information_from_spectrum(p: &BellDiagonalParams) -> Result<f64> {
    let e = bell_eigenvalues(p);
    if e.as_array().iter().any(|&x| x < -1e-12) {
        return Err(QgravError::InvalidState(
            "negative Bell-diagonal eigenvalue".into(),
        ));
    }
    Ok(bloch_entropy(p.r.abs())? + bloch_entropy(p.s.abs())? - shannon_bits(e.as_array()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

/// `C = S(ρ_A) − min{f1, f2, f3}` where `f_k` is the conditional entropy
/// of A after measuring B along axis z, x and y respectively.
///
/// `f2`, `f3` use the conditional Bloch length `√(r² + c_k²)`.
pub fn classical_correlation_closed(p: &BellDiagonalParams) -> Result<ClassicalCorrelation> {
    let BellDiagonalParams { r, s, c1, c2, c3 } = *p;
    // outcome of the z measurement on B: weight (1 ± s)/2, joint weights /4
    let mut f1 = 0.0;
    for (joint, marginal) in [
        (1.0 + r + s + c3, 1.0 + s),
        (1.0 - r + s - c3, 1.0 + s),
        (1.0 + r - s - c3, 1.0 - s),
        (1.0 - r - s + c3, 1.0 - s),
    ] {
        if joint < -1e-12 || marginal < -1e-12 {
            return Err(QgravError::InvalidState(format!(
                "log of non-positive argument ({joint}, {marginal})"
            )));
        }
        if joint > 0.0 && marginal > 0.0 {
            f1 -= 0.25 * joint * (joint / (2.0 * marginal)).log2();
        }
    }
    let f2 = bloch_entropy((r * r + c1 * c1).sqrt())?;
    let f3 = bloch_entropy((r * r + c2 * c2).sqrt())?;
    let value = bloch_entropy(r.abs())? - f1.min(f2).min(f3);
    Ok(ClassicalCorrelation { value, f1, f2, f3 })
}

/// Bloch-sphere grid for the brute-force measurement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementGrid {
    pub theta_steps: usize,
    pub phi_steps: usize,
    /// Number of best grid points refined by Nelder–Mead.
    pub refine_starts: usize,
}

impl Default for MeasurementGrid {
    fn default() -> Self {
        Self {
            theta_steps: 181,
            phi_steps: 361,
            refine_starts: 4,
        }
    }
}

fn qubit_entropy(m: [[Complex64; 2]; 2], trace: f64) -> f64 {
    let a = m[0][0].re / trace;
    let d = m[1][1].re / trace;
    let b = m[0][1].norm() / trace;
    let disc = ((a - d).powi(2) + 4.0 * b * b).sqrt();
    shannon_bits([(1.0 + disc) / 2.0, (1.0 - disc) / 2.0])
}

/// Average entropy of the second qubit after the first is measured along
/// `(θ, φ)`.
fn conditional_entropy(rho: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let n = [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ];
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        // P = ½(I + sign n·σ)
        let proj = [
            [
                Complex64::new(0.5 * (1.0 + sign * n[2]), 0.0),
                Complex64::new(0.5 * sign * n[0], -0.5 * sign * n[1]),
            ],
            [
                Complex64::new(0.5 * sign * n[0], 0.5 * sign * n[1]),
                Complex64::new(0.5 * (1.0 - sign * n[2]), 0.0),
            ],
        ];
        // σ_ij = Σ_{x,a} P_{x a} ρ_{(a i),(x j)}
        let mut sigma = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in sigma.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for (x, prow) in proj.iter().enumerate() {
                    for (a, pxa) in prow.iter().enumerate() {
                        *entry += pxa * rho[(2 * a + i, 2 * x + j)];
                    }
                }
            }
        }
        let p = sigma[0][0].re + sigma[1][1].re;
        if p > 1e-15 {
            total += p * qubit_entropy(sigma, p);
        }
    }
    total
}

/// Minimal 2-D Nelder–Mead.
fn nelder_mead(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: f64,
    tol: f64,
) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut values = simplex.map(&f);
    for _ in 0..2000 {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|k| simplex[k]);
        values = order.map(|k| values[k]);
        let spread = (values[2] - values[0]).abs();
        let size = simplex
            .iter()
            .map(|p| {
                (p[0] - simplex[0][0])
                    .abs()
                    .max((p[1] - simplex[0][1]).abs())
            })
            .fold(0.0, f64::max);
        if spread < tol && size < 1e-9 {
            break;
        }
        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] {
                along(-0.5)
            } else {
                along(0.5)
            };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        0.5 * (simplex[0][0] + simplex[k][0]),
                        0.5 * (simplex[0][1] + simplex[k][1]),
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap();
    (simplex[best], values[best])
}

/// `S(ρ_B) − min_{θ,φ} Σ_k p_k S(σ_{B|k})` with rank-one projective
/// measurements on the first slot, found by grid search plus local
/// refinement.
pub fn classical_correlation_bruteforce(
    rho: &DensityOperator,
    grid: MeasurementGrid,
) -> Result<f64> {
    let (_, b) = two_qubit_marginals(rho)?;
    if grid.theta_steps < 2 || grid.phi_steps < 2 {
        return Err(QgravError::Invalid(
            "measurement grid needs at least 2x2 points".into(),
        ));
    }
    let m = rho.matrix();
    let dtheta = std::f64::consts::PI / (grid.theta_steps - 1) as f64;
    let dphi = 2.0 * std::f64::consts::PI / (grid.phi_steps - 1) as f64;
    let mut samples = Vec::with_capacity(grid.theta_steps * grid.phi_steps);
    for i in 0..grid.theta_steps {
        let theta = i as f64 * dtheta;
        for j in 0..grid.phi_steps {
            let phi = j as f64 * dphi;
            samples.push((conditional_entropy(m, theta, phi), [theta, phi]));
        }
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best = samples
        .iter()
        .take(grid.refine_starts.max(1))
        .map(|&(value, start)| {
            let (_, refined) = nelder_mead(
                |x| conditional_entropy(m, x[0], x[1]),
                start,
                0.5 * dtheta,
                1e-15,
            );
            refined.min(value)
        })
        .fold(f64::INFINITY, f64::min);
    Ok(von_neumann_entropy(&b)? - best)
}

/// `I(ρ) − C(ρ)` with the closed-form classical correlation.
pub fn quantum_discord(rho: &DensityOperator, p: &BellDiagonalParams) -> Result<f64> {
    Ok(mutual_information(rho)? - classical_correlation_closed(p)?.value)
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB) − 1`, i.e. `I − 1`.
pub fn coherent_information(rho: &DensityOperator) -> Result<f64> {
    Ok(mutual_information(rho)? - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub omega: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub coherent_info: f64,
    pub coherent_info_abs: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    /// `1 − S(ρ)` at this Ω.
    pub one_shot_q: f64,
}

/// All correlation measures of the Bell-diagonal marginal at Ω.
pub fn correlation_report(omega: f64) -> Result<CorrelationReport> {
    let gp = GravityStateParams::new(omega)?;
    let rho = bell_diagonal_marginal(gp);
    let params = BellDiagonalParams::from_omega(gp);
    let mutual_info = mutual_information(&rho)?;
    let cc = classical_correlation_closed(&params)?;
    let coherent_info = coherent_information(&rho)?;
    Ok(CorrelationReport {
        omega,
        mutual_info,
        classical_corr: cc.value,
        discord: mutual_info - cc.value,
        coherent_info,
        coherent_info_abs: coherent_info.abs(),
        f1: cc.f1,
        f2: cc.f2,
        f3: cc.f3,
        one_shot_q: 1.0 - von_neumann_entropy(&rho)?,
    })
}

/// `steps` evenly spaced rows from `omega_min` to `omega_max` inclusive,
/// ascending in Ω.
pub fn figure4_sweep(
    omega_min: f64,
    omega_max: f64,
    steps: usize,
) -> Result<Vec<CorrelationReport>> {
    if !(omega_min > 0.0 && omega_min < omega_max && omega_max <= 1.0 / 3.0 + 1e-15) {
        return Err(QgravError::OutOfRange(format!(
            "sweep range ({omega_min}, {omega_max}) must satisfy 0 < min < max <= 1/3"
        )));
    }
    if steps < 2 {
        return Err(QgravError::OutOfRange(
            "sweep needs at least 2 steps".into(),
        ));
    }
    let step = (omega_max - omega_min) / (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            let omega = if k == steps - 1 {
                omega_max
            } else {
                omega_min + k as f64 * step
            };
            correlation_report(omega)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneShotCapacities {
    /// max over the grid of I(ρ(Ω)).
    pub classical: f64,
    pub classical_argmax: f64,
    /// max over the grid of 1 − S(ρ(Ω)); signed.
    pub quantum: f64,
    pub quantum_argmax: f64,
    /// Always false: only the single-letter quantity is evaluated.
    pub regularized: bool,
}

/// Single-letter capacity proxies maximised over an Ω grid in [0, 1/3].
pub fn one_shot_capacities(omega_grid: &[f64]) -> Result<OneShotCapacities> {
    if omega_grid.is_empty() {
        return Err(QgravError::Invalid("empty omega grid".into()));
    }
    let mut best_c = (f64::NEG_INFINITY, f64::NAN);
    let mut best_q = (f64::NEG_INFINITY, f64::NAN);
    for &omega in omega_grid {
        if !(0.0..=1.0 / 3.0 + 1e-15).contains(&omega) {
            return Err(QgravError::OutOfRange(format!(
                "omega {omega} outside [0, 1/3]"
            )));
        }
        let rho = bell_diagonal_marginal(GravityStateParams::new(omega)?);
        let i = mutual_information(&rho)?;
        let q = 1.0 - von_neumann_entropy(&rho)?;
        if i > best_c.0 {
            best_c = (i, omega);
        }
        if q > best_q.0 {
            best_q = (q, omega);
        }
    }
    Ok(OneShotCapacities {
        classical: best_c.0,
        classical_argmax: best_c.1,
        quantum: best_q.0,
        quantum_argmax: best_q.1,
        regularized: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::tensor_product;

    fn marginal(omega: f64) -> DensityOperator {
        bell_diagonal_marginal(GravityStateParams::new(omega).unwrap())
    }

    fn bell() -> DensityOperator {
        crate::gravity_states::bell_diagonal_build(
            &BellDiagonalParams::correlations(1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    fn product() -> DensityOperator {
        let a = DensityOperator::new(ComplexMatrix::diag(&[0.8, 0.2]), &["A"], 1e-12).unwrap();
        let b = DensityOperator::new(
            ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.3, 0.5]),
            &["B"],
            1e-12,
        )
        .unwrap();
        tensor_product(&a, &b).unwrap()
    }

    /// 1 − H₂(2/3), the classical correlation at Ω = 1/3.
    fn classical_at_third() -> f64 {
        1.0 - shannon_bits([2.0 / 3.0, 1.0 / 3.0])
    }

    #[test]
    fn mutual_information_examples() {
        assert!(mutual_information(&product()).unwrap().abs() < 1e-12);
        assert!((mutual_information(&bell()).unwrap() - 2.0).abs() < 1e-12);
        let expected = 2.0 - (0.5 + 0.5 * 6f64.log2());
        assert!((mutual_information(&marginal(1.0 / 3.0)).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.207519).abs() < 1e-6);
    }

    #[test]
    fn spectrum_form_matches_entropy_form() {
        for omega in [0.0, 0.1, 0.2, 1.0 / 3.0, 0.9] {
            let gp = GravityStateParams::new(omega).unwrap();
            let a = mutual_information_from_spectrum(&BellDiagonalParams::from_omega(gp)).unwrap();
            let b = mutual_information(&marginal(omega)).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_examples() {
        let zero =
            classical_correlation_closed(&BellDiagonalParams::correlations(0.0, 0.0, 0.0).unwrap())
                .unwrap();
        assert!(zero.value.abs() < 1e-15);
        let one = classical_correlation_closed(
            &BellDiagonalParams::correlations(1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert!((one.value - 1.0).abs() < 1e-15);
        let gp = GravityStateParams::new(1.0 / 3.0).unwrap();
        let third = classical_correlation_closed(&BellDiagonalParams::from_omega(gp)).unwrap();
        assert!((third.value - classical_at_third()).abs() < 1e-12);
        assert!((third.value - 0.081704).abs() < 1e-6);
    }

    #[test]
    fn closed_form_rejects_invalid_params() {
        let p = BellDiagonalParams::new(0.9, 0.9, 0.0, 0.0, -0.9).unwrap();
        assert!(classical_correlation_closed(&p).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let grid = MeasurementGrid::default();
        assert!(
            classical_correlation_bruteforce(&product(), grid)
                .unwrap()
                .abs()
                < 1e-6
        );
        assert!((classical_correlation_bruteforce(&bell(), grid).unwrap() - 1.0).abs() < 1e-6);
        let c = classical_correlation_bruteforce(&marginal(1.0 / 3.0), grid).unwrap();
        assert!((c - classical_at_third()).abs() < 1e-6);
    }

    #[test]
    fn bruteforce_finds_off_grid_minimum() {
        // coarse grid: the refinement has to do the work
        let grid = MeasurementGrid {
            theta_steps: 7,
            phi_steps: 11,
            refine_starts: 3,
        };
        let p = BellDiagonalParams::correlations(0.1, -0.55, 0.2).unwrap();
        let rho = crate::gravity_states::bell_diagonal_build(&p).unwrap();
        let brute = classical_correlation_bruteforce(&rho, grid).unwrap();
        let closed = classical_correlation_closed(&p).unwrap().value;
        assert!((brute - closed).abs() < 1e-6, "{brute} vs {closed}");
    }

    #[test]
    fn discord_examples() {
        let gp = GravityStateParams::new(1.0 / 3.0).unwrap();
        let d = quantum_discord(&marginal(1.0 / 3.0), &BellDiagonalParams::from_omega(gp)).unwrap();
        let expected = 2.0 - (0.5 + 0.5 * 6f64.log2()) - classical_at_third();
        assert!((d - expected).abs() < 1e-12);
        assert!((d - 0.125815).abs() < 1e-6);
        let bell_p = BellDiagonalParams::correlations(1.0, -1.0, 1.0).unwrap();
        assert!((quantum_discord(&bell(), &bell_p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_information_examples() {
        assert!((coherent_information(&bell()).unwrap() - 1.0).abs() < 1e-12);
        let third = coherent_information(&marginal(1.0 / 3.0)).unwrap();
        assert!((third + 0.5 * 6f64.log2() - 0.5).abs() < 1e-12);
        assert!((coherent_information(&marginal(0.0)).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_shot_examples() {
        let grid: Vec<f64> = (0..=100)
            .map(|k| 0.001 + k as f64 * (1.0 / 3.0 - 0.001) / 100.0)
            .collect();
        let caps = one_shot_capacities(&grid).unwrap();
        assert_eq!(caps.classical_argmax, grid[0]);
        assert!((caps.classical - 0.5).abs() < 0.01);
        assert!(caps.quantum < 0.0);
        assert!(!caps.regularized);

        let single = one_shot_capacities(&[1.0 / 3.0]).unwrap();
        let r = correlation_report(1.0 / 3.0).unwrap();
        assert_eq!(single.classical, r.mutual_info);
        assert_eq!(single.quantum, r.one_shot_q);
        assert!(one_shot_capacities(&[]).is_err());
        assert!(one_shot_capacities(&[0.5]).is_err());
    }

    #[test]
    fn sweep_shape_and_identities() {
        let rows = figure4_sweep(0.01, 1.0 / 3.0, 25).unwrap();
        assert_eq!(rows.len(), 25);
        assert_eq!(rows.last().unwrap().omega, 1.0 / 3.0);
        for r in &rows {
            assert!((r.discord + r.classical_corr - r.mutual_info).abs() < 1e-10);
            assert!((r.coherent_info - (r.mutual_info - 1.0)).abs() < 1e-10);
        }
        assert!(figure4_sweep(0.0, 0.2, 5).is_err());
        assert!(figure4_sweep(0.1, 0.5, 5).is_err());
        assert!(figure4_sweep(0.1, 0.2, 1).is_err());
    }
}
