//! Two-party process matrices and the causal guessing game.
//!
//! Slots are ordered `(A_in, A_out, B_in, B_out)`, one qubit each. Local
//! operations enter through Choi operators in the convention
//! `M = [(I ⊗ 𝓜)(|Φ⟩⟨Φ|)]ᵀ` with `|Φ⟩ = Σ_i |ii⟩` unnormalised, and joint
//! probabilities are `Tr[W (M_A ⊗ M_B)]`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QgravError, Result};
use crate::qmat::{pauli_word, ComplexMatrix, Pauli};
use crate::random::{isometry_blocks, random_isometry};

/// Tolerance for the process-matrix validity checks.
pub const PROCESS_TOL: f64 = 1e-10;

const DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessMatrix {
    matrix: ComplexMatrix,
    min_eigenvalue: f64,
}

impl ProcessMatrix {
    /// Checks Hermiticity, positivity and `Tr W = 4`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != DIM || matrix.cols() != DIM {
            return Err(QgravError::DimensionMismatch(format!(
                "process matrix must be {DIM}x{DIM}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herr = matrix.hermiticity_error();
        if herr > PROCESS_TOL {
            return Err(QgravError::NotHermitian(herr));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(4.0, 0.0)).norm() > PROCESS_TOL {
            return Err(QgravError::BadTrace(tr.re, 4.0));
        }
        let min_eigenvalue = matrix.hermitian_eigenvalues()?[0];
        if min_eigenvalue < -PROCESS_TOL {
            return Err(QgravError::NotPositive(min_eigenvalue));
        }
        Ok(Self {
            matrix,
            min_eigenvalue,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// `¼[I + k (Z_{A_out} Z_{B_in} + Z_{A_in} X_{B_in} Z_{B_out})]`.
///
/// Positive for `|k| ≤ 1/√2`, since the two Pauli words anticommute and
/// their sum squares to `2·I`.
pub fn build_ocb_process_with(coefficient: f64) -> Result<ProcessMatrix> {
    use Pauli::{I, X, Z};
    let id = pauli_word(&[I, I, I, I]);
    let forward = pauli_word(&[I, Z, Z, I]);
    let backward = pauli_word(&[Z, I, X, Z]);
    let correction = (&forward + &backward).scale_real(coefficient);
    ProcessMatrix::new((&id + &correction).scale_real(0.25))
}

/// The process with coefficient `1/√2`.
pub fn build_ocb_process() -> ProcessMatrix {
    build_ocb_process_with(std::f64::consts::FRAC_1_SQRT_2).expect("valid by construction")
}

/// Fixed causal order A ≺ B: `A_in` receives `I/2`, the identity channel
/// connects `A_out` to `B_in`, and `B_out` is discarded.
pub fn causally_ordered_process() -> ProcessMatrix {
    let mut link = ComplexMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        link[(i, j)] = Complex64::new(1.0, 0.0);
    }
    let w = ComplexMatrix::identity(2)
        .scale_real(0.5)
        .kron(&link)
        .kron(&ComplexMatrix::identity(2));
    ProcessMatrix::new(w).expect("valid by construction")
}

/// One qubit-to-qubit instrument: a Kraus list per outcome, jointly
/// trace preserving.
#[derive(Debug, Clone)]
pub struct LocalInstrument {
    outcomes: Vec<Vec<ComplexMatrix>>,
}

impl LocalInstrument {
    pub fn new(outcomes: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for op in outcomes.iter().flatten() {
            if op.rows() != 2 || op.cols() != 2 {
                return Err(QgravError::DimensionMismatch(
                    "instrument must act on qubits".into(),
                ));
            }
            sum = &sum + &(&op.adjoint() * op);
        }
        let err = sum.max_abs_diff(&ComplexMatrix::identity(2));
        if err > PROCESS_TOL {
            return Err(QgravError::Incomplete(err));
        }
        Ok(Self { outcomes })
    }

    pub fn outcomes(&self) -> &[Vec<ComplexMatrix>] {
        &self.outcomes
    }

    /// Measure in the eigenbasis of `measure`; on outcome `x` prepare the
    /// eigenstate of `prepare` selected by `prep_bit(x)`.
    pub fn measure_and_prepare(
        measure: Pauli,
        prepare: Pauli,
        prep_bit: impl Fn(u8) -> u8,
    ) -> Self {
        let outcomes = (0..2u8)
            .map(|x| {
                vec![ComplexMatrix::outer(
                    &prepare.eigenstate(prep_bit(x)),
                    &measure.eigenstate(x),
                )]
            })
            .collect();
        Self { outcomes }
    }

    /// Measure in the eigenbasis of `measure` and prepare `I/2`.
    pub fn measure_and_discard(measure: Pauli) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let outcomes = (0..2u8)
            .map(|x| {
                (0..2u8)
                    .map(|k| {
                        ComplexMatrix::outer(&Pauli::Z.eigenstate(k), &measure.eigenstate(x))
                            .scale_real(h)
                    })
                    .collect()
            })
            .collect();
        Self { outcomes }
    }

    /// Random two-outcome instrument with two Kraus operators per outcome.
    pub fn random(rng: &mut impl Rng) -> Self {
        let v = random_isometry(rng, 8, 2);
        let ops = isometry_blocks(&v, 2, 4);
        Self {
            outcomes: vec![ops[..2].to_vec(), ops[2..].to_vec()],
        }
    }
}

/// `[(I ⊗ 𝓜)(|Φ⟩⟨Φ|)]ᵀ` for the CP map with Kraus operators `ops`.
pub fn choi_of_kraus(ops: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (d_out, d_in) = ops
        .first()
        .map(|k| (k.rows(), k.cols()))
        .ok_or_else(|| QgravError::Invalid("empty Kraus list".into()))?;
    let mut j = ComplexMatrix::zeros(d_in * d_out, d_in * d_out);
    for k in ops {
        if k.rows() != d_out || k.cols() != d_in {
            return Err(QgravError::DimensionMismatch("ragged Kraus list".into()));
        }
        // (I ⊗ K)|Φ⟩ = Σ_i |i⟩ ⊗ K|i⟩
        let mut v = vec![Complex64::new(0.0, 0.0); d_in * d_out];
        for i in 0..d_in {
            for a in 0..d_out {
                v[i * d_out + a] = k[(a, i)];
            }
        }
        j = &j + &ComplexMatrix::projector(&v);
    }
    Ok(j.transpose())
}

/// Per-outcome Choi operators on `(in, out)`.
pub fn choi_of_instrument(instr: &LocalInstrument) -> Result<Vec<ComplexMatrix>> {
    instr
        .outcomes
        .iter()
        .map(|ops| choi_of_kraus(ops))
        .collect()
}

/// `Tr[W (M_A ⊗ M_B)]`.
pub fn probability(w: &ProcessMatrix, alice: &ComplexMatrix, bob: &ComplexMatrix) -> Result<f64> {
    if alice.rows() != 4 || alice.cols() != 4 || bob.rows() != 4 || bob.cols() != 4 {
        return Err(QgravError::DimensionMismatch(
            "local Choi operators must be 4x4 on (in, out)".into(),
        ));
    }
    Ok(contract(w.matrix(), &alice.kron(bob)).re)
}

/// `Tr[A B]` without forming the product.
fn contract(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Joint outcome distribution `p[x][y]`.
pub fn joint_distribution(
    w: &ProcessMatrix,
    alice: &LocalInstrument,
    bob: &LocalInstrument,
) -> Result<Vec<Vec<f64>>> {
    let ca = choi_of_instrument(alice)?;
    let cb = choi_of_instrument(bob)?;
    ca.iter()
        .map(|a| cb.iter().map(|b| probability(w, a, b)).collect())
        .collect()
}

/// Largest `|Σ p − 1|` over `pairs` random instrument pairs.
pub fn normalization_max_error(w: &ProcessMatrix, rng: &mut impl Rng, pairs: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for _ in 0..pairs {
        let a = LocalInstrument::random(rng);
        let b = LocalInstrument::random(rng);
        let total: f64 = joint_distribution(w, &a, &b)?.iter().flatten().sum();
        worst = worst.max((total - 1.0).abs());
    }
    Ok(worst)
}

/// Success probability of the standard strategy: Alice (bit `a`) measures Z
/// and re-prepares `|a⟩`; Bob (bits `b`, `b'`) measures Z and discards when
/// `b' = 1`, otherwise measures X with outcome `m` and prepares `|b ⊕ m⟩`.
/// Returns `½[P(y = a | b' = 1) + P(x = b | b' = 0)]` averaged over uniform
/// `a`, `b`.
pub fn ocb_game_value(w: &ProcessMatrix) -> Result<f64> {
    let mut bob_guesses = 0.0;
    let mut alice_guesses = 0.0;
    for a in 0..2u8 {
        let alice = LocalInstrument::measure_and_prepare(Pauli::Z, Pauli::Z, |_| a);
        for b in 0..2u8 {
            let bob1 = LocalInstrument::measure_and_discard(Pauli::Z);
            let p1 = joint_distribution(w, &alice, &bob1)?;
            bob_guesses += (0..2).map(|x| p1[x][a as usize]).sum::<f64>();

            let bob0 = LocalInstrument::measure_and_prepare(Pauli::X, Pauli::Z, |m| b ^ m);
            let p0 = joint_distribution(w, &alice, &bob0)?;
            alice_guesses += (0..2).map(|y| p0[b as usize][y]).sum::<f64>();
        }
    }
    Ok(0.5 * (bob_guesses / 4.0 + alice_guesses / 4.0))
}

/// Best game value over deterministic local strategies: each party measures
/// in the eigenbasis of one of `bases`, re-prepares an eigenstate of one of
/// `bases` chosen by a function of its inputs and outcome, and guesses by a
/// function of its inputs and outcome. Bob may choose his bases depending on
/// `b'`.
///
/// For fixed Alice behaviour the two `b'` branches decouple, and every guess
/// function can be optimised pointwise, so this is an exact maximum over
/// the whole strategy set.
pub fn max_deterministic_strategy_value(w: &ProcessMatrix, bases: &[Pauli]) -> Result<f64> {
    if bases.is_empty() {
        return Err(QgravError::Invalid("no measurement bases".into()));
    }
    // choi[(meas, prep)][outcome][prep_bit]
    let choi = |meas: Pauli, prep: Pauli, outcome: u8, bit: u8| -> Result<ComplexMatrix> {
        choi_of_kraus(&[ComplexMatrix::outer(
            &prep.eigenstate(bit),
            &meas.eigenstate(outcome),
        )])
    };
    let mut local = Vec::new();
    for &m in bases {
        for &p in bases {
            let mut table = [[None, None], [None, None]];
            for x in 0..2u8 {
                for s in 0..2u8 {
                    table[x as usize][s as usize] = Some(choi(m, p, x, s)?);
                }
            }
            local.push(table.map(|row| row.map(|c| c.expect("filled"))));
        }
    }
    // prob[alice_setting][bob_setting][x][s][y][t]
    let n = local.len();
    let mut prob = vec![vec![[[[[0.0f64; 2]; 2]; 2]; 2]; n]; n];
    for (ia, ta) in local.iter().enumerate() {
        for (ib, tb) in local.iter().enumerate() {
            for x in 0..2 {
                for s in 0..2 {
                    for y in 0..2 {
                        for t in 0..2 {
                            prob[ia][ib][x][s][y][t] = probability(w, &ta[x][s], &tb[y][t])?;
                        }
                    }
                }
            }
        }
    }

    let mut best = f64::NEG_INFINITY;
    for row in &prob {
        for s_fun in 0..16u32 {
            // Alice's re-preparation bit s(a, x)
            let s = |a: usize, x: usize| ((s_fun >> (2 * a + x)) & 1) as usize;
            let mut branch_bob = f64::NEG_INFINITY; // b' = 1: Bob guesses a
            let mut branch_alice = f64::NEG_INFINITY; // b' = 0: Alice guesses b
            for table in row {
                for t_fun in 0..16u32 {
                    let t = |b: usize, y: usize| ((t_fun >> (2 * b + y)) & 1) as usize;
                    let p = |a: usize, b: usize, x: usize, y: usize| table[x][s(a, x)][y][t(b, y)];
                    let mut bob_score = 0.0;
                    for b in 0..2 {
                        for y in 0..2 {
                            bob_score += (0..2)
                                .map(|g| (0..2).map(|x| p(g, b, x, y)).sum::<f64>())
                                .fold(f64::NEG_INFINITY, f64::max);
                        }
                    }
                    let mut alice_score = 0.0;
                    for a in 0..2 {
                        for x in 0..2 {
                            alice_score += (0..2)
                                .map(|g| (0..2).map(|y| p(a, g, x, y)).sum::<f64>())
                                .fold(f64::NEG_INFINITY, f64::max);
                        }
                    }
                    branch_bob = branch_bob.max(bob_score);
                    branch_alice = branch_alice.max(alice_score);
                }
            }
            best = best.max(0.5 * (branch_bob / 4.0 + branch_alice / 4.0));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameReport {
    pub game_value: f64,
    pub psd_min_eigenvalue: f64,
    pub trace: f64,
    pub normalization_max_error: f64,
    /// Best deterministic Pauli-basis strategy found by exhaustive search.
    pub pauli_strategy_max: f64,
}

/// Full report; random instruments for the normalization check are drawn
/// from a ChaCha stream seeded with `seed`.
pub fn game_report(w: &ProcessMatrix, seed: u64, pairs: usize) -> Result<GameReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    Ok(GameReport {
        game_value: ocb_game_value(w)?,
        psd_min_eigenvalue: w.min_eigenvalue(),
        trace: w.trace(),
        normalization_max_error: normalization_max_error(w, rng, pairs)?,
        pauli_strategy_max: max_deterministic_strategy_value(w, &[Pauli::X, Pauli::Y, Pauli::Z])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTIMUM: f64 = 0.853_553_390_593_273_8; // (2 + √2) / 4

    #[test]
    fn ocb_process_is_valid() {
        let w = build_ocb_process();
        assert!((w.trace() - 4.0).abs() < 1e-12);
        assert!(w.min_eigenvalue() >= -1e-12);
        assert!(w.matrix().is_hermitian(0.0));
    }

    #[test]
    fn coefficient_beyond_bound_is_rejected() {
        assert!(matches!(
            build_ocb_process_with(0.8),
            Err(QgravError::NotPositive(_))
        ));
    }

    #[test]
    fn choi_examples() {
        let id = choi_of_kraus(&[ComplexMatrix::identity(2)]).unwrap();
        assert!((id.trace().re - 2.0).abs() < 1e-15);
        let ev = id.hermitian_eigenvalues().unwrap();
        assert!((ev[3] - 2.0).abs() < 1e-14 && ev[2].abs() < 1e-14);

        let reprep = LocalInstrument::new(vec![vec![
            ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]),
            ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]),
        ]])
        .unwrap();
        let c = &choi_of_instrument(&reprep).unwrap()[0];
        let expected = ComplexMatrix::identity(2).kron(&ComplexMatrix::diag(&[1.0, 0.0]));
        assert!(c.approx_eq(&expected, 1e-15));

        let mz = LocalInstrument::measure_and_prepare(Pauli::Z, Pauli::Z, |x| x);
        let parts = choi_of_instrument(&mz).unwrap();
        let total = &parts[0] + &parts[1];
        assert!(total.approx_eq(
            &choi_of_kraus(crate::channels::degrading_map().kraus_ops()).unwrap(),
            1e-15
        ));
    }

    #[test]
    fn maximally_mixed_repreparation_gives_uniform_outcomes() {
        let w = build_ocb_process();
        let a = LocalInstrument::measure_and_discard(Pauli::Z);
        let b = LocalInstrument::measure_and_discard(Pauli::Z);
        for p in joint_distribution(&w, &a, &b).unwrap().iter().flatten() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_holds_for_valid_processes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for w in [build_ocb_process(), causally_ordered_process()] {
            assert!(normalization_max_error(&w, &mut rng, 20).unwrap() < 1e-10);
        }
    }

    #[test]
    fn game_value_hits_optimum() {
        assert!((ocb_game_value(&build_ocb_process()).unwrap() - OPTIMUM).abs() < 1e-9);
    }

    #[test]
    fn zero_coefficient_means_guessing() {
        let w = build_ocb_process_with(0.0).unwrap();
        assert!((ocb_game_value(&w).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn causal_order_caps_deterministic_strategies() {
        let v = max_deterministic_strategy_value(&causally_ordered_process(), &[Pauli::Z]).unwrap();
        assert!(v <= 0.75 + 1e-9);
        assert!((v - 0.75).abs() < 1e-9);
    }

    #[test]
    fn pauli_search_does_not_beat_standard_strategy() {
        let v =
            max_deterministic_strategy_value(&build_ocb_process(), &[Pauli::X, Pauli::Y, Pauli::Z])
                .unwrap();
        assert!(v <= OPTIMUM + 1e-9);
        assert!(
            v >= OPTIMUM - 1e-9,
            "search should rediscover the standard strategy, got {v}"
        );
    }
}
