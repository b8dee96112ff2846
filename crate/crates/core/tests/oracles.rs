//! Cross-checks between closed forms and independent numerical routes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgrav_core::channels::{degrading_map, measure_prepare, KrausChannel};
use qgrav_core::correlations::{
    classical_correlation_bruteforce, classical_correlation_closed, mutual_information,
    mutual_information_from_spectrum, MeasurementGrid,
};
use qgrav_core::gravity_states::{bell_diagonal_build, bell_eigenvalues, BellDiagonalParams};
use qgrav_core::process_game::{
    build_ocb_process, causally_ordered_process, joint_distribution, LocalInstrument,
};
use qgrav_core::qmat::{partial_trace, ComplexMatrix, DensityOperator, Pauli};
use qgrav_core::random::{random_density, random_ket};
use qgrav_core::separability::ppt_check;

fn random_bell_params(
    rng: &mut impl Rng,
    with_bloch: bool,
) -> (BellDiagonalParams, DensityOperator) {
    loop {
        let mut draw = || rng.random_range(-1.0..=1.0);
        let (r, s) = if with_bloch {
            (draw(), draw())
        } else {
            (0.0, 0.0)
        };
        let p = BellDiagonalParams::new(r, s, draw(), draw(), draw()).unwrap();
        if let Ok(rho) = bell_diagonal_build(&p) {
            return (p, rho);
        }
    }
}

#[test]
fn bell_spectrum_matches_eigensolver_with_bloch_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (p, rho) = random_bell_params(&mut rng, true);
        let dense = rho.eigenvalues().unwrap();
        for (a, b) in bell_eigenvalues(&p).sorted().iter().zip(&dense) {
            assert!((a - b).abs() < 1e-10, "{p:?}");
        }
    }
}

#[test]
fn mutual_information_two_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let (p, rho) = random_bell_params(&mut rng, false);
        let a = mutual_information(&rho).unwrap();
        let b = mutual_information_from_spectrum(&p).unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn closed_classical_correlation_matches_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..15 {
        let (p, rho) = random_bell_params(&mut rng, false);
        let closed = classical_correlation_closed(&p).unwrap().value;
        let searched = classical_correlation_bruteforce(&rho, MeasurementGrid::default()).unwrap();
        assert!(
            (closed - searched).abs() < 1e-6,
            "{p:?}: {closed} vs {searched}"
        );
    }
}

#[test]
fn classical_correlation_is_bounded_by_mutual_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..40 {
        let (p, rho) = random_bell_params(&mut rng, false);
        let c = classical_correlation_closed(&p).unwrap().value;
        let i = mutual_information(&rho).unwrap();
        assert!(c >= -1e-12 && c <= i + 1e-12);
    }
}

#[test]
fn measure_prepare_outputs_are_ppt_for_random_entangled_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let effects = [
        ComplexMatrix::projector(&Pauli::X.eigenstate(0)),
        ComplexMatrix::projector(&Pauli::X.eigenstate(1)),
    ];
    let preps = [
        DensityOperator::pure(&Pauli::Y.eigenstate(0), &["out"]).unwrap(),
        DensityOperator::pure(&[h.into(), h.into()], &["out"]).unwrap(),
    ];
    let ch = measure_prepare(&effects, &preps).unwrap();
    let mut entangled = 0;
    while entangled < 20 {
        let psi = DensityOperator::pure(&random_ket(&mut rng, 4), &["A", "B"]).unwrap();
        if ppt_check(&psi, "A", 1e-9).unwrap().min_eigenvalue > -1e-3 {
            continue;
        }
        entangled += 1;
        let out = ch.apply_to_slot(&psi, "B").unwrap();
        assert!(ppt_check(&out, "A", 1e-9).unwrap().min_eigenvalue >= -1e-10);
    }
}

#[test]
fn degrading_map_matches_dephasing_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z = Pauli::Z.matrix();
    let dephase = KrausChannel::new(vec![
        ComplexMatrix::identity(2).scale_real(std::f64::consts::FRAC_1_SQRT_2),
        z.scale_real(std::f64::consts::FRAC_1_SQRT_2),
    ])
    .unwrap();
    for _ in 0..10 {
        let rho = random_density(&mut rng, &["A"]);
        let a = degrading_map().apply(&rho).unwrap();
        let b = dephase.apply(&rho).unwrap();
        assert!(a.matrix().approx_eq(b.matrix(), 1e-14));
    }
}

#[test]
fn causal_process_signals_only_forward() {
    // Bob acts after Alice, so his choice of instrument cannot move her
    // outcome statistics.
    let w = causally_ordered_process();
    let bob = LocalInstrument::measure_and_prepare(Pauli::Z, Pauli::Z, |_| 0);
    let bob_alt = LocalInstrument::measure_and_prepare(Pauli::X, Pauli::Z, |x| x);
    let alice = LocalInstrument::measure_and_prepare(Pauli::Z, Pauli::Z, |x| x);
    let marg = |p: Vec<Vec<f64>>| -> Vec<f64> { p.iter().map(|r| r.iter().sum()).collect() };
    let a1 = marg(joint_distribution(&w, &alice, &bob).unwrap());
    let a2 = marg(joint_distribution(&w, &alice, &bob_alt).unwrap());
    for (x, y) in a1.iter().zip(&a2) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn ocb_process_reduces_to_white_noise_on_local_marginals() {
    let w = build_ocb_process();
    let rho = DensityOperator::new(
        w.matrix().scale_real(0.25),
        &["Ai", "Ao", "Bi", "Bo"],
        1e-12,
    )
    .unwrap();
    for keep in ["Ai", "Ao", "Bi", "Bo"] {
        let others: Vec<&str> = ["Ai", "Ao", "Bi", "Bo"]
            .into_iter()
            .filter(|s| *s != keep)
            .collect();
        let m = partial_trace(&rho, &others).unwrap();
        assert!(m
            .matrix()
            .approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-14));
    }
}
