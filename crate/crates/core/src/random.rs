//! Seeded random states, unitaries and channels for property checks.
//!
//! Every helper draws from a caller-supplied RNG.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::KrausChannel;
use crate::qmat::{ComplexMatrix, DensityOperator};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state of dimension `dim`.
pub fn random_ket(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `rows x cols` matrix with orthonormal columns (Gram–Schmidt on a Ginibre
/// sample). `cols <= rows`.
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(cols <= rows);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<Complex64> = (0..rows).map(|_| gaussian(rng)).collect();
        for q in &columns {
            let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= overlap * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            columns.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// Haar-random unitary.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    random_isometry(rng, dim, dim)
}

/// Random mixed state obtained by tracing a random pure state on
/// `dim x dim`.
pub fn random_density<S: AsRef<str>>(rng: &mut impl Rng, slots: &[S]) -> DensityOperator {
    let dim = 1usize << slots.len();
    let g = ComplexMatrix::from_vec(dim, dim, (0..dim * dim).map(|_| gaussian(rng)).collect())
        .expect("square");
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / tr), slots, 1e-10).expect("Wishart sample is a state")
}

/// Random channel `d_in -> d_out` with `num_kraus` Kraus operators, cut from a
/// random isometry.
pub fn random_channel(
    rng: &mut impl Rng,
    d_in: usize,
    d_out: usize,
    num_kraus: usize,
) -> KrausChannel {
    let v = random_isometry(rng, d_out * num_kraus, d_in);
    KrausChannel::new(isometry_blocks(&v, d_out, num_kraus)).expect("isometry blocks are complete")
}

/// Splits an isometry with `d_out * count` rows into `count` stacked blocks.
pub(crate) fn isometry_blocks(v: &ComplexMatrix, d_out: usize, count: usize) -> Vec<ComplexMatrix> {
    (0..count)
        .map(|k| {
            let mut block = ComplexMatrix::zeros(d_out, v.cols());
            for i in 0..d_out {
                for j in 0..v.cols() {
                    block[(i, j)] = v[(k * d_out + i, j)];
                }
            }
            block
        })
        .collect()
}
