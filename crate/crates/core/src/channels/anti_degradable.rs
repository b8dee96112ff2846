use num_complex::Complex64;
use serde::Serialize;

use super::KrausChannel;
use crate::error::Result;
use crate::qmat::ComplexMatrix;

/// Real 4×4 action on `(1, w_x, w_y, w_z)`.
pub type TransferMatrix = [[f64; 4]; 4];

/// Angles of the two-Kraus qubit family and the derived transfer-matrix
/// entries `λ1 = cos u`, `λ2 = cos v`, `λ3 = λ1 λ2`, `t3 = sin u sin v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntiDegradableParams {
    pub u: f64,
    pub v: f64,
    pub lambda: [f64; 3],
    pub t3: f64,
}

impl AntiDegradableParams {
    pub fn new(u: f64, v: f64) -> Self {
        let (l1, l2) = (u.cos(), v.cos());
        Self {
            u,
            v,
            lambda: [l1, l2, l1 * l2],
            t3: u.sin() * v.sin(),
        }
    }

    /// `sin u > cos v`.
    pub fn anti_degradable(&self) -> bool {
        self.u.sin() > self.v.cos()
    }

    /// The companion condition `|sin v| ≥ |cos u|`, reported separately.
    pub fn companion_condition(&self) -> bool {
        self.v.sin().abs() >= self.u.cos().abs()
    }

    /// Largest residual of `(λ1 ± λ2)² = (1 ± λ3)² − t3²`.
    pub fn sum_difference_residual(&self) -> f64 {
        let [l1, l2, l3] = self.lambda;
        let plus = (l1 + l2).powi(2) - ((1.0 + l3).powi(2) - self.t3.powi(2));
        let minus = (l1 - l2).powi(2) - ((1.0 - l3).powi(2) - self.t3.powi(2));
        plus.abs().max(minus.abs())
    }

    /// Largest residual of `λ3 = λ1 λ2` and `t3² = (1 − λ1²)(1 − λ2²)`.
    pub fn product_residual(&self) -> f64 {
        let [l1, l2, l3] = self.lambda;
        let a = l3 - l1 * l2;
        let b = self.t3.powi(2) - (1.0 - l1 * l1) * (1.0 - l2 * l2);
        a.abs().max(b.abs())
    }

    /// Closed-form transfer matrix: diagonal `(1, cos u, cos v, cos u cos v)`
    /// with `sin u sin v` in row z, column 0.
    pub fn expected_transfer_matrix(&self) -> TransferMatrix {
        let [l1, l2, l3] = self.lambda;
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, l1, 0.0, 0.0],
            [0.0, 0.0, l2, 0.0],
            [self.t3, 0.0, 0.0, l3],
        ]
    }
}

/// Two Kraus operators
/// `A₊ = diag(cos½(v−u), cos½(u+v))` and
/// `A₋ = [[0, sin½(u+v)], [sin½(v−u), 0]]`.
pub fn anti_degradable_channel(p: &AntiDegradableParams) -> Result<KrausChannel> {
    let (u, v) = (p.u, p.v);
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    let plus = ComplexMatrix::from_vec(
        2,
        2,
        vec![r((0.5 * (v - u)).cos()), z, z, r((0.5 * (u + v)).cos())],
    )?;
    let minus = ComplexMatrix::from_vec(
        2,
        2,
        vec![z, r((0.5 * (u + v)).sin()), r((0.5 * (v - u)).sin()), z],
    )?;
    KrausChannel::new(vec![plus, minus])
}
