//! Numerics for a gravity-mediated entanglement model on qubits.
//!
//! The crate is organised bottom-up:
//!
//! * [`qmat`]: dense complex matrices over labelled qubit slots (tensor
//!   products, partial trace and transpose, Hermitian eigensolver, entropy).
//! * [`gravity_states`]: the tripartite environment state, its Bell-diagonal
//!   marginal and the Bell-diagonal parameterisation.
//! * [`separability`]: partial-transpose audits of every cut.
//! * [`channels`]: Kraus channels, complements, measure-and-prepare maps,
//!   the anti-degradable qubit family and the flagged two-branch channel.
//! * [`correlations`]: mutual information, classical correlation, discord,
//!   coherent information and the Ω sweep.
//! * [`process_game`]: the four-slot process matrix and its causal game.
//! * [`sr_latch`]: Toffoli-NOR gate, its decomposition and the SR latch.

pub mod channels;
pub mod correlations;
pub mod error;
pub mod gravity_states;
pub mod process_game;
pub mod qmat;
pub mod random;
pub mod separability;
pub mod sr_latch;

pub use error::{QgravError, Result};
pub use qmat::{ComplexMatrix, DensityOperator, Tolerances};
