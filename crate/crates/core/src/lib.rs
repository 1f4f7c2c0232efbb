//! Sign-structure variational quantum-neural hybrid eigensolver.
//!
//! The hybrid ansatz is `|ψ⟩ = F · Π W_l G_l |0⟩`: a circuit of alternating
//! classically simulatable blocks `G_l` (Hadamard / Ry) and diagonal phase blocks
//! `W_l` (Rz / Rzz), post-processed by a diagonal non-negative amplitude operator
//! `F = Σ_s f(s)|s⟩⟨s|` produced by a small neural network.
//!
//! Module map:
//! - [`qsim`]: dense statevector simulation, sampling and depolarizing trajectories.
//! - [`pauli`]: Pauli algebra, benchmark Hamiltonians, ground-state oracles, MaxCut encoding.
//! - [`ansatz`]: parameterized circuits (sign ansatz, HEA, QAOA, brickwork).
//! - [`neural`]: the amplitude model with analytic backpropagation.
//! - [`estimator`]: hybrid energy estimation, measurement plans, gradients.
//! - [`transfer`]: fitting a new Ry block to the previous amplitude model.
//! - [`driver`]: optimization loops and metrics.
//! - [`liealg`]: dynamical Lie algebra dimensions.
//!
//! Bit-ordering convention used everywhere: in a basis index `s` over `n` qubits,
//! qubit 0 is the most significant bit, so the bitstring `"01"` is index 1.

pub mod ansatz;
pub mod driver;
pub mod error;
pub mod estimator;
pub mod liealg;
pub mod neural;
pub mod optim;
pub mod pauli;
pub mod qsim;
pub mod rng;
pub mod transfer;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
