//! Statevector simulation of an HHL-style solver for d-dimensional Poisson
//! problems on a uniform grid with Dirichlet boundaries.
//!
//! The crate is `no_std` (it needs `alloc`). It contains
//!
//! * a dense statevector simulator ([`Statevector`], [`GateOp`], [`Circuit`]),
//! * the classical oracle ([`oracle`]): Poisson matrices, analytic
//!   eigenpairs, the sine transform, a direct solve,
//! * circuit blocks ([`blocks`]): QFT, the sine-transform block, Hamiltonian
//!   simulation and phase estimation,
//! * the solver pipeline ([`pipeline`]).
//!
//! Register C carries the grid vector, B the eigenvalue estimate, A the
//! one-hot exponent of the seed reciprocal, and one ancilla takes the
//! rotation that post-selection keeps.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod blocks;
pub mod circuit;
pub mod error;
pub mod gate;
pub mod layout;
pub mod oracle;
pub mod pipeline;
pub mod problem;
pub mod reciprocal;
pub mod rng;
pub mod state;

pub use circuit::{Circuit, GateCounts};
pub use error::{Error, Result};
pub use gate::{BlockMatrix, Control, GateOp};
pub use layout::RegisterLayout;
pub use pipeline::{run_pipeline, SolveMode, SolveReport};
pub use problem::PoissonProblem;
pub use state::{Statevector, DEFAULT_QUBIT_CAP};
