//! Numerical laboratory for wave-particle complementarity in quantum-switch
//! processes.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, partial traces,
//!   a Jacobi eigensolver for Hermitian matrices, trace norm and entropies.
//! - [`model`]: interferometer preparations, which-path interactions, the
//!   switch unitary, global and reduced states, and order-qubit post-selection.
//! - [`measures`]: l1 coherence, path distinguishability, causal coherence,
//!   order-qubit interference, and conditional entropies.
//! - [`discrimination`]: Helstrom and unambiguous discrimination bounds.
//! - [`relations`]: machine-checkable duality relations, the no-go
//!   counterexample, the region sweep and the entropic bounds.
//! - [`sampling`]: seeded random scenarios for randomized verification.

pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod model;
pub mod relations;
pub mod sampling;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityOperator, HermitianEigen};
pub use model::{CausalOrder, PathPreparation, SwitchScenario, WhichPathInteraction};

pub use num_complex::Complex64;
