//! Entanglement generation in a pair of kicked rotors coupled by a contact
//! interaction, together with the classical counterpart of the same map.
//!
//! The crate is split along the quantum/classical divide:
//!
//! * [`qdynamics`] evolves the bipartite state exactly (split-step Floquet map)
//!   and extracts reduced density matrices, linear entropy and Schmidt weights.
//! * [`cdynamics`] iterates the classical kick map for trajectory ensembles and
//!   provides surfaces of section and Lyapunov estimates.
//! * [`correspondence`] coarse-grains the classical ensemble into Planck cells
//!   and compares the resulting probabilities with the quantum weights.
//! * [`harness`] wires everything into reproducible, config-driven experiments.
//!
//! The classical dynamics depends only on `(k, tau, inertias)`; the effective
//! Planck constant enters through the size of the quantum basis, so shrinking
//! `hbar_eff` refines the quantum description of a fixed classical system.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cdynamics;
pub mod correspondence;
pub mod error;
pub mod harness;
pub mod par;
pub mod qdynamics;

pub use error::{Error, Result};

pub use cdynamics::{Ensemble, PhasePoint};
pub use correspondence::{CellGrid, ProbabilityVector};
pub use qdynamics::{
    BipartiteState, DensityOperator, FloquetPropagator, FloquetSpec, HilbertConfig,
    InitialStateSpec, RotorInit, Subsystem,
};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
