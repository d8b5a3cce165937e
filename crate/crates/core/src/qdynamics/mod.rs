//! Exact quantum evolution of the kicked rotor pair and the entanglement
//! quantities extracted from the joint state.

mod basis;
mod density;
mod propagator;
mod state;

pub use basis::{FloquetSpec, HilbertConfig, InitialStateSpec, RotorInit, Subsystem};
pub use density::{
    linear_entropy, quantum_weights, reduced_density, schmidt_weights, state_distinguishability,
    trace_distance, DensityOperator, Distinguishability, QuantumWeights,
};
pub(crate) use basis::quanta;
pub use propagator::{apply_free, apply_kick, step, FloquetPropagator};
pub use state::{init_product_state, rotor_amplitudes, BipartiteState};
