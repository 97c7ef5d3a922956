//! Statevector simulator.
//!
//! Amplitudes are indexed big-endian in wire order: wire 0 is the most
//! significant bit of the basis index. Rotations use the half-angle
//! convention, `RY(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.

mod circuit;
mod counter;
mod gate;
mod gradient;
mod state;

pub use circuit::{run_circuit, CircuitSpec};
pub use counter::CallCounter;
pub use gate::{Gate, GateKind};
pub use gradient::{expectation_value, parameter_shift_gradient};
pub use state::{apply_gate, expectation_z, fidelity, Statevector};

/// Largest supported register (65536 amplitudes).
pub const MAX_WIRES: usize = 16;
