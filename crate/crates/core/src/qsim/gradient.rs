use std::f64::consts::FRAC_PI_2;

use super::{run_circuit, CallCounter, CircuitSpec};
use crate::error::{Error, Result};

/// `⟨Z_wire⟩` after one execution of the circuit.
pub fn expectation_value(
    spec: &CircuitSpec,
    weights: &[f64],
    input: &[f64],
    wire: usize,
    counter: &CallCounter,
) -> Result<f64> {
    run_circuit(spec, weights, input, counter)?.expectation_z(wire)
}

/// Gradient of `⟨Z_wire⟩` by the two-term shift rule,
/// `∂f/∂θ_j = [f(θ_j + π/2) − f(θ_j − π/2)] / 2`.
///
/// Costs exactly `2 · param_count` device calls.
pub fn parameter_shift_gradient(
    spec: &CircuitSpec,
    weights: &[f64],
    input: &[f64],
    wire: usize,
    counter: &CallCounter,
) -> Result<Vec<f64>> {
    let expected = spec.param_count();
    if weights.len() != expected {
        return Err(Error::WeightLength {
            expected,
            got: weights.len(),
        });
    }
    if wire >= spec.n_wires {
        return Err(Error::WireOutOfRange {
            wire,
            n_wires: spec.n_wires,
        });
    }
    for layer in &spec.layers {
        if let Some(kind) = layer.trainable_gate_kinds().into_iter().find(|k| !k.is_shiftable()) {
            return Err(Error::NotShiftable(kind.name()));
        }
    }
    // validate the input once so a bad sample fails before any call is spent
    spec.gates(weights, input)?;

    let mut shifted = weights.to_vec();
    let mut grad = Vec::with_capacity(weights.len());
    for j in 0..weights.len() {
        shifted[j] = weights[j] + FRAC_PI_2;
        let plus = expectation_value(spec, &shifted, input, wire, counter)?;
        shifted[j] = weights[j] - FRAC_PI_2;
        let minus = expectation_value(spec, &shifted, input, wire, counter)?;
        shifted[j] = weights[j];
        grad.push((plus - minus) / 2.0);
    }
    Ok(grad)
}
