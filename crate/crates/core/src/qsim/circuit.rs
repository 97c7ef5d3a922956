use super::state::check_wire_count;
use super::{CallCounter, Gate, Statevector};
use crate::embed::{build_layer, embed, EmbeddingKind, LayerKind, StatePrep};
use crate::error::{Error, Result};

/// Declarative variational circuit: an embedding followed by trainable
/// layers in order.
///
/// With `reupload` set and a gate-based embedding, the embedding gates are
/// repeated before every layer. Amplitude initialization is a state
/// preparation and is only ever applied once.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub n_wires: usize,
    pub embedding: EmbeddingKind,
    pub layers: Vec<LayerKind>,
    pub reupload: bool,
}

impl CircuitSpec {
    pub fn new(n_wires: usize, embedding: EmbeddingKind, layers: Vec<LayerKind>) -> Result<Self> {
        check_wire_count(n_wires)?;
        Ok(Self {
            n_wires,
            embedding,
            layers,
            reupload: false,
        })
    }

    pub fn with_reupload(mut self, reupload: bool) -> Self {
        self.reupload = reupload;
        self
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.params_per_layer(self.n_wires)).sum()
    }

    /// Full gate list for `(weights, input)` and the initial state it acts on.
    pub fn gates(&self, weights: &[f64], input: &[f64]) -> Result<(Statevector, Vec<Gate>)> {
        let expected = self.param_count();
        if weights.len() != expected {
            return Err(Error::WeightLength {
                expected,
                got: weights.len(),
            });
        }
        let (initial, embed_gates) = match embed(&self.embedding, input, self.n_wires)? {
            StatePrep::Gates(g) => (Statevector::zero(self.n_wires)?, g),
            StatePrep::Amplitudes(a) => (Statevector::from_amplitudes(a)?, Vec::new()),
        };
        let repeat = self.reupload && !self.layers.is_empty();
        let mut gates = Vec::new();
        if !repeat {
            gates.extend_from_slice(&embed_gates);
        }
        let mut offset = 0;
        for layer in &self.layers {
            let n = layer.params_per_layer(self.n_wires);
            if repeat {
                gates.extend_from_slice(&embed_gates);
            }
            gates.extend(build_layer(layer, self.n_wires, &weights[offset..offset + n])?);
            offset += n;
        }
        Ok((initial, gates))
    }

    /// Simulate without touching any counter.
    pub(crate) fn execute(&self, weights: &[f64], input: &[f64]) -> Result<Statevector> {
        let (mut state, gates) = self.gates(weights, input)?;
        for g in &gates {
            state.apply(g)?;
        }
        Ok(state)
    }
}

/// Execute `spec` once: one device call.
pub fn run_circuit(spec: &CircuitSpec, weights: &[f64], input: &[f64], counter: &CallCounter) -> Result<Statevector> {
    let state = spec.execute(weights, input)?;
    counter.add(1);
    Ok(state)
}
