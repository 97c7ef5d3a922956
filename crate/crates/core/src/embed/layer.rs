use crate::error::{Error, Result};
use crate::qsim::{Gate, GateKind};

use super::RotationAxis;

#[derive(Debug, Clone, PartialEq)]
pub enum LayerTemplate {
    /// One single-axis rotation per wire, then a CNOT ring.
    BasicEntangler { rotation: RotationAxis },
    /// One general `ROT` per wire, then a CNOT ring.
    StronglyEntangling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerKind {
    pub name: String,
    pub template: LayerTemplate,
}

impl LayerKind {
    pub fn basic_entangler() -> Self {
        Self {
            name: "BasicEntangler".into(),
            template: LayerTemplate::BasicEntangler {
                rotation: RotationAxis::X,
            },
        }
    }

    pub fn strongly_entangling() -> Self {
        Self {
            name: "StronglyEntangling".into(),
            template: LayerTemplate::StronglyEntangling,
        }
    }

    pub fn params_per_layer(&self, n_wires: usize) -> usize {
        match self.template {
            LayerTemplate::BasicEntangler { .. } => n_wires,
            LayerTemplate::StronglyEntangling => 3 * n_wires,
        }
    }

    /// Gate kinds that consume the layer's weights, in weight order.
    pub fn trainable_gate_kinds(&self) -> Vec<GateKind> {
        match self.template {
            LayerTemplate::BasicEntangler { rotation } => vec![rotation.gate(0, 0.0).kind()],
            LayerTemplate::StronglyEntangling => vec![GateKind::Rot],
        }
    }
}

/// Gate sequence for one layer on `n_wires` qubits.
pub fn build_layer(kind: &LayerKind, n_wires: usize, weights: &[f64]) -> Result<Vec<Gate>> {
    let expected = kind.params_per_layer(n_wires);
    if weights.len() != expected {
        return Err(Error::WeightLength {
            expected,
            got: weights.len(),
        });
    }
    let mut gates = Vec::with_capacity(2 * n_wires);
    match kind.template {
        LayerTemplate::BasicEntangler { rotation } => {
            gates.extend(weights.iter().enumerate().map(|(w, &a)| rotation.gate(w, a)));
        }
        LayerTemplate::StronglyEntangling => {
            gates.extend(weights.chunks_exact(3).enumerate().map(|(w, a)| Gate::Rot {
                wire: w,
                angles: [a[0], a[1], a[2]],
            }));
        }
    }
    if n_wires > 1 {
        gates.extend((0..n_wires).map(|i| Gate::Cnot {
            control: i,
            target: (i + 1) % n_wires,
        }));
    }
    Ok(gates)
}
