use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Gate, MAX_WIRES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationAxis {
    X,
    Y,
    Z,
}

impl RotationAxis {
    pub fn gate(self, wire: usize, angle: f64) -> Gate {
        match self {
            RotationAxis::X => Gate::Rx { wire, angle },
            RotationAxis::Y => Gate::Ry { wire, angle },
            RotationAxis::Z => Gate::Rz { wire, angle },
        }
    }
}

/// Scalar value of a fixed embedding option.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OptionValue {
    Bool(bool),
    Number(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingMethod {
    /// One rotation per wire; missing features rotate by 0.
    Angle { axis: RotationAxis },
    /// Features become amplitudes after padding to `2^n` entries.
    Amplitude { pad_with: f64, normalize: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingKind {
    pub name: String,
    pub method: EmbeddingMethod,
}

/// Initial state produced by an embedding.
#[derive(Debug, Clone, PartialEq)]
pub enum StatePrep {
    /// Gates applied to `|0…0⟩`.
    Gates(Vec<Gate>),
    /// Direct amplitude initialization (unit norm, length `2^n`).
    Amplitudes(Vec<Complex64>),
}

impl EmbeddingKind {
    pub fn angle() -> Self {
        Self {
            name: "ANGLE".into(),
            method: EmbeddingMethod::Angle { axis: RotationAxis::X },
        }
    }

    pub fn amplitude() -> Self {
        Self {
            name: "AMPLITUDE".into(),
            method: EmbeddingMethod::Amplitude {
                pad_with: 0.0,
                normalize: true,
            },
        }
    }

    pub fn fixed_options(&self) -> IndexMap<String, OptionValue> {
        let mut opts = IndexMap::new();
        if let EmbeddingMethod::Amplitude { pad_with, normalize } = self.method {
            opts.insert("pad_with".into(), OptionValue::Number(pad_with));
            opts.insert("normalize".into(), OptionValue::Bool(normalize));
        }
        opts
    }

    pub fn max_features(&self, n_wires: usize) -> usize {
        match self.method {
            EmbeddingMethod::Angle { .. } => n_wires,
            EmbeddingMethod::Amplitude { .. } => 1usize << n_wires.min(MAX_WIRES),
        }
    }

    pub fn accepts(&self, features: usize, n_wires: usize) -> bool {
        features >= 1 && n_wires >= 1 && n_wires <= MAX_WIRES && features <= self.max_features(n_wires)
    }

    /// Register width this embedding uses for `features` inputs: one wire per
    /// feature for angle embeddings, `⌈log₂ max(features, 2)⌉` for amplitudes.
    pub fn wires_for(&self, features: usize) -> usize {
        match self.method {
            EmbeddingMethod::Angle { .. } => features,
            EmbeddingMethod::Amplitude { .. } => {
                let f = features.max(2);
                (usize::BITS - (f - 1).leading_zeros()) as usize
            }
        }
    }

    /// Whether the embedding is built from gates and can be re-applied
    /// between layers.
    pub fn is_gate_based(&self) -> bool {
        matches!(self.method, EmbeddingMethod::Angle { .. })
    }
}

/// Prepare `x` on `n_wires` qubits.
pub fn embed(kind: &EmbeddingKind, x: &[f64], n_wires: usize) -> Result<StatePrep> {
    if !kind.accepts(x.len(), n_wires) {
        if n_wires == 0 || n_wires > MAX_WIRES {
            return Err(Error::TooManyWires(n_wires));
        }
        return Err(Error::EmbeddingInput {
            embedding: kind.name.clone(),
            features: x.len(),
            n_wires,
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("embedding input"));
    }
    match kind.method {
        EmbeddingMethod::Angle { axis } => Ok(StatePrep::Gates(
            (0..n_wires)
                .map(|w| axis.gate(w, x.get(w).copied().unwrap_or(0.0)))
                .collect(),
        )),
        EmbeddingMethod::Amplitude { pad_with, normalize } => {
            let mut amps = vec![pad_with; 1 << n_wires];
            amps[..x.len()].copy_from_slice(x);
            let scale = amps.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return Err(Error::ZeroAmplitudeInput);
            }
            let norm = scale * amps.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt();
            let divisor = if normalize {
                norm
            } else {
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(Error::UnnormalizedAmplitudeInput(norm));
                }
                1.0
            };
            Ok(StatePrep::Amplitudes(
                amps.into_iter().map(|v| Complex64::new(v / divisor, 0.0)).collect(),
            ))
        }
    }
}
