use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    Rot,
    H,
    Cnot,
    /// Pauli-Z, the measured observable; applied as a gate it flips the phase of `|1⟩`.
    Z,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Rot => "ROT",
            GateKind::H => "H",
            GateKind::Cnot => "CNOT",
            GateKind::Z => "Z",
        }
    }

    pub fn n_angles(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::Rot => 3,
            GateKind::H | GateKind::Cnot | GateKind::Z => 0,
        }
    }

    pub fn n_wires(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    /// Whether every angle of the gate obeys the two-term ±π/2 shift rule.
    pub fn is_shiftable(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rot)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate bound to wires and angles (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx {
        wire: usize,
        angle: f64,
    },
    Ry {
        wire: usize,
        angle: f64,
    },
    Rz {
        wire: usize,
        angle: f64,
    },
    /// `RZ(omega) · RY(theta) · RZ(phi)`, angles stored as `[phi, theta, omega]`.
    Rot {
        wire: usize,
        angles: [f64; 3],
    },
    H {
        wire: usize,
    },
    Z {
        wire: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    /// Build a gate from loose parts, checking wire and angle counts.
    pub fn new(kind: GateKind, wires: &[usize], angles: &[f64]) -> Result<Self> {
        if wires.len() != kind.n_wires() {
            return Err(Error::WireCount {
                kind: kind.name(),
                expected: kind.n_wires(),
                got: wires.len(),
            });
        }
        if angles.len() != kind.n_angles() {
            return Err(Error::AngleCount {
                kind: kind.name(),
                expected: kind.n_angles(),
                got: angles.len(),
            });
        }
        let wire = wires[0];
        Ok(match kind {
            GateKind::Rx => Gate::Rx { wire, angle: angles[0] },
            GateKind::Ry => Gate::Ry { wire, angle: angles[0] },
            GateKind::Rz => Gate::Rz { wire, angle: angles[0] },
            GateKind::Rot => Gate::Rot {
                wire,
                angles: [angles[0], angles[1], angles[2]],
            },
            GateKind::H => Gate::H { wire },
            GateKind::Z => Gate::Z { wire },
            GateKind::Cnot => {
                if wires[0] == wires[1] {
                    return Err(Error::RepeatedWire(wires.to_vec()));
                }
                Gate::Cnot {
                    control: wires[0],
                    target: wires[1],
                }
            }
        })
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Rx { .. } => GateKind::Rx,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::Rot { .. } => GateKind::Rot,
            Gate::H { .. } => GateKind::H,
            Gate::Z { .. } => GateKind::Z,
            Gate::Cnot { .. } => GateKind::Cnot,
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::Rx { wire, .. }
            | Gate::Ry { wire, .. }
            | Gate::Rz { wire, .. }
            | Gate::Rot { wire, .. }
            | Gate::H { wire }
            | Gate::Z { wire } => vec![wire],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }
}
