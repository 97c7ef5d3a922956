use num_complex::Complex64;

use super::{Gate, MAX_WIRES};
use crate::error::{Error, Result};

type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Pure state of `n_wires` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<Complex64>,
    n_wires: usize,
}

impl Statevector {
    /// `|0…0⟩` on `n_wires` qubits.
    pub fn zero(n_wires: usize) -> Result<Self> {
        check_wire_count(n_wires)?;
        let mut amplitudes = vec![ZERO; 1 << n_wires];
        amplitudes[0] = ONE;
        Ok(Self { amplitudes, n_wires })
    }

    /// Wrap raw amplitudes. The length must be a power of two; the norm is
    /// checked to 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "{len} amplitudes is not a power of two >= 2"
            )));
        }
        let n_wires = len.trailing_zeros() as usize;
        check_wire_count(n_wires)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::DimensionMismatch(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes, n_wires })
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn mask(&self, wire: usize) -> Result<usize> {
        if wire >= self.n_wires {
            return Err(Error::WireOutOfRange {
                wire,
                n_wires: self.n_wires,
            });
        }
        Ok(1 << (self.n_wires - 1 - wire))
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::Rx { wire, angle } => self.apply_single(wire, rx(angle)),
            Gate::Ry { wire, angle } => self.apply_single(wire, ry(angle)),
            Gate::Rz { wire, angle } => self.apply_single(wire, rz(angle)),
            Gate::Rot {
                wire,
                angles: [phi, theta, omega],
            } => self.apply_single(wire, matmul(rz(omega), matmul(ry(theta), rz(phi)))),
            Gate::H { wire } => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_single(wire, [[s, s], [s, -s]])
            }
            Gate::Z { wire } => self.apply_single(wire, [[ONE, ZERO], [ZERO, -ONE]]),
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::RepeatedWire(vec![control, target]));
                }
                let cmask = self.mask(control)?;
                let tmask = self.mask(target)?;
                for i in 0..self.amplitudes.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amplitudes.swap(i, i | tmask);
                    }
                }
                Ok(())
            }
        }
    }

    fn apply_single(&mut self, wire: usize, m: Matrix2) -> Result<()> {
        let mask = self.mask(wire)?;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
                self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(())
    }

    /// `⟨Z_wire⟩`.
    pub fn expectation_z(&self, wire: usize) -> Result<f64> {
        let mask = self.mask(wire)?;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum::<f64>()
            .clamp(-1.0, 1.0))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Statevector) -> Result<f64> {
        if self.n_wires != other.n_wires {
            return Err(Error::DimensionMismatch(format!(
                "fidelity between {}-wire and {}-wire states",
                self.n_wires, other.n_wires
            )));
        }
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr().clamp(0.0, 1.0))
    }
}

/// Functional form of [`Statevector::apply`].
pub fn apply_gate(mut state: Statevector, gate: &Gate) -> Result<Statevector> {
    state.apply(gate)?;
    Ok(state)
}

pub fn expectation_z(state: &Statevector, wire: usize) -> Result<f64> {
    state.expectation_z(wire)
}

pub fn fidelity(a: &Statevector, b: &Statevector) -> Result<f64> {
    a.fidelity(b)
}

pub(crate) fn check_wire_count(n_wires: usize) -> Result<()> {
    if n_wires == 0 || n_wires > MAX_WIRES {
        return Err(Error::TooManyWires(n_wires));
    }
    Ok(())
}

fn rx(theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let c = Complex64::new(c, 0.0);
    let mis = Complex64::new(0.0, -s);
    [[c, mis], [mis, c]]
}

fn ry(theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

fn rz(theta: f64) -> Matrix2 {
    let half = theta / 2.0;
    [
        [Complex64::from_polar(1.0, -half), ZERO],
        [ZERO, Complex64::from_polar(1.0, half)],
    ]
}

fn matmul(a: Matrix2, b: Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use super::*;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(Statevector::zero(1).unwrap(), &Gate::H { wire: 0 }).unwrap();
        assert!(close(s.amplitudes()[0], FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitudes()[1], FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn ry_pi_flips() {
        let s = apply_gate(Statevector::zero(1).unwrap(), &Gate::Ry { wire: 0, angle: PI }).unwrap();
        assert!(close(s.amplitudes()[0], 0.0, 0.0));
        assert!(close(s.amplitudes()[1], 1.0, 0.0));
    }

    #[test]
    fn bell_state() {
        let mut s = Statevector::zero(2).unwrap();
        s.apply(&Gate::H { wire: 0 }).unwrap();
        s.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        let a = s.amplitudes();
        assert!(close(a[0], FRAC_1_SQRT_2, 0.0));
        assert!(close(a[1], 0.0, 0.0));
        assert!(close(a[2], 0.0, 0.0));
        assert!(close(a[3], FRAC_1_SQRT_2, 0.0));
        assert!(s.expectation_z(0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn wire_zero_is_most_significant() {
        let mut s = Statevector::zero(3).unwrap();
        s.apply(&Gate::Ry { wire: 0, angle: PI }).unwrap();
        assert!(close(s.amplitudes()[0b100], 1.0, 0.0));
    }

    #[test]
    fn expectation_of_ry() {
        for theta in [0.0, PI / 4.0, PI / 2.0, PI] {
            let s = apply_gate(Statevector::zero(1).unwrap(), &Gate::Ry { wire: 0, angle: theta }).unwrap();
            assert!((s.expectation_z(0).unwrap() - theta.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_basics() {
        let zero = Statevector::zero(1).unwrap();
        let one = apply_gate(zero.clone(), &Gate::Ry { wire: 0, angle: PI }).unwrap();
        assert!((zero.fidelity(&zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(zero.fidelity(&one).unwrap() < 1e-15);
        assert!(matches!(
            zero.fidelity(&Statevector::zero(2).unwrap()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn errors() {
        let s = Statevector::zero(2).unwrap();
        assert!(matches!(
            apply_gate(s.clone(), &Gate::H { wire: 2 }),
            Err(Error::WireOutOfRange { wire: 2, n_wires: 2 })
        ));
        assert!(matches!(
            apply_gate(s.clone(), &Gate::Cnot { control: 1, target: 1 }),
            Err(Error::RepeatedWire(_))
        ));
        assert!(s.expectation_z(5).is_err());
        assert!(matches!(Statevector::zero(17), Err(Error::TooManyWires(17))));
        assert!(Statevector::zero(16).is_ok());
        assert!(Statevector::from_amplitudes(vec![ONE; 3]).is_err());
        assert!(Statevector::from_amplitudes(vec![ONE; 2]).is_err());
    }
}
