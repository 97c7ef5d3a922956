//! Dense-matrix reference simulator, built from textbook 2×2 gate matrices
//! and Kronecker products. Shares no code with the crate's statevector.

#![allow(dead_code)]

use aqml_core::qsim::{Gate, GateKind};
use aqml_core::rng::PortableRng;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

fn m2(a: C, b: C, c: C, d: C) -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

fn rx(t: f64) -> DMatrix<C> {
    let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
    m2(C::new(c, 0.0), C::new(0.0, -s), C::new(0.0, -s), C::new(c, 0.0))
}

fn ry(t: f64) -> DMatrix<C> {
    let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
    m2(C::new(c, 0.0), C::new(-s, 0.0), C::new(s, 0.0), C::new(c, 0.0))
}

fn rz(t: f64) -> DMatrix<C> {
    let z = C::new(0.0, 0.0);
    m2(C::from_polar(1.0, -t / 2.0), z, z, C::from_polar(1.0, t / 2.0))
}

fn one_wire(op: DMatrix<C>, wire: usize, n: usize) -> DMatrix<C> {
    let mut full = DMatrix::from_element(1, 1, C::new(1.0, 0.0));
    for w in 0..n {
        let factor = if w == wire { op.clone() } else { DMatrix::identity(2, 2) };
        full = full.kronecker(&factor);
    }
    full
}

fn cnot(control: usize, target: usize, n: usize) -> DMatrix<C> {
    let dim = 1 << n;
    let bit = |w: usize| 1usize << (n - 1 - w);
    let mut m = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let out = if b & bit(control) != 0 { b ^ bit(target) } else { b };
        m[(out, b)] = C::new(1.0, 0.0);
    }
    m
}

pub fn gate_matrix(gate: &Gate, n: usize) -> DMatrix<C> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match *gate {
        Gate::Rx { wire, angle } => one_wire(rx(angle), wire, n),
        Gate::Ry { wire, angle } => one_wire(ry(angle), wire, n),
        Gate::Rz { wire, angle } => one_wire(rz(angle), wire, n),
        Gate::Rot {
            wire,
            angles: [phi, theta, omega],
        } => one_wire(rz(omega) * ry(theta) * rz(phi), wire, n),
        Gate::H { wire } => one_wire(
            m2(C::new(r, 0.0), C::new(r, 0.0), C::new(r, 0.0), C::new(-r, 0.0)),
            wire,
            n,
        ),
        Gate::Z { wire } => one_wire(
            m2(C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(-1.0, 0.0)),
            wire,
            n,
        ),
        Gate::Cnot { control, target } => cnot(control, target, n),
    }
}

/// Apply `gates` in order to `initial` by full matrix products.
pub fn oracle_state(initial: &[C], gates: &[Gate], n: usize) -> DVector<C> {
    let mut u = DMatrix::<C>::identity(1 << n, 1 << n);
    for g in gates {
        u = gate_matrix(g, n) * u;
    }
    u * DVector::from_column_slice(initial)
}

pub fn ground(n: usize) -> Vec<C> {
    let mut v = vec![C::new(0.0, 0.0); 1 << n];
    v[0] = C::new(1.0, 0.0);
    v
}

/// `⟨Z_wire⟩` from probabilities, wire 0 being the most significant bit.
pub fn oracle_z(state: &DVector<C>, wire: usize, n: usize) -> f64 {
    state
        .iter()
        .enumerate()
        .map(|(b, a)| {
            let sign = if b & (1 << (n - 1 - wire)) == 0 { 1.0 } else { -1.0 };
            sign * a.norm_sqr()
        })
        .sum()
}

pub fn random_gate(rng: &mut PortableRng, n: usize) -> Gate {
    use std::f64::consts::PI;
    let kinds = [
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Rot,
        GateKind::H,
        GateKind::Z,
        GateKind::Cnot,
    ];
    let kind = kinds[rng.index(if n > 1 { 7 } else { 6 })];
    let wire = rng.index(n);
    let wires = if kind == GateKind::Cnot {
        vec![wire, (wire + 1 + rng.index(n - 1)) % n]
    } else {
        vec![wire]
    };
    let angles: Vec<f64> = (0..kind.n_angles()).map(|_| rng.uniform(-PI, PI)).collect();
    Gate::new(kind, &wires, &angles).unwrap()
}

pub fn random_gates(rng: &mut PortableRng, n: usize, len: usize) -> Vec<Gate> {
    (0..len).map(|_| random_gate(rng, n)).collect()
}
