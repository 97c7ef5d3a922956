use nalgebra::DMatrix;

use crate::error::Result;
use crate::exec::Exec;
use crate::qsim::{run_circuit, CallCounter, CircuitSpec};

/// A circuit with frozen weights used as a quantum feature map.
#[derive(Debug, Clone, Copy)]
pub struct FeatureMap<'a> {
    pub circuit: &'a CircuitSpec,
    pub weights: &'a [f64],
}

impl FeatureMap<'_> {
    /// `|⟨φ(a)|φ(b)⟩|²`, executing both circuits: two device calls.
    pub fn kernel(&self, a: &[f64], b: &[f64], counter: &CallCounter) -> Result<f64> {
        let sa = run_circuit(self.circuit, self.weights, a, counter)?;
        let sb = run_circuit(self.circuit, self.weights, b, counter)?;
        sa.fidelity(&sb)
    }
}

/// Kernel between two sample sets. When `x1` and `x2` are the same slice
/// the symmetric training path is taken.
pub fn kernel_matrix(
    map: FeatureMap<'_>,
    x1: &[Vec<f64>],
    x2: &[Vec<f64>],
    counter: &CallCounter,
    exec: Exec,
) -> Result<DMatrix<f64>> {
    if std::ptr::eq(x1, x2) {
        return training_kernel(map, x1, counter, exec);
    }
    let (n, m) = (x1.len(), x2.len());
    let entries = exec
        .map_range(n * m, |k| map.kernel(&x1[k / m], &x2[k % m], counter))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(DMatrix::from_row_slice(n, m, &entries))
}

/// Symmetric Gram matrix of `x`. Only the strict upper triangle is executed
/// (`N(N−1)/2` pairs); the diagonal is 1 and the lower triangle is a copy.
pub fn training_kernel(map: FeatureMap<'_>, x: &[Vec<f64>], counter: &CallCounter, exec: Exec) -> Result<DMatrix<f64>> {
    let n = x.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let values = exec
        .map(&pairs, |&(i, j)| map.kernel(&x[i], &x[j], counter))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let mut k = DMatrix::identity(n, n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        k[(i, j)] = v;
        k[(j, i)] = v;
    }
    Ok(k)
}
