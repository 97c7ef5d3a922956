//! Small deterministic datasets for demos, tests and benchmarks.

use crate::data::Dataset;
use crate::rng::PortableRng;

/// Two Gaussian-ish blobs in the angle range, labelled 0 and 1, alternating.
/// Class 0 is centred at `(0.6, 0.6)`, class 1 at `(2.5, 2.5)`; spread is
/// uniform in `±0.5` per coordinate, so the classes are linearly separable.
pub fn separable_blobs(n: usize, seed: u64) -> Dataset {
    let mut rng = PortableRng::derive(seed, 0xb10b);
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = (i % 2) as f64;
        let centre = if label == 0.0 { 0.6 } else { 2.5 };
        features.push(vec![centre + rng.uniform(-0.5, 0.5), centre + rng.uniform(-0.5, 0.5)]);
        labels.push(label);
    }
    Dataset::new(features, Some(labels)).expect("generated data is well formed")
}

/// `side × side` bars-and-stripes images flattened row-major, without
/// duplicates: `2^(side+1) − 2` patterns.
pub fn bars_and_stripes(side: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mask in 0..(1u32 << side) {
        let rows: Vec<f64> = (0..side * side).map(|k| ((mask >> (k / side)) & 1) as f64).collect();
        let cols: Vec<f64> = (0..side * side).map(|k| ((mask >> (k % side)) & 1) as f64).collect();
        for pattern in [rows, cols] {
            if !out.contains(&pattern) {
                out.push(pattern);
            }
        }
    }
    out
}

/// Two well separated groups of `n_per` points each in `dim` dimensions.
pub fn two_clusters(n_per: usize, dim: usize, seed: u64) -> Dataset {
    let mut rng = PortableRng::derive(seed, 0xc1);
    let mut features = Vec::with_capacity(2 * n_per);
    for i in 0..2 * n_per {
        let centre = if i % 2 == 0 { 0.0 } else { 1.0 };
        features.push((0..dim).map(|_| centre + rng.uniform(-0.1, 0.1)).collect());
    }
    Dataset::new(features, None).expect("generated data is well formed")
}
