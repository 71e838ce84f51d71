//! Fixtures shared by the benchmarks.

use tropsvm_core::experiments::gen_gaussian_dataset;
use tropsvm_core::{LabeledDataset, LinearProgram};

/// Two Gaussian classes with well separated means.
pub fn gaussian_classes(d: usize, per_class: usize, seed: u64) -> LabeledDataset {
    gen_gaussian_dataset(d, per_class, 5.0, seed).expect("valid parameters").data
}

/// A bounded feasible LP: maximize the sum of `n` variables inside a box cut
/// by `m` deterministic pseudo-random rows with positive coefficients.
pub fn dense_lp(n: usize, m: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(vec![1.0; n]).expect("non-empty objective");
    let mut state = 0x2545_f491_4f6c_dd1du64;
    for _ in 0..m {
        let row: Vec<f64> = (0..n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                1.0 + (state % 1000) as f64 / 100.0
            })
            .collect();
        lp.add_constraint(&row, 100.0).expect("row length matches");
    }
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = -1.0;
        lp.add_constraint(&row, 10.0).expect("row length matches");
    }
    lp
}
