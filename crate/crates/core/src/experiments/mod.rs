//! Reconstructions of concrete networks: a self-oscillating weight, a
//! travelling connectivity wave, an embedded DFA and a GRU cell built from
//! sigmoid, linear and bilinear neurons.

pub mod dfa;
pub mod gru;
pub mod oscillation;
pub mod wave;

use crate::dense::DenseMatrix;

pub use dfa::{build_dfa, random_dfa, run_dfa, simulate_dfa, DfaError, DfaNetwork, DfaSpec};
pub use gru::{
    build_gru, gru_candidate, gru_reference, read_h, run_gru_dmm, GruParams, GRU_LATENCY,
};
pub use oscillation::build_oscillation;
pub use wave::{build_wave, wave_columns, WaveError};

/// Dimension of the space of all linear operators on `M × N` matrices
/// (`M³·N³`, counting input and output streams) and the number of weights a
/// network matrix actually uses (`M·N`). `None` if `m` or `n` is zero or the
/// count overflows.
pub fn operator_space_dims(m: u64, n: u64) -> Option<(u64, u64)> {
    if m == 0 || n == 0 {
        return None;
    }
    let mn = m.checked_mul(n)?;
    let full = mn.checked_mul(mn)?.checked_mul(mn)?;
    Some((full, mn))
}

/// Nonzero entries of row `i` as `(column, value)`.
pub fn row_support(w: &DenseMatrix, i: usize) -> Vec<(usize, f64)> {
    w.row(i)
        .iter()
        .enumerate()
        .filter(|(_, x)| **x != 0.0)
        .map(|(j, x)| (j, *x))
        .collect()
}
