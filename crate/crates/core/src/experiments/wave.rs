use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::engine::{Mode, NetworkSpec, NeuronDecl, Params};
use crate::matrix::Matrix;
use crate::neurons::{CONST, SELF2};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WaveError {
    #[error("bad wave columns: {0}")]
    BadColumns(String),
}

/// Default columns `j_k = k + 1` for `k = 1..=n`.
pub fn wave_columns(n: usize) -> Vec<usize> {
    (1..=n).map(|k| k + 1).collect()
}

/// Network whose row 1 holds a single 1 that moves `j_1 → j_2 → … → j_n → j_1`.
///
/// The constant neuron at column `j_k` emits `-1` at `(1, j_k)` and `+1` at
/// `(1, j_{k+1})`; row 1 of `W` is Self's update row, so it always selects
/// exactly the constant that moves the 1 one place on.
pub fn build_wave(columns: &[usize]) -> Result<NetworkSpec, WaveError> {
    let n = columns.len();
    if n < 2 {
        return Err(WaveError::BadColumns(format!(
            "need at least 2 columns, got {n}"
        )));
    }
    if columns.contains(&0) {
        return Err(WaveError::BadColumns("column 0 is Self's output".into()));
    }
    if columns.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(WaveError::BadColumns("columns must be distinct".into()));
    }
    let cols = columns.iter().max().unwrap() + 1;
    let mut spec = NetworkSpec::new(Mode::Lightweight { rows: 2, cols });
    spec.neurons.push(NeuronDecl::placed(
        "self",
        SELF2,
        Params::none(),
        vec![0, 1],
        vec![0],
    ));
    for (k, &j) in columns.iter().enumerate() {
        let next = columns[(k + 1) % n];
        let mut y = DenseMatrix::zeros(2, cols);
        y.set(1, j, -1.0);
        y.set(1, next, 1.0);
        spec.neurons.push(NeuronDecl::placed(
            format!("y{}", k + 1),
            CONST,
            Params::matrix(Matrix::Dense(y)),
            vec![],
            vec![j],
        ));
    }
    spec.self_neuron = Some("self".into());
    let mut w = DenseMatrix::zeros(2, cols);
    w.set(0, 0, 1.0);
    w.set(1, columns[0], 1.0);
    spec.initial_matrix = Matrix::Dense(w);
    spec.enforced_rows
        .insert("0".into(), BTreeMap::from([("0".to_string(), 1.0)]));
    Ok(spec)
}
