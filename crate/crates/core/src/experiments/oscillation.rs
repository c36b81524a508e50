use std::collections::BTreeMap;

use crate::dense::DenseMatrix;
use crate::engine::{Mode, NetworkSpec, NeuronDecl, Params};
use crate::matrix::Matrix;
use crate::neurons::{CONST, SELF2};

/// Two-column network whose weight `W[1][1]` flips sign every step.
///
/// Column 0 is Self, column 1 a constant neuron emitting `-2` at `(1, 1)`.
/// Row 0 of `W` is clamped to `(1, 0)`.
pub fn build_oscillation() -> NetworkSpec {
    let mut spec = NetworkSpec::new(Mode::Lightweight { rows: 2, cols: 2 });
    let mut y1 = DenseMatrix::zeros(2, 2);
    y1.set(1, 1, -2.0);
    spec.neurons = vec![
        NeuronDecl::placed("self", SELF2, Params::none(), vec![0, 1], vec![0]),
        NeuronDecl::placed(
            "y1",
            CONST,
            Params::matrix(Matrix::Dense(y1)),
            vec![],
            vec![1],
        ),
    ];
    spec.self_neuron = Some("self".into());
    let mut w = DenseMatrix::zeros(2, 2);
    w.set(0, 0, 1.0);
    w.set(1, 1, 1.0);
    spec.initial_matrix = Matrix::Dense(w);
    spec.enforced_rows
        .insert("0".into(), BTreeMap::from([("0".to_string(), 1.0)]));
    spec
}
