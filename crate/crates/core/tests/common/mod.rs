//! Random networks over the built-in catalog.

#![allow(dead_code)]

use std::collections::BTreeMap;

use dmm_core::dense::DenseMatrix;
use dmm_core::engine::{
    Mode, NetworkSpec, NeuronDecl, OverflowPolicy, Params, WatchKey, WatchTarget,
};
use dmm_core::fd_matrix::{FdMatrix, FdVector};
use dmm_core::index::{format_index, IndexName, PortKind};
use dmm_core::matrix::{Key, Matrix, Shape};
use dmm_core::neurons::{ACC2, CONST, HADAMARD, IDENTITY, INPORT, RELU, SELF2, SIGMOID, TANH};
use rand::seq::SliceRandom;
use rand::Rng;

const TYPES: [(&str, usize); 8] = [
    (IDENTITY, 1),
    (CONST, 0),
    (ACC2, 2),
    (HADAMARD, 2),
    (RELU, 1),
    (SIGMOID, 1),
    (TANH, 1),
    (INPORT, 0),
];

fn weight<R: Rng>(rng: &mut R) -> f64 {
    *[-1.0, -0.5, 0.25, 0.5, 1.0, 2.0].choose(rng).unwrap()
}

fn random_dense<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> DenseMatrix {
    let mut d = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                d.set(i, j, rng.gen_range(-1.0..1.0));
            }
        }
    }
    d
}

/// A lightweight network: Self on rows 0, 1 and column 0, two to six other
/// neurons, a few unused rows and columns, random sparse weights. Row 0 is
/// clamped to a unit weight on Self's output, so Self's `x` row constraint
/// holds at every step.
pub fn random_lightweight<R: Rng>(rng: &mut R) -> NetworkSpec {
    let count = rng.gen_range(2..=6);
    let chosen: Vec<(&str, usize)> = (0..count).map(|_| *TYPES.choose(rng).unwrap()).collect();
    let used_rows = 2 + chosen.iter().map(|(_, m)| m).sum::<usize>();
    let used_cols = 1 + count;
    let rows = used_rows + rng.gen_range(0..=2);
    let cols = used_cols + rng.gen_range(0..=2);
    let shape = Shape::Dense { rows, cols };

    let mut spec = NetworkSpec::new(Mode::Lightweight { rows, cols });
    spec.neurons.push(NeuronDecl::placed(
        "self",
        SELF2,
        Params::none(),
        vec![0, 1],
        vec![0],
    ));
    let mut next_row = 2;
    for (k, (ty, m)) in chosen.iter().enumerate() {
        let params = match *ty {
            CONST => Params::matrix(Matrix::Dense(random_dense(rng, rows, cols, 0.3)).scale(0.5)),
            INPORT => Params::sequence(
                (0..rng.gen_range(0..8))
                    .map(|_| Matrix::Dense(random_dense(rng, rows, cols, 0.5)))
                    .collect(),
            ),
            _ => Params::none(),
        };
        spec.neurons.push(NeuronDecl::placed(
            format!("n{k}"),
            *ty,
            params,
            (next_row..next_row + m).collect(),
            vec![k + 1],
        ));
        next_row += m;
        if rng.gen_bool(0.3) && *ty != CONST {
            spec.initial_outputs.insert(
                (k + 1).to_string(),
                Matrix::Dense(random_dense(rng, rows, cols, 0.5)),
            );
        }
    }

    let mut w = DenseMatrix::zeros(rows, cols);
    w.set(0, 0, 1.0);
    for i in 1..used_rows {
        for j in 0..used_cols {
            if rng.gen_bool(0.25) {
                w.set(i, j, weight(rng));
            }
        }
    }
    // Make sure Self's update row draws on something.
    w.set(1, rng.gen_range(1..used_cols), weight(rng));
    spec.self_neuron = Some("self".into());
    spec.initial_matrix = Matrix::Dense(w);
    spec.enforced_rows
        .insert("0".into(), BTreeMap::from([("0".to_string(), 1.0)]));
    debug_assert_eq!(spec.shape(), shape);
    spec
}

fn port(ty: &str, kind: PortKind, name: &str) -> Key {
    format_index(&IndexName {
        type_name: ty.to_string(),
        kind,
        simple_name: name.to_string(),
    })
    .unwrap()
}

/// A countable network over port names with finitely supported constants,
/// occasional scalar-lift constants (which drive Self to infinite support
/// and hence to a reset) and random sparse weights.
pub fn random_countable<R: Rng>(rng: &mut R) -> NetworkSpec {
    let count = rng.gen_range(2..=5);
    let chosen: Vec<(&str, usize)> = (0..count).map(|_| *TYPES.choose(rng).unwrap()).collect();
    let mut spec = NetworkSpec::new(Mode::Countable);
    spec.neurons
        .push(NeuronDecl::named("self", SELF2, Params::none()));
    let self_x = port(SELF2, PortKind::Input(1), "self");
    let self_dx = port(SELF2, PortKind::Input(2), "self");
    let self_out = port(SELF2, PortKind::Output(1), "self");
    let mut rows = vec![self_dx.clone()];
    let mut cols = vec![self_out.clone()];
    for (k, (ty, m)) in chosen.iter().enumerate() {
        let name = format!("n{k}");
        rows.extend((1..=*m as u32).map(|i| port(ty, PortKind::Input(i), &name)));
        cols.push(port(ty, PortKind::Output(1), &name));
    }
    let random_fd = |rng: &mut R| -> Matrix {
        if rng.gen_bool(0.15) {
            return Matrix::Fd(FdMatrix::lift_scalar(rng.gen_range(-1.0..1.0)));
        }
        let mut t = Vec::new();
        for _ in 0..rng.gen_range(0..5) {
            let r = if rng.gen_bool(0.3) {
                self_x.clone()
            } else {
                rows.choose(rng).unwrap().clone()
            };
            t.push((
                r,
                cols.choose(rng).unwrap().clone(),
                rng.gen_range(-0.5..0.5),
            ));
        }
        if rng.gen_bool(0.2) {
            let v = FdVector::new(0.0, [(cols.choose(rng).unwrap().clone(), 1.0)]);
            let u = FdVector::new(rng.gen_range(-0.5..0.5), [(rows[0].clone(), 0.5)]);
            return Matrix::Fd(FdMatrix::from_triplets(t).add(&FdMatrix::outer(u, v)));
        }
        Matrix::Fd(FdMatrix::from_triplets(t))
    };
    for (k, (ty, _)) in chosen.iter().enumerate() {
        let params = match *ty {
            CONST => Params::matrix(random_fd(rng)),
            INPORT => Params::sequence((0..rng.gen_range(0..6)).map(|_| random_fd(rng)).collect()),
            _ => Params::none(),
        };
        spec.neurons
            .push(NeuronDecl::named(format!("n{k}"), *ty, params));
    }
    let mut triplets = vec![(self_x.clone(), self_out.clone(), 1.0)];
    for r in &rows {
        for c in &cols {
            if rng.gen_bool(0.3) {
                triplets.push((r.clone(), c.clone(), weight(rng)));
            }
        }
    }
    spec.self_neuron = Some("self".into());
    spec.initial_matrix = Matrix::Fd(FdMatrix::from_triplets(triplets));
    spec.enforced_rows
        .insert(self_x, BTreeMap::from([(self_out, 1.0)]));
    spec.overflow_policy = OverflowPolicy::ResetToZero;
    spec
}

pub fn random_network<R: Rng>(rng: &mut R) -> NetworkSpec {
    if rng.gen_bool(0.7) {
        random_lightweight(rng)
    } else {
        random_countable(rng)
    }
}

/// Every cell of a lightweight network matrix (every initially nonzero cell
/// of a countable one) and every output.
pub fn watch_all(spec: &NetworkSpec, outputs: &[&Key]) -> Vec<WatchKey> {
    let mut keys = Vec::new();
    match spec.mode {
        Mode::Lightweight { rows, cols } => {
            for i in 0..rows {
                for j in 0..cols {
                    keys.push(WatchKey {
                        label: format!("Y0[{i}][{j}]"),
                        target: WatchTarget::Cell {
                            row: i.to_string(),
                            col: j.to_string(),
                        },
                    });
                }
            }
        }
        Mode::Countable => {
            for (r, c, _) in spec.initial_matrix.triplets().unwrap() {
                keys.push(WatchKey {
                    label: format!("cell:{r},{c}"),
                    target: WatchTarget::Cell { row: r, col: c },
                });
            }
        }
    }
    for o in outputs {
        keys.push(WatchKey {
            label: format!("out:{o}"),
            target: WatchTarget::Output((*o).clone()),
        });
    }
    keys
}
