//! A scalar GRU cell assembled from sigmoid, tanh, identity and hadamard
//! neurons. Every signal is a scalar lift (a dense matrix with all entries
//! equal), and the network matrix is fixed: the Self update row is empty.
//!
//! One GRU step takes five up movements. With `h` holding `h_{t-1}` and the
//! inport holding `x_t` at time `τ`:
//!
//! | time  | computed                                               |
//! |-------|--------------------------------------------------------|
//! | `τ+1` | `z = σ(w_z x + u_z h + b_z)`, `r = σ(..)`, delays `hd1`, `xd1` |
//! | `τ+2` | `rh = r ⊙ hd1`, delays `xd2`, `hd2`, `zd2`              |
//! | `τ+3` | `ht = tanh(w_h xd2 + u_h rh + b_h)`, delays `hd3`, `zd3` |
//! | `τ+4` | `d = zd3 ⊙ (ht − hd3)`, delay `hd4`                     |
//! | `τ+5` | `h = hd4 + d`                                           |
//!
//! Every path from `h` or `x` back to `h` has length exactly five, so the
//! pipeline slots never mix. `x_t` is fed at `τ = 5(t−1) + 1` and `h_t` is read
//! at `τ = 5t + 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::engine::{EngineError, Mode, NetworkSpec, NetworkState, NeuronDecl, Params, Registry};
use crate::matrix::{Matrix, Shape};
use crate::neurons::{sigmoid, CONST, HADAMARD, IDENTITY, INPORT, SELF2, SIGMOID, TANH};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GruParams {
    pub w_z: f64,
    pub u_z: f64,
    pub b_z: f64,
    pub w_r: f64,
    pub u_r: f64,
    pub b_r: f64,
    pub w_h: f64,
    pub u_h: f64,
    pub b_h: f64,
    pub h0: f64,
}

impl GruParams {
    /// Every field uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> GruParams {
        let mut u = || rng.gen_range(-1.0..1.0);
        GruParams {
            w_z: u(),
            u_z: u(),
            b_z: u(),
            w_r: u(),
            u_r: u(),
            b_r: u(),
            w_h: u(),
            u_h: u(),
            b_h: u(),
            h0: u(),
        }
    }
}

/// Pipeline length of one GRU step.
pub const GRU_LATENCY: u64 = 5;

const ROWS: usize = 18;
const COLS: usize = 17;
const SHAPE: Shape = Shape::Dense {
    rows: ROWS,
    cols: COLS,
};

/// Column of the `h` neuron's output.
pub const H_COL: usize = 16;

/// Candidate state `h̃`.
pub fn gru_candidate(p: &GruParams, x: f64, h: f64) -> f64 {
    let r = sigmoid(p.w_r * x + p.u_r * h + p.b_r);
    (p.w_h * x + p.u_h * (r * h) + p.b_h).tanh()
}

/// Closed-form GRU: returns `h_1 ..= h_T`.
pub fn gru_reference(p: &GruParams, xs: &[f64]) -> Vec<f64> {
    let mut h = p.h0;
    xs.iter()
        .map(|&x| {
            let z = sigmoid(p.w_z * x + p.u_z * h + p.b_z);
            let cand = gru_candidate(p, x, h);
            h = (1.0 - z) * h + z * cand;
            h
        })
        .collect()
}

/// The GRU network with `xs` queued on the input port.
pub fn build_gru(p: &GruParams, xs: &[f64]) -> NetworkSpec {
    let mut spec = NetworkSpec::new(Mode::Lightweight {
        rows: ROWS,
        cols: COLS,
    });
    let mut w = DenseMatrix::zeros(ROWS, COLS);
    let mut seq = vec![Matrix::zero(SHAPE); xs.len().saturating_sub(1) * GRU_LATENCY as usize + 1];
    for (t, x) in xs.iter().enumerate() {
        seq[t * GRU_LATENCY as usize] = Matrix::scalar(SHAPE, *x);
    }
    if xs.is_empty() {
        seq.clear();
    }

    // (name, type, rows, col, params)
    let neurons: [(&str, &str, Vec<usize>, usize, Params); 17] = [
        ("self", SELF2, vec![0, 1], 0, Params::none()),
        ("x", INPORT, vec![], 1, Params::sequence(seq)),
        (
            "one",
            CONST,
            vec![],
            2,
            Params::matrix(Matrix::scalar(SHAPE, 1.0)),
        ),
        ("z", SIGMOID, vec![2], 3, Params::none()),
        ("r", SIGMOID, vec![3], 4, Params::none()),
        ("hd1", IDENTITY, vec![4], 5, Params::none()),
        ("xd1", IDENTITY, vec![5], 6, Params::none()),
        ("rh", HADAMARD, vec![6, 7], 7, Params::none()),
        ("xd2", IDENTITY, vec![8], 8, Params::none()),
        ("hd2", IDENTITY, vec![9], 9, Params::none()),
        ("zd2", IDENTITY, vec![10], 10, Params::none()),
        ("ht", TANH, vec![11], 11, Params::none()),
        ("hd3", IDENTITY, vec![12], 12, Params::none()),
        ("zd3", IDENTITY, vec![13], 13, Params::none()),
        ("d", HADAMARD, vec![14, 15], 14, Params::none()),
        ("hd4", IDENTITY, vec![16], 15, Params::none()),
        ("h", IDENTITY, vec![17], H_COL, Params::none()),
    ];
    for (name, ty, rows, col, params) in neurons {
        spec.neurons
            .push(NeuronDecl::placed(name, ty, params, rows, vec![col]));
    }

    let (x, one, z, r, hd1, xd1, rh, xd2, hd2, zd2, ht, hd3, zd3, d, hd4, h) =
        (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, H_COL);
    let weights = [
        (0, 0, 1.0),
        (2, x, p.w_z),
        (2, h, p.u_z),
        (2, one, p.b_z),
        (3, x, p.w_r),
        (3, h, p.u_r),
        (3, one, p.b_r),
        (4, h, 1.0),
        (5, x, 1.0),
        (6, r, 1.0),
        (7, hd1, 1.0),
        (8, xd1, 1.0),
        (9, hd1, 1.0),
        (10, z, 1.0),
        (11, xd2, p.w_h),
        (11, rh, p.u_h),
        (11, one, p.b_h),
        (12, hd2, 1.0),
        (13, zd2, 1.0),
        (14, zd3, 1.0),
        (15, ht, 1.0),
        (15, hd3, -1.0),
        (16, hd3, 1.0),
        (17, hd4, 1.0),
        (17, d, 1.0),
    ];
    for (i, j, v) in weights {
        w.set(i, j, v);
    }
    spec.self_neuron = Some("self".into());
    spec.initial_matrix = Matrix::Dense(w);
    spec.initial_outputs
        .insert(hd4.to_string(), Matrix::scalar(SHAPE, p.h0));
    spec
}

/// Runs the GRU network and returns `h_1 ..= h_T`.
pub fn run_gru_dmm(
    p: &GruParams,
    xs: &[f64],
    registry: &Registry,
) -> Result<Vec<f64>, EngineError> {
    let spec = build_gru(p, xs);
    let mut net = NetworkState::build(&spec, registry)?;
    net.step()?;
    let mut out = Vec::with_capacity(xs.len());
    for _ in xs {
        for _ in 0..GRU_LATENCY {
            net.step()?;
        }
        out.push(read_h(&net)?);
    }
    Ok(out)
}

/// Scalar value of the `h` neuron's output.
pub fn read_h(net: &NetworkState) -> Result<f64, EngineError> {
    net.output(&H_COL.to_string())
        .and_then(Matrix::constant_value)
        .ok_or_else(|| EngineError::Internal("h is not a scalar lift".into()))
}
