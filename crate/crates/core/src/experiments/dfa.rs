//! A deterministic finite automaton driven through the network matrix.
//!
//! Layout for `S` states and `K` symbols (lightweight mode):
//!
//! | columns                   | neuron                                     |
//! |---------------------------|--------------------------------------------|
//! | `0`                       | Self                                       |
//! | `1 ..= S`                 | `q<s>`: identity, sums the gated updates of state `s` |
//! | next `K`                  | `sym<a>`: inport, all-ones while symbol `a` is read |
//! | next `S·K`                | `u<s>_<a>`: constant update for `(s, a)`   |
//! | next `S·K`                | `g<s>_<a>`: hadamard of `sym<a>` and `u<s>_<a>` |
//!
//! Rows are `0` (Self's `x`), `1` (Self's update), then two rows per gate and
//! one per state sum. The current state is the column of the single 1 in row
//! 1 of `W`, so Self's update input is exactly the sum for the current state.
//! Update `u<s>_<a>` moves that 1 from `q<s>` to `q<δ(s, a)>`.
//!
//! Symbol `i` (0-based) is emitted at `t = i + 1` and reaches `W` at
//! `t = i + 4`; the state after `k` symbols is read at `t = k + 3`.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::engine::{EngineError, Mode, NetworkSpec, NetworkState, NeuronDecl, Params, Registry};
use crate::experiments::row_support;
use crate::matrix::Matrix;
use crate::neurons::{CONST, HADAMARD, IDENTITY, INPORT, SELF2};

/// Largest row or column count a DFA network may use.
pub const DFA_MAX_DIM: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfaSpec {
    pub num_states: usize,
    pub num_symbols: usize,
    /// `transition[s][a]` is the successor of state `s` on symbol `a`.
    pub transition: Vec<Vec<usize>>,
    pub start: usize,
}

#[derive(Debug, Error)]
pub enum DfaError {
    #[error("invalid DFA: {0}")]
    Invalid(String),
    #[error("DFA needs a {rows}x{cols} network matrix, limit is {limit}")]
    CapacityExceeded {
        rows: usize,
        cols: usize,
        limit: usize,
    },
    #[error("symbol {0} is not in the alphabet")]
    BadSymbol(usize),
    #[error("cannot decode state: row 1 is {0:?}")]
    Decode(Vec<(usize, f64)>),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl DfaSpec {
    pub fn validate(&self) -> Result<(), DfaError> {
        if self.num_states == 0 || self.num_symbols == 0 {
            return Err(DfaError::Invalid(
                "need at least one state and one symbol".into(),
            ));
        }
        if self.start >= self.num_states {
            return Err(DfaError::Invalid(format!(
                "start state {} out of range",
                self.start
            )));
        }
        if self.transition.len() != self.num_states
            || self
                .transition
                .iter()
                .any(|row| row.len() != self.num_symbols)
        {
            return Err(DfaError::Invalid(
                "transition table must be states × symbols".into(),
            ));
        }
        if let Some(t) = self
            .transition
            .iter()
            .flatten()
            .find(|t| **t >= self.num_states)
        {
            return Err(DfaError::Invalid(format!(
                "transition target {t} out of range"
            )));
        }
        Ok(())
    }

    /// Two states; symbol 0 flips, symbol 1 keeps.
    pub fn parity() -> DfaSpec {
        DfaSpec {
            num_states: 2,
            num_symbols: 2,
            transition: vec![vec![1, 0], vec![0, 1]],
            start: 0,
        }
    }
}

/// Start state followed by the state after each symbol.
pub fn simulate_dfa(d: &DfaSpec, input: &[usize]) -> Vec<usize> {
    let mut s = d.start;
    let mut out = vec![s];
    for &a in input {
        s = d.transition[s][a];
        out.push(s);
    }
    out
}

pub fn random_dfa<R: Rng + ?Sized>(rng: &mut R, max_states: usize, max_symbols: usize) -> DfaSpec {
    let num_states = rng.gen_range(1..=max_states);
    let num_symbols = rng.gen_range(1..=max_symbols);
    DfaSpec {
        num_states,
        num_symbols,
        transition: (0..num_states)
            .map(|_| {
                (0..num_symbols)
                    .map(|_| rng.gen_range(0..num_states))
                    .collect()
            })
            .collect(),
        start: rng.gen_range(0..num_states),
    }
}

#[derive(Clone, Debug)]
pub struct DfaNetwork {
    pub dfa: DfaSpec,
    /// Network without input; see [`DfaNetwork::with_input`].
    pub spec: NetworkSpec,
}

impl DfaNetwork {
    fn symbol_name(a: usize) -> String {
        format!("sym{a}")
    }

    /// The network with `input` queued on the symbol ports.
    pub fn with_input(&self, input: &[usize]) -> Result<NetworkSpec, DfaError> {
        if let Some(a) = input.iter().find(|a| **a >= self.dfa.num_symbols) {
            return Err(DfaError::BadSymbol(*a));
        }
        let shape = self.spec.shape();
        let mut spec = self.spec.clone();
        for a in 0..self.dfa.num_symbols {
            let name = Self::symbol_name(a);
            let decl = spec
                .neurons
                .iter_mut()
                .find(|n| n.name == name)
                .expect("symbol port");
            decl.params = Params::sequence(
                input
                    .iter()
                    .map(|b| Matrix::scalar(shape, if *b == a { 1.0 } else { 0.0 }))
                    .collect(),
            );
        }
        Ok(spec)
    }

    /// Current state encoded in the network matrix.
    pub fn decode(&self, w: &Matrix) -> Result<usize, DfaError> {
        let dense = w.as_dense().ok_or_else(|| DfaError::Decode(Vec::new()))?;
        let row = row_support(dense, 1);
        match row.as_slice() {
            [(c, v)] if *v == 1.0 && (1..=self.dfa.num_states).contains(c) => Ok(c - 1),
            _ => Err(DfaError::Decode(row)),
        }
    }
}

pub fn build_dfa(d: &DfaSpec) -> Result<DfaNetwork, DfaError> {
    d.validate()?;
    let (s_n, k_n) = (d.num_states, d.num_symbols);
    let pairs = s_n.checked_mul(k_n).ok_or(DfaError::CapacityExceeded {
        rows: usize::MAX,
        cols: usize::MAX,
        limit: DFA_MAX_DIM,
    })?;
    let cols = 1 + s_n + k_n + 2 * pairs;
    let rows = 2 + 2 * pairs + s_n;
    if rows > DFA_MAX_DIM || cols > DFA_MAX_DIM {
        return Err(DfaError::CapacityExceeded {
            rows,
            cols,
            limit: DFA_MAX_DIM,
        });
    }
    let sym_col = |a: usize| 1 + s_n + a;
    let pair = |s: usize, a: usize| s * k_n + a;
    let u_col = |s: usize, a: usize| 1 + s_n + k_n + pair(s, a);
    let g_col = |s: usize, a: usize| 1 + s_n + k_n + pairs + pair(s, a);
    let g_rows = |s: usize, a: usize| (2 + 2 * pair(s, a), 3 + 2 * pair(s, a));
    let q_row = |s: usize| 2 + 2 * pairs + s;

    let mut spec = NetworkSpec::new(Mode::Lightweight { rows, cols });
    let mut w = DenseMatrix::zeros(rows, cols);
    spec.neurons.push(NeuronDecl::placed(
        "self",
        SELF2,
        Params::none(),
        vec![0, 1],
        vec![0],
    ));
    w.set(0, 0, 1.0);
    w.set(1, 1 + d.start, 1.0);
    for s in 0..s_n {
        spec.neurons.push(NeuronDecl::placed(
            format!("q{s}"),
            IDENTITY,
            Params::none(),
            vec![q_row(s)],
            vec![1 + s],
        ));
        for a in 0..k_n {
            w.set(q_row(s), g_col(s, a), 1.0);
        }
    }
    for a in 0..k_n {
        spec.neurons.push(NeuronDecl::placed(
            DfaNetwork::symbol_name(a),
            INPORT,
            Params::none(),
            vec![],
            vec![sym_col(a)],
        ));
    }
    for s in 0..s_n {
        for a in 0..k_n {
            let target = d.transition[s][a];
            let mut u = DenseMatrix::zeros(rows, cols);
            if target != s {
                u.set(1, 1 + s, -1.0);
                u.set(1, 1 + target, 1.0);
            }
            spec.neurons.push(NeuronDecl::placed(
                format!("u{s}_{a}"),
                CONST,
                Params::matrix(Matrix::Dense(u)),
                vec![],
                vec![u_col(s, a)],
            ));
        }
    }
    for s in 0..s_n {
        for a in 0..k_n {
            let (gate, update) = g_rows(s, a);
            spec.neurons.push(NeuronDecl::placed(
                format!("g{s}_{a}"),
                HADAMARD,
                Params::none(),
                vec![gate, update],
                vec![g_col(s, a)],
            ));
            w.set(gate, sym_col(a), 1.0);
            w.set(update, u_col(s, a), 1.0);
        }
    }
    spec.self_neuron = Some("self".into());
    spec.initial_matrix = Matrix::Dense(w);
    spec.enforced_rows
        .insert("0".into(), BTreeMap::from([("0".to_string(), 1.0)]));
    Ok(DfaNetwork {
        dfa: d.clone(),
        spec,
    })
}

/// Runs the network on `input` and decodes the start state followed by the
/// state after each symbol.
pub fn run_dfa(
    net: &DfaNetwork,
    registry: &Registry,
    input: &[usize],
) -> Result<Vec<usize>, DfaError> {
    let spec = net.with_input(input)?;
    let mut state = NetworkState::build(&spec, registry)?;
    for _ in 0..3 {
        state.step()?;
    }
    let mut out = vec![net.decode(state.network_matrix())?];
    for _ in input {
        state.step()?;
        out.push(net.decode(state.network_matrix())?);
    }
    Ok(out)
}
