use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::registry::Params;
use crate::matrix::{Key, Matrix, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Finite network with `rows` inputs and `cols` outputs, addressed by
    /// decimal row/column numbers.
    Lightweight { rows: usize, cols: usize },
    /// Countable network addressed by port names.
    Countable,
}

impl Mode {
    pub fn shape(self) -> Shape {
        match self {
            Mode::Lightweight { rows, cols } => Shape::Dense { rows, cols },
            Mode::Countable => Shape::Countable,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverflowPolicy {
    /// Replace an infinite-support network matrix by the zero matrix.
    #[default]
    ResetToZero,
    /// Stop the run with an overflow error.
    Halt,
}

/// How the Self neuron obtains its carried value `x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfMode {
    /// `x` is computed by the down movement like any other input.
    #[default]
    Literal,
    /// `x` is the previous network matrix, never recomputed. Requires Self's
    /// `x` row to hold a single weight 1 on Self's own output.
    Optimized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeuronDecl {
    /// Simple name of the neuron.
    pub name: String,
    pub type_name: String,
    pub params: Params,
    /// Lightweight mode: matrix rows of the inputs, in port order.
    pub rows: Vec<usize>,
    /// Lightweight mode: matrix columns of the outputs, in port order.
    pub cols: Vec<usize>,
}

impl NeuronDecl {
    /// Countable-mode declaration; ports are derived from the name.
    pub fn named(name: impl Into<String>, type_name: impl Into<String>, params: Params) -> Self {
        NeuronDecl {
            name: name.into(),
            type_name: type_name.into(),
            params,
            rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    /// Lightweight-mode declaration with explicit rows and columns.
    pub fn placed(
        name: impl Into<String>,
        type_name: impl Into<String>,
        params: Params,
        rows: Vec<usize>,
        cols: Vec<usize>,
    ) -> Self {
        NeuronDecl {
            name: name.into(),
            type_name: type_name.into(),
            params,
            rows,
            cols,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    pub mode: Mode,
    pub neurons: Vec<NeuronDecl>,
    /// Name of the neuron whose output is the network matrix.
    pub self_neuron: Option<String>,
    pub initial_matrix: Matrix,
    /// Initial values of output streams, by column key.
    pub initial_outputs: BTreeMap<Key, Matrix>,
    /// Rows of the network matrix clamped after every Self update:
    /// row key -> (column key -> value), unlisted columns are 0.
    pub enforced_rows: BTreeMap<Key, BTreeMap<Key, f64>>,
    pub overflow_policy: OverflowPolicy,
}

impl NetworkSpec {
    pub fn new(mode: Mode) -> Self {
        NetworkSpec {
            mode,
            neurons: Vec::new(),
            self_neuron: None,
            initial_matrix: Matrix::zero(mode.shape()),
            initial_outputs: BTreeMap::new(),
            enforced_rows: BTreeMap::new(),
            overflow_policy: OverflowPolicy::default(),
        }
    }

    pub fn shape(&self) -> Shape {
        self.mode.shape()
    }

    pub fn neuron(&self, name: &str) -> Option<&NeuronDecl> {
        self.neurons.iter().find(|n| n.name == name)
    }
}
