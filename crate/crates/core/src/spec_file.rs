//! JSON network spec files.
//!
//! ```json
//! {
//!   "mode": {"kind": "lightweight", "rows": 2, "cols": 2},
//!   "neurons": [
//!     {"name": "self", "type": "self2", "rows": [0, 1], "cols": [0]},
//!     {"name": "y1", "type": "const", "rows": [], "cols": [1],
//!      "params": {"matrix": {"triplets": [[1, 1, -2]]}}}
//!   ],
//!   "self": {"neuron": "self", "enforce_rows": {"0": {"0": 1}}},
//!   "initial_matrix": [[0, 0, 1], [1, 1, 1]],
//!   "steps": 4
//! }
//! ```
//!
//! A matrix value is one of `{"scalar": x}`, `{"triplets": [[row, col, w], ..]}`,
//! `{"dense": [[..], ..]}` (lightweight only) or `{"terms": [{"u": .., "v": ..}, ..]}`
//! (countable only). `initial_matrix` may also be a bare triplet list.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::engine::{Mode, NetworkSpec, NeuronDecl, OverflowPolicy, Params, Registry};
use crate::fd_matrix::FdTerm;
use crate::matrix::{FdMat, Key, Matrix, Shape};
use crate::neurons::INPORT;

#[derive(Debug, Error)]
pub enum SpecFileError {
    #[error("cannot parse spec: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid spec: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> SpecFileError {
    SpecFileError::Invalid(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeDecl {
    Lightweight { rows: usize, cols: usize },
    Countable,
}

/// Row or column key: a decimal index or a port name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KeyDecl {
    Index(u64),
    Name(String),
}

impl fmt::Display for KeyDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyDecl::Index(i) => write!(f, "{i}"),
            KeyDecl::Name(s) => f.write_str(s),
        }
    }
}

pub type TripletDecl = (KeyDecl, KeyDecl, f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixDecl {
    Scalar { scalar: f64 },
    Triplets { triplets: Vec<TripletDecl> },
    Dense { dense: DenseMatrix },
    Terms { terms: Vec<FdTerm<Key>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialMatrixDecl {
    Triplets(Vec<TripletDecl>),
    Matrix(MatrixDecl),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDecl>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeuronEntry {
    pub name: String,
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfDecl {
    pub neuron: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub enforce_rows: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default)]
    pub overflow_policy: OverflowPolicy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub mode: ModeDecl,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<String>,
    pub neurons: Vec<NeuronEntry>,
    #[serde(rename = "self", default, skip_serializing_if = "Option::is_none")]
    pub self_decl: Option<SelfDecl>,
    pub initial_matrix: InitialMatrixDecl,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub initial_outputs: BTreeMap<String, MatrixDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, Vec<MatrixDecl>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
}

fn dense_index(key: &KeyDecl, bound: usize, what: &str) -> Result<usize, SpecFileError> {
    let i = match key {
        KeyDecl::Index(i) => usize::try_from(*i).unwrap_or(usize::MAX),
        KeyDecl::Name(s) => s
            .parse()
            .map_err(|_| invalid(format!("bad {what} key `{s}`: expected a decimal index")))?,
    };
    if i >= bound {
        return Err(invalid(format!(
            "{what} index {i} out of range (size {bound})"
        )));
    }
    Ok(i)
}

fn triplets_to_matrix(triplets: &[TripletDecl], shape: Shape) -> Result<Matrix, SpecFileError> {
    match shape {
        Shape::Dense { rows, cols } => {
            let mut d = DenseMatrix::zeros(rows, cols);
            for (r, c, w) in triplets {
                let i = dense_index(r, rows, "row")?;
                let j = dense_index(c, cols, "column")?;
                d.set(i, j, d.get(i, j) + w);
            }
            Ok(Matrix::Dense(d))
        }
        Shape::Countable => Ok(Matrix::Fd(FdMat::from_triplets(
            triplets
                .iter()
                .map(|(r, c, w)| (r.to_string(), c.to_string(), *w)),
        ))),
    }
}

impl MatrixDecl {
    pub fn to_matrix(&self, shape: Shape) -> Result<Matrix, SpecFileError> {
        match (self, shape) {
            (MatrixDecl::Scalar { scalar }, _) => Ok(Matrix::scalar(shape, *scalar)),
            (MatrixDecl::Triplets { triplets }, _) => triplets_to_matrix(triplets, shape),
            (MatrixDecl::Dense { dense }, Shape::Dense { rows, cols }) => {
                if dense.shape() != (rows, cols) {
                    return Err(invalid(format!(
                        "dense matrix is {}x{}, network is {rows}x{cols}",
                        dense.rows(),
                        dense.cols()
                    )));
                }
                Ok(Matrix::Dense(dense.clone()))
            }
            (MatrixDecl::Terms { terms }, Shape::Countable) => {
                Ok(Matrix::Fd(FdMat::from_terms(terms.clone())))
            }
            (MatrixDecl::Dense { .. }, Shape::Countable) => {
                Err(invalid("dense matrices need a lightweight network"))
            }
            (MatrixDecl::Terms { .. }, Shape::Dense { .. }) => {
                Err(invalid("term lists need a countable network"))
            }
        }
    }

    /// Shortest declaration of `m`: a scalar if constant, triplets if the
    /// support is finite, otherwise its term list.
    pub fn from_matrix(m: &Matrix) -> MatrixDecl {
        if let Some(x) = m.constant_value() {
            if x != 0.0 || m.triplets().is_some_and(|t| t.is_empty()) {
                return MatrixDecl::Scalar { scalar: x };
            }
        }
        match (m, m.triplets()) {
            (Matrix::Dense(_), Some(t)) => MatrixDecl::Triplets {
                triplets: t
                    .into_iter()
                    .map(|(r, c, w)| {
                        (
                            KeyDecl::Index(r.parse().expect("dense keys are decimal")),
                            KeyDecl::Index(c.parse().expect("dense keys are decimal")),
                            w,
                        )
                    })
                    .collect(),
            },
            (Matrix::Fd(_), Some(t)) => MatrixDecl::Triplets {
                triplets: t
                    .into_iter()
                    .map(|(r, c, w)| (KeyDecl::Name(r), KeyDecl::Name(c), w))
                    .collect(),
            },
            (Matrix::Fd(a), None) => MatrixDecl::Terms {
                terms: a.terms().to_vec(),
            },
            (Matrix::Dense(_), None) => unreachable!("dense matrices have finite support"),
        }
    }
}

impl InitialMatrixDecl {
    fn to_matrix(&self, shape: Shape) -> Result<Matrix, SpecFileError> {
        match self {
            InitialMatrixDecl::Triplets(t) => triplets_to_matrix(t, shape),
            InitialMatrixDecl::Matrix(m) => m.to_matrix(shape),
        }
    }
}

fn key_string(
    s: &str,
    shape: Shape,
    bound_of: impl Fn(Shape) -> usize,
    what: &str,
) -> Result<Key, SpecFileError> {
    match shape {
        Shape::Dense { .. } => {
            Ok(dense_index(&KeyDecl::Name(s.to_string()), bound_of(shape), what)?.to_string())
        }
        Shape::Countable => Ok(s.to_string()),
    }
}

fn rows_of(shape: Shape) -> usize {
    match shape {
        Shape::Dense { rows, .. } => rows,
        Shape::Countable => usize::MAX,
    }
}

fn cols_of(shape: Shape) -> usize {
    match shape {
        Shape::Dense { cols, .. } => cols,
        Shape::Countable => usize::MAX,
    }
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<SpecFile, SpecFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    /// Converts to an engine spec. Structural checks that need the whole
    /// network are left to the engine's validation.
    pub fn to_spec(&self, registry: &Registry) -> Result<NetworkSpec, SpecFileError> {
        let mode = match self.mode {
            ModeDecl::Lightweight { rows, cols } => Mode::Lightweight { rows, cols },
            ModeDecl::Countable => Mode::Countable,
        };
        let shape = mode.shape();
        for t in &self.types {
            if registry.get(t).is_none() {
                return Err(invalid(format!("unknown neuron type `{t}` in `types`")));
            }
        }
        let self_decl = self
            .self_decl
            .as_ref()
            .ok_or_else(|| invalid("missing Self: the spec has no `self` section"))?;

        let mut spec = NetworkSpec::new(mode);
        for (name, _) in &self.inputs {
            match self.neurons.iter().find(|n| &n.name == name) {
                None => {
                    return Err(invalid(format!(
                        "inputs given for undeclared neuron `{name}`"
                    )))
                }
                Some(n) if n.type_name != INPORT => {
                    return Err(invalid(format!(
                        "inputs given for `{name}`, which is not an `{INPORT}` neuron"
                    )))
                }
                Some(_) => {}
            }
        }
        for n in &self.neurons {
            let matrix = match n.params.as_ref().and_then(|p| p.matrix.as_ref()) {
                Some(m) => Some(
                    m.to_matrix(shape)
                        .map_err(|e| invalid(format!("neuron `{}`: {e}", n.name)))?,
                ),
                None => None,
            };
            let sequence = match self.inputs.get(&n.name) {
                Some(seq) => seq
                    .iter()
                    .map(|m| m.to_matrix(shape))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| invalid(format!("inputs of `{}`: {e}", n.name)))?,
                None => Vec::new(),
            };
            spec.neurons.push(NeuronDecl {
                name: n.name.clone(),
                type_name: n.type_name.clone(),
                params: Params { matrix, sequence },
                rows: n.rows.clone(),
                cols: n.cols.clone(),
            });
        }
        spec.self_neuron = Some(self_decl.neuron.clone());
        spec.overflow_policy = self_decl.overflow_policy;
        for (row, values) in &self_decl.enforce_rows {
            let row = key_string(row, shape, rows_of, "row")?;
            let mut clamped = BTreeMap::new();
            for (col, v) in values {
                clamped.insert(key_string(col, shape, cols_of, "column")?, *v);
            }
            spec.enforced_rows.insert(row, clamped);
        }
        spec.initial_matrix = self.initial_matrix.to_matrix(shape)?;
        for (col, m) in &self.initial_outputs {
            let col = key_string(col, shape, cols_of, "column")?;
            spec.initial_outputs.insert(col, m.to_matrix(shape)?);
        }
        Ok(spec)
    }

    /// Spec file describing `spec`; `steps` is recorded as the default run
    /// length.
    pub fn from_spec(spec: &NetworkSpec, steps: Option<u64>) -> SpecFile {
        let mode = match spec.mode {
            Mode::Lightweight { rows, cols } => ModeDecl::Lightweight { rows, cols },
            Mode::Countable => ModeDecl::Countable,
        };
        let mut inputs = BTreeMap::new();
        let neurons = spec
            .neurons
            .iter()
            .map(|n| {
                if !n.params.sequence.is_empty() {
                    inputs.insert(
                        n.name.clone(),
                        n.params
                            .sequence
                            .iter()
                            .map(MatrixDecl::from_matrix)
                            .collect(),
                    );
                }
                NeuronEntry {
                    name: n.name.clone(),
                    type_name: n.type_name.clone(),
                    params: n.params.matrix.as_ref().map(|m| ParamsDecl {
                        matrix: Some(MatrixDecl::from_matrix(m)),
                    }),
                    rows: n.rows.clone(),
                    cols: n.cols.clone(),
                }
            })
            .collect();
        let initial_matrix = match MatrixDecl::from_matrix(&spec.initial_matrix) {
            MatrixDecl::Triplets { triplets } => InitialMatrixDecl::Triplets(triplets),
            other => InitialMatrixDecl::Matrix(other),
        };
        SpecFile {
            mode,
            types: Vec::new(),
            neurons,
            self_decl: spec.self_neuron.as_ref().map(|s| SelfDecl {
                neuron: s.clone(),
                enforce_rows: spec.enforced_rows.clone(),
                overflow_policy: spec.overflow_policy,
            }),
            initial_matrix,
            initial_outputs: spec
                .initial_outputs
                .iter()
                .map(|(k, m)| (k.clone(), MatrixDecl::from_matrix(m)))
                .collect(),
            inputs,
            steps,
        }
    }
}
