use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fd_matrix::FdError;
use crate::index::ArityLookup;
use crate::matrix::{Matrix, Shape, ShapeMismatch};

/// Per-neuron configuration taken from a network spec.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    /// Matrix parameter (the emitted value of a constant neuron).
    pub matrix: Option<Matrix>,
    /// Externally supplied stream (input ports).
    pub sequence: Vec<Matrix>,
}

impl Params {
    pub fn none() -> Self {
        Params::default()
    }

    pub fn matrix(m: Matrix) -> Self {
        Params {
            matrix: Some(m),
            ..Params::default()
        }
    }

    pub fn sequence(seq: Vec<Matrix>) -> Self {
        Params {
            matrix: None,
            sequence: seq,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum NeuronError {
    #[error("input `{0}` does not have the required lifted shape")]
    NotLifted(&'static str),
    #[error("input `{0}` is not a 0/1 mask")]
    NotAMask(&'static str),
    #[error(transparent)]
    Fd(#[from] FdError),
    #[error(transparent)]
    Shape(#[from] ShapeMismatch),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("bad parameter: {0}")]
    BadParam(String),
}

/// What a neuron sees when it is stepped.
#[derive(Clone, Copy, Debug)]
pub struct StepContext {
    /// Number of the up movement being performed (first is 1).
    pub t: u64,
    pub shape: Shape,
}

/// A neuron instance: a deterministic transform with private state.
///
/// `step` receives the latest input matrices and returns the next output
/// matrices; any history the transform depends on must live in `self`.
pub trait NeuronBody: fmt::Debug + Send + Sync {
    fn initial_outputs(&self, shape: Shape, output_arity: usize) -> Vec<Matrix> {
        vec![Matrix::zero(shape); output_arity]
    }

    fn step(&mut self, ctx: &StepContext, inputs: &[Matrix]) -> Result<Vec<Matrix>, NeuronError>;

    fn clone_box(&self) -> Box<dyn NeuronBody>;
}

impl Clone for Box<dyn NeuronBody> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

pub type Constructor =
    Arc<dyn Fn(&Params, Shape) -> Result<Box<dyn NeuronBody>, NeuronError> + Send + Sync>;

#[derive(Clone)]
pub struct NeuronType {
    pub name: String,
    pub input_arity: usize,
    pub output_arity: usize,
    constructor: Constructor,
}

impl fmt::Debug for NeuronType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NeuronType")
            .field("name", &self.name)
            .field("input_arity", &self.input_arity)
            .field("output_arity", &self.output_arity)
            .finish_non_exhaustive()
    }
}

impl NeuronType {
    pub fn new(
        name: impl Into<String>,
        input_arity: usize,
        output_arity: usize,
        constructor: impl Fn(&Params, Shape) -> Result<Box<dyn NeuronBody>, NeuronError>
            + Send
            + Sync
            + 'static,
    ) -> Self {
        NeuronType {
            name: name.into(),
            input_arity,
            output_arity,
            constructor: Arc::new(constructor),
        }
    }

    pub fn instantiate(
        &self,
        params: &Params,
        shape: Shape,
    ) -> Result<Box<dyn NeuronBody>, NeuronError> {
        (self.constructor)(params, shape)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("neuron type `{0}` is already registered")]
    DuplicateType(String),
    #[error("neuron type `{0}` needs a non-empty name over the type alphabet")]
    BadName(String),
    #[error("neuron type `{0}` must have output arity at least 1")]
    ZeroOutputArity(String),
}

#[derive(Clone, Debug, Default)]
pub struct Registry {
    types: BTreeMap<String, NeuronType>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    pub fn register(&mut self, t: NeuronType) -> Result<(), RegistryError> {
        if !crate::index::is_type_name(&t.name) {
            return Err(RegistryError::BadName(t.name));
        }
        if t.output_arity == 0 {
            return Err(RegistryError::ZeroOutputArity(t.name));
        }
        if self.types.contains_key(&t.name) {
            return Err(RegistryError::DuplicateType(t.name));
        }
        self.types.insert(t.name.clone(), t);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&NeuronType> {
        self.types.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.types.keys().map(String::as_str)
    }
}

impl ArityLookup for Registry {
    fn arity(&self, type_name: &str) -> Option<(usize, usize)> {
        self.types
            .get(type_name)
            .map(|t| (t.input_arity, t.output_arity))
    }
}
