//! Two-stroke execution of a network whose topology is its own output.

pub mod registry;
pub mod spec;
pub mod state;
pub mod trace;

use thiserror::Error;

pub use registry::{
    NeuronBody, NeuronError, NeuronType, Params, Registry, RegistryError, StepContext,
};
pub use spec::{Mode, NetworkSpec, NeuronDecl, OverflowPolicy, SelfMode};
pub use state::{self_equivalence_check, NetworkState, Phase};
pub use trace::{Trace, TraceRecord, WatchKey, WatchTarget, WatchValue};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid network: {0}")]
    Validation(String),
    #[error("phase error: expected {expected:?}, found {found:?}")]
    Phase { expected: Phase, found: Phase },
    #[error("network matrix lost finite support at t={t}")]
    Overflow { t: u64 },
    #[error("constraint violated at t={t}: {detail}")]
    ConstraintViolated { t: u64, detail: String },
    #[error("neuron `{neuron}` failed at t={t}: {source}")]
    Neuron {
        neuron: String,
        t: u64,
        #[source]
        source: NeuronError,
    },
    #[error("bad watch key {0}")]
    BadWatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Validates `spec` and returns the network at `t = 0`.
pub fn build_network(spec: &NetworkSpec, registry: &Registry) -> Result<NetworkState, EngineError> {
    NetworkState::build(spec, registry)
}
