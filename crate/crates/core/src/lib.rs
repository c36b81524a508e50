//! Dataflow matrix machines: networks of matrix-valued streams whose
//! connectivity is itself a stream emitted by a distinguished neuron.

pub mod dense;
pub mod engine;
pub mod experiments;
pub mod fd_matrix;
pub mod index;
pub mod matrix;
pub mod neurons;
pub mod spec_file;
pub mod warmus;
