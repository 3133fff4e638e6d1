//! Error types shared across the crate.

use thiserror::Error;

use crate::topology::ModelKind;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("{kind} needs at least {min} cells per dimension, got {n}")]
    TooSmall { kind: ModelKind, n: usize, min: usize },
}

/// A failed transition. Every reachable (state, input) pair must be mapped;
/// an unmapped pair is a construction bug and is reported, never ignored.
#[derive(Debug, Error)]
pub enum StepError {
    #[error("no transition for cell {cell} in state `{state}` with inputs {inputs} at time {time}")]
    MissingTransition {
        cell: usize,
        state: String,
        inputs: String,
        time: u64,
    },
    #[error("cell {cell} emitted {bits}-bit word on {port:?} but link capacity is {capacity} (time {time})")]
    CapacityExceeded {
        cell: usize,
        port: crate::topology::Port,
        bits: u32,
        capacity: u32,
        time: u64,
    },
    #[error("cell {cell} wrote port {port:?} it does not have (time {time})")]
    BadPort {
        cell: usize,
        port: crate::topology::Port,
        time: u64,
    },
    #[error("cell {cell} left output port {port:?} unset (time {time})")]
    UnsetPort {
        cell: usize,
        port: crate::topology::Port,
        time: u64,
    },
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("{construction} needs n >= {min}, got {n}")]
    SizeBelowMinimum {
        construction: String,
        min: usize,
        n: usize,
    },
    #[error("{construction} is not supported: {reason}")]
    Unsupported { construction: String, reason: String },
    #[error("unknown construction id `{0}`")]
    UnknownId(String),
    #[error("invalid parameter for {construction}: {reason}")]
    BadParameter { construction: String, reason: String },
}
