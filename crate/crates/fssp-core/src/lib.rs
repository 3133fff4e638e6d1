//! Firing squad synchronization on six network models with bounded-capacity
//! links: a lock-step simulation engine, a signal algebra, a catalog of
//! synchronization constructions with exact firing times, composition rules,
//! and a verification harness that checks every claimed time by simulation.

pub mod compose;
pub mod config;
pub mod embed;
pub mod engine;
pub mod error;
pub mod export;
pub mod machines;
pub mod program;
pub mod registry;
pub mod signals;
pub mod sync;
pub mod timed;
pub mod topology;
pub mod verify;

pub use config::Configuration;
pub use engine::{audit, run, step, AuditReport, RunOptions, Trace};
pub use error::{BuildError, StepError, TopologyError};
pub use program::{PortWords, Program, ProgramRef, State, StateClass, Word};
pub use sync::SyncBuild;
pub use topology::{ModelKind, Port, PortSig, Topology};
