//! Named synchronization builds: an automaton, its starting configuration
//! and the exact predicted firing time.

use std::sync::Arc;

use crate::config::Configuration;
use crate::error::BuildError;
use crate::program::{PortWords, Program, ProgramRef, State};
use crate::topology::{ModelKind, Topology};

/// A synchronization construction instantiated at a concrete size: the
/// program, the starting configuration, and the exact time at which every
/// cell must enter the firing state for the first time.
pub struct SyncBuild {
    pub id: String,
    pub kind: ModelKind,
    pub n: usize,
    pub topo: Topology,
    pub program: ProgramRef,
    pub start: Configuration,
    pub predicted: u64,
    /// Cell that holds the General in the starting configuration (the cell
    /// that re-triggers iterated phases).
    pub general_cell: usize,
}

impl SyncBuild {
    pub fn capacity(&self) -> u32 {
        self.program.capacity()
    }

    /// Verification horizon: twice the predicted time plus slack, to catch
    /// late or repeated firings.
    pub fn horizon(&self) -> u64 {
        2 * self.predicted + 4
    }
}

/// Builds a starting configuration from explicit per-cell (state, words).
pub fn start_config(topo: &Topology, mut f: impl FnMut(usize) -> (State, PortWords)) -> Configuration {
    let cells = topo.cells();
    let mut states = Vec::with_capacity(cells);
    let mut outs = Vec::with_capacity(cells);
    for cell in 0..cells {
        let (s, o) = f(cell);
        states.push(s);
        outs.push(o);
    }
    Configuration::new(1, states, outs)
}

pub(crate) fn reject_below(id: &str, n: usize, min: usize) -> Result<(), BuildError> {
    if n < min {
        Err(BuildError::SizeBelowMinimum {
            construction: id.to_string(),
            min,
            n,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn arc<P: Program + 'static>(p: P) -> Arc<dyn Program> {
    Arc::new(p)
}

/// Number of bits needed to write `v` in binary (at least 1).
pub(crate) fn bit_len(v: u128) -> u32 {
    (128 - v.leading_zeros()).max(1)
}
