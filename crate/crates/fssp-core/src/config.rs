//! Configurations: per-cell state plus the words being sent, stamped with a
//! time. Time counts configurations and the starting configuration is time 1.

use crate::program::{PortWords, State};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub time: u64,
    pub states: Vec<State>,
    pub outs: Vec<PortWords>,
}

impl Configuration {
    pub fn new(time: u64, states: Vec<State>, outs: Vec<PortWords>) -> Self {
        debug_assert_eq!(states.len(), outs.len());
        Configuration { time, states, outs }
    }

    pub fn cells(&self) -> usize {
        self.states.len()
    }
}
