//! The lock-step engine: single-step semantics, bounded runs, traces,
//! activity (active sites, front, rear), bordered checks and the capacity /
//! quiescence audit.
//!
//! A site `(i, t)` is active when the cell changes state into `t+1`, emits a
//! nonzero word at `t`, or receives a nonzero word at `t` (a neighbor sent it
//! a nonzero word at `t-1`). Fronts and rears are the per-cell latest and
//! earliest active sites over cells that have at least one active site.

use std::collections::BTreeSet;

use crate::config::Configuration;
use crate::error::StepError;
use crate::program::{PortWords, Program, State};
use crate::topology::{Port, Topology};

/// Advance one configuration. Words sent at `cfg.time` are delivered as the
/// inputs of the transition into `cfg.time + 1`.
pub fn step(topo: &Topology, prog: &dyn Program, cfg: &Configuration) -> Result<Configuration, StepError> {
    let cells = topo.cells();
    debug_assert_eq!(cfg.cells(), cells);
    let mut states = Vec::with_capacity(cells);
    let mut outs = Vec::with_capacity(cells);
    let time = cfg.time + 1;

    for cell in 0..cells {
        let sig = topo.sig(cell);
        let mut input = PortWords::empty();
        for port in Port::ALL {
            if let Some((src, src_port)) = topo.route(cell, port) {
                input.set(port, cfg.outs[src].word_or_zero(src_port));
            }
        }
        let (state, out) = prog.step(sig, cfg.states[cell], &input).map_err(|e| stamp(e, time))?;
        validate_out(prog, cell, sig.outputs, &out, time)?;
        states.push(state);
        outs.push(out);
    }
    Ok(Configuration::new(time, states, outs))
}

fn stamp(e: StepError, time: u64) -> StepError {
    match e {
        StepError::MissingTransition { cell, state, inputs, .. } => {
            StepError::MissingTransition { cell, state, inputs, time }
        }
        other => other,
    }
}

fn validate_out(
    prog: &dyn Program,
    cell: usize,
    out_mask: u8,
    out: &PortWords,
    time: u64,
) -> Result<(), StepError> {
    let cap = prog.capacity();
    for (port, word) in out.iter() {
        if out_mask & port.mask() == 0 {
            return Err(StepError::BadPort { cell, port, time });
        }
        let bits = 128 - word.leading_zeros();
        if bits > cap {
            return Err(StepError::CapacityExceeded { cell, port, bits, capacity: cap, time });
        }
    }
    for port in Port::ALL {
        if out_mask & port.mask() != 0 && out.get(port).is_none() {
            return Err(StepError::UnsetPort { cell, port, time });
        }
    }
    Ok(())
}

/// Why a bounded run stopped before its horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EarlyStop {
    /// Every cell fires and the configuration is a fixed point.
    AllFiring,
    /// Every cell is quiescent and no words are in flight.
    AllQuiescent,
}

/// Options for trace recording.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Keep the words of every configuration (needed for diagrams and word
    /// queries; activity flags are always kept).
    pub record_words: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { record_words: true }
    }
}

/// The time-unrolling of a run: states per site, activity flags, and
/// optionally the transmitted words.
pub struct Trace {
    pub topo: Topology,
    /// `states[t-1][cell]`, starting at time 1.
    states: Vec<Vec<State>>,
    /// Emission of a nonzero word at (cell, t).
    emitted: Vec<Vec<bool>>,
    /// Reception of a nonzero word at (cell, t).
    received: Vec<Vec<bool>>,
    /// Per-configuration outgoing words, when recorded.
    words: Option<Vec<Vec<PortWords>>>,
    /// Max bits used on any link at each time.
    bits_per_step: Vec<u32>,
    pub stopped_early: Option<EarlyStop>,
    /// First time at which every cell is in the firing state.
    pub firing_time: Option<u64>,
    /// Quiescence violations found while running: (cell, time).
    quiescence_violations: Vec<(usize, u64)>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first_time(&self) -> u64 {
        1
    }

    pub fn last_time(&self) -> u64 {
        self.states.len() as u64
    }

    /// State of cell `i` at time `t` (1-based).
    pub fn state(&self, cell: usize, t: u64) -> State {
        self.states[(t - 1) as usize][cell]
    }

    pub fn states_at(&self, t: u64) -> &[State] {
        &self.states[(t - 1) as usize]
    }

    /// Word sent by `cell` on `port` at time `t`, if words were recorded.
    pub fn word(&self, cell: usize, port: Port, t: u64) -> Option<u128> {
        self.words
            .as_ref()
            .map(|w| w[(t - 1) as usize][cell].word_or_zero(port))
    }

    pub fn words_at(&self, t: u64) -> Option<&[PortWords]> {
        self.words.as_ref().map(|w| w[(t - 1) as usize].as_slice())
    }

    pub fn bits_per_step(&self) -> &[u32] {
        &self.bits_per_step
    }

    pub fn quiescence_violations(&self) -> &[(usize, u64)] {
        &self.quiescence_violations
    }

    /// Is site `(cell, t)` active?
    pub fn is_active(&self, cell: usize, t: u64) -> bool {
        let idx = (t - 1) as usize;
        if self.emitted[idx][cell] || self.received[idx][cell] {
            return true;
        }
        // State change visible at the next configuration.
        if (t as usize) < self.states.len() && self.states[idx][cell] != self.states[idx + 1][cell] {
            return true;
        }
        false
    }

    /// Active without the look-ahead state-change clause: the site where the
    /// cell emits, receives, or shows a state changed since the previous
    /// step. Used where arrival-order matters (the concatenation checker).
    pub fn is_active_arrival(&self, cell: usize, t: u64) -> bool {
        let idx = (t - 1) as usize;
        if self.emitted[idx][cell] || self.received[idx][cell] {
            return true;
        }
        idx > 0 && self.states[idx][cell] != self.states[idx - 1][cell]
    }

    /// All active sites as (cell, time) pairs.
    pub fn active_sites(&self) -> BTreeSet<(usize, u64)> {
        let mut set = BTreeSet::new();
        for t in 1..=self.last_time() {
            for cell in 0..self.topo.cells() {
                if self.is_active(cell, t) {
                    set.insert((cell, t));
                }
            }
        }
        set
    }

    /// Sites where the cell emits or receives a nonzero word: the
    /// information-flow skeleton of the run.
    pub fn flow_sites(&self) -> BTreeSet<(usize, u64)> {
        let mut set = BTreeSet::new();
        for t in 1..=self.last_time() {
            let idx = (t - 1) as usize;
            for cell in 0..self.topo.cells() {
                if self.emitted[idx][cell] || self.received[idx][cell] {
                    set.insert((cell, t));
                }
            }
        }
        set
    }

    /// Per-cell earliest and latest active times; cells without active sites
    /// are absent.
    pub fn front_rear(&self) -> (Vec<Option<u64>>, Vec<Option<u64>>) {
        let cells = self.topo.cells();
        let mut front = vec![None; cells];
        let mut rear = vec![None; cells];
        for t in 1..=self.last_time() {
            for cell in 0..cells {
                if self.is_active(cell, t) {
                    if rear[cell].is_none() {
                        rear[cell] = Some(t);
                    }
                    front[cell] = Some(t);
                }
            }
        }
        (front, rear)
    }

    /// Earliest site per cell at which something arrives or the state shows a
    /// change; the rear in arrival convention.
    pub fn rear_arrival(&self) -> Vec<Option<u64>> {
        let cells = self.topo.cells();
        let mut rear = vec![None; cells];
        for t in 1..=self.last_time() {
            for cell in 0..cells {
                if rear[cell].is_none() && self.is_active_arrival(cell, t) {
                    rear[cell] = Some(t);
                }
            }
        }
        rear
    }

    /// Checks the bordered property: `border` states appear exactly on the
    /// front of the trace.
    pub fn is_bordered(&self, prog: &dyn Program, border: &dyn Fn(State) -> bool) -> bool {
        let _ = prog;
        let (front, _) = self.front_rear();
        for t in 1..=self.last_time() {
            for cell in 0..self.topo.cells() {
                let on_front = front[cell] == Some(t);
                let is_border = border(self.state(cell, t));
                if on_front != is_border {
                    return false;
                }
            }
        }
        true
    }
}

/// Runs `prog` from `start` for at most `horizon` configurations. Stops
/// early, flagged, on an all-firing fixed point or an all-quiescent silence.
pub fn run(
    topo: &Topology,
    prog: &dyn Program,
    start: Configuration,
    horizon: u64,
    opts: RunOptions,
) -> Result<Trace, StepError> {
    assert!(horizon >= 1, "horizon must be at least 1");
    let cells = topo.cells();
    let mut states = Vec::new();
    let mut emitted = Vec::new();
    let mut received = Vec::new();
    let mut words = opts.record_words.then(Vec::new);
    let mut bits_per_step = Vec::new();
    let mut firing_time = None;
    let mut stopped_early = None;
    let mut quiescence_violations = Vec::new();

    let mut cur = start;
    let mut recv_flags = vec![false; cells]; // receptions at the current time
    loop {
        let t = cur.time;
        let emit_flags: Vec<bool> = cur.outs.iter().map(|o| !o.is_all_zero()).collect();
        bits_per_step.push(cur.outs.iter().map(|o| o.max_bits()).max().unwrap_or(0));
        let all_firing = cur.states.iter().all(|&s| prog.is_firing(s));
        if all_firing && firing_time.is_none() {
            firing_time = Some(t);
        }
        states.push(cur.states.clone());
        emitted.push(emit_flags);
        received.push(recv_flags.clone());
        if let Some(w) = words.as_mut() {
            w.push(cur.outs.clone());
        }

        if states.len() as u64 >= horizon {
            break;
        }

        // Early exits: all-firing fixed point, or latent silence.
        let silent = cur.outs.iter().all(|o| o.is_all_zero());
        if silent && cur.states.iter().all(|&s| prog.is_quiescent(s)) {
            stopped_early = Some(EarlyStop::AllQuiescent);
            break;
        }

        let next = step(topo, prog, &cur)?;
        recv_flags = (0..cells)
            .map(|cell| {
                Port::ALL.iter().any(|&p| {
                    topo.route(cell, p)
                        .map(|(src, sp)| cur.outs[src].word_or_zero(sp) != 0)
                        .unwrap_or(false)
                })
            })
            .collect();
        // Quiescence audit: latent + all-zero input must stay latent and silent.
        for cell in 0..cells {
            if prog.is_quiescent(cur.states[cell]) && !recv_flags[cell] {
                let held = next.states[cell] == cur.states[cell] && next.outs[cell].is_all_zero();
                if !held {
                    quiescence_violations.push((cell, next.time));
                }
            }
        }
        if all_firing && next == cur {
            stopped_early = Some(EarlyStop::AllFiring);
            break;
        }
        cur = next;
    }

    Ok(Trace {
        topo: topo.clone(),
        states,
        emitted,
        received,
        words,
        bits_per_step,
        stopped_early,
        firing_time,
        quiescence_violations,
    })
}

/// Capacity and quiescence report for a trace.
#[derive(Debug, Clone)]
pub struct AuditReport {
    /// Max bits on any link, per time step.
    pub bits_per_step: Vec<u32>,
    /// Max over the whole run.
    pub max_bits: u32,
    /// Declared capacity of the program.
    pub capacity: u32,
    /// Latent cells that moved or spoke without input: (cell, time).
    pub quiescence_violations: Vec<(usize, u64)>,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.quiescence_violations.is_empty() && self.max_bits <= self.capacity
    }

    /// Max bits used during times `[from, to]` (inclusive, 1-based).
    pub fn max_bits_in(&self, from: u64, to: u64) -> u32 {
        self.bits_per_step[(from - 1) as usize..=(to - 1).min(self.bits_per_step.len() as u64 - 1) as usize]
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
    }
}

pub fn audit(prog: &dyn Program, trace: &Trace) -> AuditReport {
    AuditReport {
        bits_per_step: trace.bits_per_step().to_vec(),
        max_bits: trace.bits_per_step().iter().copied().max().unwrap_or(0),
        capacity: prog.capacity(),
        quiescence_violations: trace.quiescence_violations().to_vec(),
    }
}
