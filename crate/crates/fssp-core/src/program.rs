//! Cell programs: states, words and the transition interface.
//!
//! A program is the transition map of a cellular automaton. States are opaque
//! `u64` values whose meaning is private to each program; words are bit
//! vectors of exactly `capacity()` bits, stored in a `u128`. The map must be
//! total over reachable (state, input) pairs — returning `StepError` for an
//! unmapped pair surfaces construction bugs instead of silently mis-stepping.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::StepError;
use crate::topology::{Port, PortSig};

/// Opaque per-program state encoding. Wide enough that product and relay
/// constructions can pack component states arithmetically.
pub type State = u128;

/// A `c`-bit word; `0` is the all-zero word.
pub type Word = u128;

/// Words present on a cell's ports (either the received words or the words
/// being sent). Ports not in the cell's signature are absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PortWords {
    present: u8,
    words: [Word; 4],
}

impl PortWords {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All present ports carry the all-zero word.
    pub fn zeros(mask: u8) -> Self {
        PortWords {
            present: mask,
            words: [0; 4],
        }
    }

    pub fn set(&mut self, port: Port, word: Word) {
        self.present |= port.mask();
        self.words[port.index()] = word;
    }

    pub fn with(mut self, port: Port, word: Word) -> Self {
        self.set(port, word);
        self
    }

    pub fn get(&self, port: Port) -> Option<Word> {
        (self.present & port.mask() != 0).then(|| self.words[port.index()])
    }

    /// Word on `port`, treating an absent port as zero.
    pub fn word_or_zero(&self, port: Port) -> Word {
        self.get(port).unwrap_or(0)
    }

    pub fn present_mask(&self) -> u8 {
        self.present
    }

    pub fn is_all_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Port, Word)> + '_ {
        Port::ALL
            .into_iter()
            .filter(|p| self.present & p.mask() != 0)
            .map(|p| (p, self.words[p.index()]))
    }

    /// Largest bit index in use across all present words.
    pub fn max_bits(&self) -> u32 {
        self.iter().map(|(_, w)| 128 - w.leading_zeros()).max().unwrap_or(0)
    }

    pub fn describe(&self) -> String {
        let mut s = String::from("{");
        for (p, w) in self.iter() {
            let _ = write!(s, "{:?}:{:#x} ", p, w);
        }
        s.push('}');
        s
    }
}

/// Broad display class of a state, used for glyphs and colors in diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateClass {
    Latent,
    General,
    Firing,
    Border,
    Marked,
    Other,
}

impl StateClass {
    pub fn glyph(self) -> char {
        match self {
            StateClass::Latent => '.',
            StateClass::General => 'G',
            StateClass::Firing => 'F',
            StateClass::Border => 'B',
            StateClass::Marked => 'M',
            StateClass::Other => '+',
        }
    }
}

/// The transition map of a cellular automaton, shared by all cells.
///
/// Boundary cells dispatch on their `PortSig` rather than on padded phantom
/// inputs: the same program sees which ports exist and which don't. Programs
/// must honor latent quiescence: a quiescent state receiving all-zero words
/// stays put and emits all-zero words.
pub trait Program: Send + Sync {
    /// Link capacity in bits. Every emitted word must fit.
    fn capacity(&self) -> u32;

    /// Apply the transition map for one cell.
    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError>;

    /// Is this the firing state?
    fn is_firing(&self, state: State) -> bool;

    /// Is this a quiescent (latent-class) state? Used by the audit.
    fn is_quiescent(&self, state: State) -> bool;

    fn class(&self, state: State) -> StateClass {
        if self.is_firing(state) {
            StateClass::Firing
        } else if self.is_quiescent(state) {
            StateClass::Latent
        } else {
            StateClass::Other
        }
    }

    /// Human-readable state name for reports and diagram legends.
    fn describe(&self, state: State) -> String {
        format!("s{state}")
    }

    /// Exclusive upper bound on state encodings, for product packing.
    fn state_bound(&self) -> State;
}

/// Convenience constructor for the `MissingTransition` error.
pub fn missing(
    program: &dyn Program,
    cell: usize,
    state: State,
    input: &PortWords,
) -> StepError {
    StepError::MissingTransition {
        cell,
        state: program.describe(state),
        inputs: input.describe(),
        time: 0,
    }
}

/// A program behind a shared pointer, the form used by builds.
pub type ProgramRef = Arc<dyn Program>;
