//! Minimal-time line synchronization: fires at exactly `2n - 1`.
//!
//! A wake sweep runs right at speed 1 carrying a hop counter; the far end
//! reflects a return sweep; a cell at distance `d` sees the return at time
//! `2n - 1 - d` and counts down its own measured `d`. The round trip is the
//! reason `2n - 1` is also the lower bound, so the countdown is exact.

use crate::error::StepError;
use crate::program::{missing, PortWords, Program, State, StateClass};
use crate::sync::{arc, bit_len, reject_below, start_config, SyncBuild};
use crate::topology::{ModelKind, Port, PortSig, Topology};
use crate::error::BuildError;

/// Hop payload space; supports lines of up to `HOP - 1` cells.
const HOP: State = 1 << 12;

const L: State = 0;
const G: State = 1;
const G_WAIT: State = 2;
const F: State = 3;
const WOKEN: State = HOP; // WOKEN + d
const COUNT: State = 2 * HOP; // COUNT + k, fires after k steps

const RETURN_WORD: u128 = 1;

#[derive(Debug, Clone)]
pub struct MinLine {
    capacity: u32,
}

impl MinLine {
    pub fn new(n: usize) -> MinLine {
        MinLine {
            capacity: bit_len(n as u128),
        }
    }

    /// The full build: General at cell 0, everyone else latent.
    pub fn build(n: usize) -> Result<SyncBuild, BuildError> {
        reject_below("line/min", n, 2)?;
        let topo = Topology::new(ModelKind::Line, n)?;
        let prog = MinLine::new(n);
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                (G, PortWords::empty().with(Port::Right, 1))
            } else {
                (L, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        Ok(SyncBuild {
            id: "line/min".into(),
            kind: ModelKind::Line,
            n,
            topo,
            program: arc(prog),
            start,
            predicted: 2 * n as u64 - 1,
            general_cell: 0,
        })
    }

    /// Successor of a state whose next transition ignores inputs, if any.
    /// Countdown states are the only ones: this is what lets a relay fire one
    /// step ahead when it can already see the predecessor state.
    pub fn free_successor(s: State) -> Option<State> {
        if (COUNT..COUNT + HOP).contains(&s) {
            let k = s - COUNT;
            Some(if k <= 1 { F } else { COUNT + k - 1 })
        } else {
            None
        }
    }
}

impl Program for MinLine {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let from_left = input.word_or_zero(Port::Left);
        let from_right = input.word_or_zero(Port::Right);
        let zeros = |mask: u8| PortWords::zeros(mask);

        let out = zeros(sig.outputs);
        let res = match state {
            F => (F, out),
            s if s == G => (G_WAIT, out),
            G_WAIT => {
                if from_right == RETURN_WORD {
                    (F, out)
                } else if from_right == 0 {
                    (G_WAIT, out)
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            L => {
                if from_left == 0 && from_right == 0 {
                    (L, out)
                } else if from_left > 0 {
                    let d = from_left;
                    if sig.has_output(Port::Right) {
                        // Forward the wake with an incremented hop count.
                        (WOKEN + d, out.with(Port::Right, d + 1))
                    } else {
                        // Far end: reflect and start counting down.
                        (COUNT + d, out.with(Port::Left, RETURN_WORD))
                    }
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            s if (WOKEN..WOKEN + HOP).contains(&s) => {
                let d = s - WOKEN;
                if from_right == RETURN_WORD {
                    (COUNT + d, out.with(Port::Left, RETURN_WORD))
                } else if from_right == 0 && from_left == 0 {
                    (s, out)
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            s if (COUNT..COUNT + HOP).contains(&s) => {
                let k = s - COUNT;
                if k <= 1 {
                    (F, out)
                } else {
                    (COUNT + k - 1, out)
                }
            }
            _ => return Err(missing(self, usize::MAX, state, input)),
        };
        Ok(res)
    }

    fn is_firing(&self, state: State) -> bool {
        state == F
    }

    fn is_quiescent(&self, state: State) -> bool {
        state == L
    }

    fn class(&self, state: State) -> StateClass {
        match state {
            L => StateClass::Latent,
            G | G_WAIT => StateClass::General,
            F => StateClass::Firing,
            _ => StateClass::Other,
        }
    }

    fn describe(&self, state: State) -> String {
        match state {
            L => "L".into(),
            G => "G".into(),
            G_WAIT => "Gw".into(),
            F => "F".into(),
            s if (WOKEN..WOKEN + HOP).contains(&s) => format!("w{}", s - WOKEN),
            s if (COUNT..COUNT + HOP).contains(&s) => format!("c{}", s - COUNT),
            s => format!("?{s}"),
        }
    }

    fn state_bound(&self) -> State {
        3 * HOP
    }
}
