//! Minimal-time square synchronization: fires at exactly `2n - 1`.
//!
//! The square decomposes into nested L-shaped frames. Frame `k`'s corner
//! `(k,k)` is born at time `2k+1` and drives its row arm and column arm as
//! independent minimal-time lines of length `n-k`; each arm's wake reflects
//! off the array edge and counts down, so every arm fires at `2n-1`. Arm
//! cells one hop from their corner spawn the next corner diagonally inward.

use crate::error::{BuildError, StepError};
use crate::program::{missing, PortWords, Program, State, StateClass};
use crate::sync::{arc, bit_len, reject_below, start_config, SyncBuild};
use crate::topology::{ModelKind, Port, PortSig, Topology};

const HOP: State = 1 << 10;

const L: State = 0;
const F: State = 1;
const CORNER: State = 2;
const CORNER_WAIT: State = 3;
const WOKEN_ROW: State = HOP; // + d
const WOKEN_COL: State = 2 * HOP; // + d
const COUNT: State = 3 * HOP; // + k

const TAG_WAKE: u128 = 1; // | hop << 2
const TAG_RETURN: u128 = 2;
const TAG_SPAWN: u128 = 3;

fn wake(hop: u128) -> u128 {
    TAG_WAKE | (hop << 2)
}

#[derive(Debug, Clone)]
pub struct MinSquare {
    capacity: u32,
}

impl MinSquare {
    pub fn new(n: usize) -> MinSquare {
        MinSquare {
            capacity: 2 + bit_len(n as u128),
        }
    }

    pub fn build(n: usize) -> Result<SyncBuild, BuildError> {
        reject_below("square/min", n, 2)?;
        let topo = Topology::new(ModelKind::Square, n)?;
        let prog = MinSquare::new(n);
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                let mut out = PortWords::zeros(topo.sig(cell).outputs);
                out.set(Port::Right, wake(1));
                out.set(Port::Down, wake(1));
                (CORNER, out)
            } else {
                (L, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        Ok(SyncBuild {
            id: "square/min".into(),
            kind: ModelKind::Square,
            n,
            topo,
            program: arc(prog),
            start,
            predicted: 2 * n as u64 - 1,
            general_cell: 0,
        })
    }
}

impl Program for MinSquare {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let mut out = PortWords::zeros(sig.outputs);
        let set = |out: &mut PortWords, port: Port, word: u128| {
            if sig.has_output(port) {
                out.set(port, word);
            }
        };
        let word_is = |p: Port, tag: u128| -> Option<u128> {
            let w = input.word_or_zero(p);
            (w & 0b11 == tag && w != 0).then(|| w >> 2)
        };

        let res = match state {
            F => (F, out),
            CORNER => (CORNER_WAIT, out),
            CORNER_WAIT => {
                if word_is(Port::Right, TAG_RETURN).is_some() || word_is(Port::Down, TAG_RETURN).is_some() {
                    (F, out)
                } else if input.is_all_zero() {
                    (CORNER_WAIT, out)
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            L => {
                if input.is_all_zero() {
                    return Ok((L, out));
                }
                let spawned = word_is(Port::Up, TAG_SPAWN).is_some() || word_is(Port::Left, TAG_SPAWN).is_some();
                if spawned {
                    // Next frame corner; a corner with no inward ports is the
                    // last frame and fires at birth.
                    if !sig.has_output(Port::Right) && !sig.has_output(Port::Down) {
                        return Ok((F, out));
                    }
                    set(&mut out, Port::Right, wake(1));
                    set(&mut out, Port::Down, wake(1));
                    return Ok((CORNER_WAIT, out));
                }
                // Arm wake: rows travel right, columns travel down.
                if let Some(d) = word_is(Port::Left, TAG_WAKE) {
                    if d == 1 {
                        set(&mut out, Port::Down, TAG_SPAWN);
                    }
                    if sig.has_output(Port::Right) {
                        set(&mut out, Port::Right, wake(d + 1));
                        (WOKEN_ROW + d as State, out)
                    } else {
                        set(&mut out, Port::Left, TAG_RETURN);
                        (COUNT + d as State, out)
                    }
                } else if let Some(d) = word_is(Port::Up, TAG_WAKE) {
                    if d == 1 {
                        set(&mut out, Port::Right, TAG_SPAWN);
                    }
                    if sig.has_output(Port::Down) {
                        set(&mut out, Port::Down, wake(d + 1));
                        (WOKEN_COL + d as State, out)
                    } else {
                        set(&mut out, Port::Up, TAG_RETURN);
                        (COUNT + d as State, out)
                    }
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            s if (WOKEN_ROW..WOKEN_ROW + HOP).contains(&s) => {
                let d = s - WOKEN_ROW;
                if word_is(Port::Right, TAG_RETURN).is_some() {
                    set(&mut out, Port::Left, TAG_RETURN);
                    (COUNT + d, out)
                } else if input.is_all_zero() {
                    (s, out)
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            s if (WOKEN_COL..WOKEN_COL + HOP).contains(&s) => {
                let d = s - WOKEN_COL;
                if word_is(Port::Down, TAG_RETURN).is_some() {
                    set(&mut out, Port::Up, TAG_RETURN);
                    (COUNT + d, out)
                } else if input.is_all_zero() {
                    (s, out)
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            s if s >= COUNT => {
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
            F => StateClass::Firing,
            CORNER | CORNER_WAIT => StateClass::General,
            _ => StateClass::Other,
        }
    }

    fn describe(&self, state: State) -> String {
        match state {
            L => "L".into(),
            F => "F".into(),
            CORNER => "G".into(),
            CORNER_WAIT => "Gw".into(),
            s if (WOKEN_ROW..WOKEN_ROW + HOP).contains(&s) => format!("r{}", s - WOKEN_ROW),
            s if (WOKEN_COL..WOKEN_COL + HOP).contains(&s) => format!("d{}", s - WOKEN_COL),
            s if s >= COUNT => format!("c{}", s - COUNT),
            s => format!("?{s}"),
        }
    }

    fn state_bound(&self) -> State {
        4 * HOP
    }
}
