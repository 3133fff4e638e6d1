//! Two-End line synchronization: Generals at both ends, fires at exactly `n`.
//!
//! Both ends launch hop-counting wakes toward each other. The first wake to
//! reach a cell came from the nearer end and carries the cell's distance `m`
//! to it; the second arrival happens at time `n - m`, so counting down `m`
//! fires everyone at `n`. End roles are carried in the start states, not in
//! port signatures, so the same table runs embedded in rings.

use crate::error::{BuildError, StepError};
use crate::program::{missing, PortWords, Program, State, StateClass};
use crate::sync::{arc, bit_len, reject_below, start_config, SyncBuild};
use crate::topology::{ModelKind, Port, PortSig, Topology};

const HOP: State = 1 << 12;

const L: State = 0;
const LEFT_G: State = 1;
const RIGHT_G: State = 2;
const LEFT_WAIT: State = 3;
const RIGHT_WAIT: State = 4;
const F: State = 5;
const HALF_L: State = HOP; // first wake came from the left; payload m
const HALF_R: State = 2 * HOP; // first wake came from the right
const COUNT: State = 3 * HOP;

#[derive(Debug, Clone)]
pub struct TwoEndLine {
    capacity: u32,
}

impl TwoEndLine {
    pub fn new(n: usize) -> TwoEndLine {
        TwoEndLine {
            capacity: bit_len(n as u128),
        }
    }

    pub fn build(n: usize, capacity_class: u32) -> Result<SyncBuild, BuildError> {
        if capacity_class < 2 {
            return Err(BuildError::Unsupported {
                construction: "line/two-end".into(),
                reason: "the 1-bit variant (time 2*floor(n/2)+1) is out of scope here; request capacity >= 2".into(),
            });
        }
        reject_below("line/two-end", n, 2)?;
        let topo = Topology::new(ModelKind::Line, n)?;
        let prog = TwoEndLine::new(n);
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                (LEFT_G, PortWords::empty().with(Port::Right, 1))
            } else if cell == n - 1 {
                (RIGHT_G, PortWords::empty().with(Port::Left, 1))
            } else {
                (L, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        Ok(SyncBuild {
            id: "line/two-end".into(),
            kind: ModelKind::Line,
            n,
            topo,
            program: arc(prog),
            start,
            predicted: n as u64,
            general_cell: 0,
        })
    }

    pub fn latent() -> State {
        L
    }

    pub fn firing() -> State {
        F
    }

    pub fn left_general() -> State {
        LEFT_G
    }

    pub fn right_general() -> State {
        RIGHT_G
    }
}

impl Program for TwoEndLine {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let wl = input.word_or_zero(Port::Left);
        let wr = input.word_or_zero(Port::Right);
        let out = PortWords::zeros(sig.outputs);

        let res = match state {
            F => (F, out),
            // For n = 2 the opposite wake is already arriving.
            LEFT_G => {
                if wr > 0 {
                    (F, out)
                } else {
                    (LEFT_WAIT, out)
                }
            }
            RIGHT_G => {
                if wl > 0 {
                    (F, out)
                } else {
                    (RIGHT_WAIT, out)
                }
            }
            LEFT_WAIT => {
                if wr > 0 {
                    (F, out)
                } else {
                    (LEFT_WAIT, out)
                }
            }
            RIGHT_WAIT => {
                if wl > 0 {
                    (F, out)
                } else {
                    (RIGHT_WAIT, out)
                }
            }
            L => match (wl, wr) {
                (0, 0) => (L, out),
                (d, 0) => (HALF_L + d, out.with(Port::Right, d + 1)),
                (0, d) => (HALF_R + d, out.with(Port::Left, d + 1)),
                (dl, _dr) => {
                    // Wakes cross exactly here: both hops equal the distance
                    // to either end. Forward both and start the countdown.
                    let mut o = out;
                    o.set(Port::Right, wl + 1);
                    o.set(Port::Left, wr + 1);
                    (COUNT + dl, o)
                }
            },
            s if (HALF_L..HALF_L + HOP).contains(&s) => {
                let m = s - HALF_L;
                if wr > 0 {
                    (COUNT + m, out.with(Port::Left, wr + 1))
                } else if wl == 0 {
                    (s, out)
                } else {
                    return Err(missing(self, usize::MAX, state, input));
                }
            }
            s if (HALF_R..HALF_R + HOP).contains(&s) => {
                let m = s - HALF_R;
                if wl > 0 {
                    (COUNT + m, out.with(Port::Right, wl + 1))
                } else if wr == 0 {
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
            LEFT_G | RIGHT_G | LEFT_WAIT | RIGHT_WAIT => StateClass::General,
            F => StateClass::Firing,
            _ => StateClass::Other,
        }
    }

    fn describe(&self, state: State) -> String {
        match state {
            L => "L".into(),
            LEFT_G => "G<".into(),
            RIGHT_G => ">G".into(),
            LEFT_WAIT => "g<".into(),
            RIGHT_WAIT => ">g".into(),
            F => "F".into(),
            s if (HALF_L..HALF_L + HOP).contains(&s) => format!("hl{}", s - HALF_L),
            s if (HALF_R..HALF_R + HOP).contains(&s) => format!("hr{}", s - HALF_R),
            s if (COUNT..COUNT + HOP).contains(&s) => format!("c{}", s - COUNT),
            s => format!("?{s}"),
        }
    }

    fn state_bound(&self) -> State {
        4 * HOP
    }
}
