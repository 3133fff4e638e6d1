//! Ring synchronization in time `n + 1`: the General behaves as both ends of
//! a Two-End line of `n + 1` virtual cells, sending hop-counting wakes both
//! ways around the ring.

use crate::error::{BuildError, StepError};
use crate::program::{missing, PortWords, Program, State, StateClass};
use crate::sync::{arc, bit_len, reject_below, start_config, SyncBuild};
use crate::topology::{ModelKind, Port, PortSig, Topology};

const HOP: State = 1 << 12;

const L: State = 0;
const G: State = 1;
const G_WAIT: State = 2;
const F: State = 3;
const HALF_L: State = HOP;
const HALF_R: State = 2 * HOP;
const COUNT: State = 3 * HOP;

#[derive(Debug, Clone)]
pub struct RingMin {
    capacity: u32,
}

impl RingMin {
    pub fn new(n: usize) -> RingMin {
        RingMin {
            capacity: bit_len(n as u128 + 1),
        }
    }

    pub fn build(n: usize, capacity_class: u32) -> Result<SyncBuild, BuildError> {
        if capacity_class < 2 {
            return Err(BuildError::Unsupported {
                construction: "ring/min".into(),
                reason: "with 1-bit links only the 2*ceil(n/2)+1 variant exists, and its building block \
                         (a strict 1-bit two-end line) is out of scope; request capacity >= 2"
                    .into(),
            });
        }
        reject_below("ring/min", n, 3)?;
        let topo = Topology::new(ModelKind::Ring, n)?;
        let prog = RingMin::new(n);
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                (G, PortWords::empty().with(Port::Right, 1).with(Port::Left, 1))
            } else {
                (L, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        Ok(SyncBuild {
            id: "ring/min".into(),
            kind: ModelKind::Ring,
            n,
            topo,
            program: arc(prog),
            start,
            predicted: n as u64 + 1,
            general_cell: 0,
        })
    }
}

impl Program for RingMin {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let wl = input.word_or_zero(Port::Left);
        let wr = input.word_or_zero(Port::Right);
        let out = PortWords::zeros(sig.outputs);

        let res = match state {
            F => (F, out),
            G => (G_WAIT, out),
            G_WAIT => {
                if wl > 0 || wr > 0 {
                    (F, out)
                } else {
                    (G_WAIT, out)
                }
            }
            L => match (wl, wr) {
                (0, 0) => (L, out),
                (d, 0) => (HALF_L + d, out.with(Port::Right, d + 1)),
                (0, d) => (HALF_R + d, out.with(Port::Left, d + 1)),
                (dl, dr) => {
                    let mut o = out;
                    o.set(Port::Right, wl + 1);
                    o.set(Port::Left, wr + 1);
                    (COUNT + dl.min(dr), o)
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
