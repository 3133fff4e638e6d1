//! Square-of-Rings (two-way torus) synchronization in time `n + 1`.
//!
//! Row 0 and column 0 behave as rings synchronizing in `n + 1` around the
//! General. Their hop-1 cells spawn the cells `(1,1)`, `(1,n-1)`, `(n-1,1)`,
//! `(n-1,n-1)` as the corners of a Four-End synchronization of the inner
//! `(n-1) x (n-1)` array, which starts two steps in and also finishes at
//! `n + 1`.

use crate::error::{BuildError, StepError};
use crate::machines::FourEnd;
use crate::program::{missing, PortWords, Program, State, StateClass};
use crate::sync::{arc, reject_below, start_config, SyncBuild};
use crate::topology::{ModelKind, Port, PortSig, Topology};

const HOP: State = 1 << 10;

const L: State = 0;
const G: State = 1;
const G_WAIT: State = 2;
const F_RING: State = 3;
// Half states per (axis, origin-direction): payload m.
const HALF_RL: State = HOP; // row wake moving right arrived first
const HALF_RR: State = 2 * HOP;
const HALF_CD: State = 3 * HOP; // column wake moving down arrived first
const HALF_CU: State = 4 * HOP;
const COUNT: State = 5 * HOP;
const INNER: State = 8 * HOP; // + FourEnd state

const TAG_RING: u128 = 0b11;

fn ring_wake(axis_col: bool, hop: u128) -> u128 {
    TAG_RING | ((axis_col as u128) << 2) | (hop << 3)
}

fn parse_ring(word: u128) -> Option<(bool, u128)> {
    (word & 0b11 == TAG_RING).then(|| ((word >> 2) & 1 == 1, word >> 3))
}

fn spawn_word(ids: u128) -> u128 {
    2 | (ids << 2) // FourEnd's spawn encoding
}

#[derive(Debug, Clone)]
pub struct SquareOfRingsMin {
    inner: FourEnd,
    capacity: u32,
}

impl SquareOfRingsMin {
    pub fn new(n: usize) -> SquareOfRingsMin {
        let inner = FourEnd::new(n);
        let capacity = inner.capacity().max(3 + crate::sync::bit_len(n as u128 + 1));
        SquareOfRingsMin { inner, capacity }
    }

    pub fn build(n: usize, capacity_class: u32) -> Result<SyncBuild, BuildError> {
        if capacity_class < 2 {
            return Err(BuildError::Unsupported {
                construction: "square-of-rings/min".into(),
                reason: "only the capacity >= 2 variant (time n+1) is built; the 1-bit variant is out of scope".into(),
            });
        }
        reject_below("square-of-rings/min", n, 2)?;
        let topo = Topology::new(ModelKind::SquareOfRings, n)?;
        let prog = SquareOfRingsMin::new(n);
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                let mut out = PortWords::zeros(topo.sig(cell).outputs);
                out.set(Port::Right, ring_wake(false, 1));
                out.set(Port::Left, ring_wake(false, 1));
                out.set(Port::Down, ring_wake(true, 1));
                out.set(Port::Up, ring_wake(true, 1));
                (G, out)
            } else {
                (L, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        Ok(SyncBuild {
            id: "square-of-rings/min".into(),
            kind: ModelKind::SquareOfRings,
            n,
            topo,
            program: arc(prog),
            start,
            predicted: n as u64 + 1,
            general_cell: 0,
        })
    }
}

const TL: u128 = 1 << 0;
const TR: u128 = 1 << 1;
const BL: u128 = 1 << 2;
const BR: u128 = 1 << 3;

impl Program for SquareOfRingsMin {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let mut out = PortWords::zeros(sig.outputs);

        // Inner Four-End cells delegate wholesale.
        if state >= INNER {
            let (s, o) = self.inner.step(sig, state - INNER, input)?;
            return Ok((INNER + s, o));
        }

        let ring_at = |p: Port| parse_ring(input.word_or_zero(p));
        let any_ring = Port::ALL.iter().any(|&p| ring_at(p).is_some());

        let res = match state {
            F_RING => (F_RING, out),
            G => (G_WAIT, out),
            G_WAIT => {
                if any_ring {
                    (F_RING, out)
                } else {
                    (G_WAIT, out)
                }
            }
            L => {
                if input.is_all_zero() {
                    return Ok((L, out));
                }
                if !any_ring {
                    // First contact is a Four-End word: this is an inner cell.
                    let (s, o) = self.inner.step(sig, 0, input)?;
                    return Ok((INNER + s, o));
                }
                // Ring wake(s). Forward, spawn on hop 1, then settle.
                let rl = ring_at(Port::Left); // row wake moving right
                let rr = ring_at(Port::Right);
                let cd = ring_at(Port::Up); // column wake moving down
                let cu = ring_at(Port::Down);
                let mut spawn_down: u128 = 0;
                let mut spawn_up: u128 = 0;
                let mut spawn_right: u128 = 0;
                let mut spawn_left: u128 = 0;
                if let Some((false, h)) = rl {
                    out.set(Port::Right, ring_wake(false, h + 1));
                    if h == 1 {
                        spawn_down |= TL;
                    }
                }
                if let Some((false, h)) = rr {
                    out.set(Port::Left, ring_wake(false, h + 1));
                    if h == 1 {
                        spawn_down |= TR;
                        spawn_up |= BR;
                    }
                }
                if let Some((true, h)) = cd {
                    out.set(Port::Down, ring_wake(true, h + 1));
                    if h == 1 {
                        spawn_right |= TL;
                    }
                }
                if let Some((true, h)) = cu {
                    out.set(Port::Up, ring_wake(true, h + 1));
                    if h == 1 {
                        spawn_right |= BL;
                        spawn_left |= BR;
                    }
                }
                for (port, ids) in [
                    (Port::Down, spawn_down),
                    (Port::Up, spawn_up),
                    (Port::Right, spawn_right),
                    (Port::Left, spawn_left),
                ] {
                    if ids != 0 {
                        out.set(port, spawn_word(ids >> 0));
                    }
                }
                let state = match (rl, rr, cd, cu) {
                    (Some((false, h)), None, None, None) => HALF_RL + h as State,
                    (None, Some((false, h)), None, None) => HALF_RR + h as State,
                    (None, None, Some((true, h)), None) => HALF_CD + h as State,
                    (None, None, None, Some((true, h))) => HALF_CU + h as State,
                    (Some((false, a)), Some((false, b)), None, None) => COUNT + a.min(b) as State,
                    (None, None, Some((true, a)), Some((true, b))) => COUNT + a.min(b) as State,
                    _ => return Err(missing(self, usize::MAX, state, input)),
                };
                (state, out)
            }
            s if (HALF_RL..COUNT).contains(&s) => {
                let (m, expect, fwd, axis) = if s < HALF_RR {
                    (s - HALF_RL, Port::Right, Port::Left, false)
                } else if s < HALF_CD {
                    (s - HALF_RR, Port::Left, Port::Right, false)
                } else if s < HALF_CU {
                    (s - HALF_CD, Port::Down, Port::Up, true)
                } else {
                    (s - HALF_CU, Port::Up, Port::Down, true)
                };
                match ring_at(expect) {
                    Some((a, h)) if a == axis => {
                        out.set(fwd, ring_wake(axis, h + 1));
                        // Late hop-1 only happens on 2-cell rings, already
                        // handled by the simultaneous case; keep spawns anyway.
                        (COUNT + m, out)
                    }
                    None if input.is_all_zero() => (s, out),
                    _ => return Err(missing(self, usize::MAX, state, input)),
                }
            }
            s if (COUNT..INNER).contains(&s) => {
                let k = s - COUNT;
                if k <= 1 {
                    (F_RING, out)
                } else {
                    (COUNT + k - 1, out)
                }
            }
            _ => return Err(missing(self, usize::MAX, state, input)),
        };
        Ok(res)
    }

    fn is_firing(&self, state: State) -> bool {
        state == F_RING || (state >= INNER && self.inner.is_firing(state - INNER))
    }

    fn is_quiescent(&self, state: State) -> bool {
        state == L
    }

    fn class(&self, state: State) -> StateClass {
        match state {
            L => StateClass::Latent,
            G | G_WAIT => StateClass::General,
            F_RING => StateClass::Firing,
            s if s >= INNER => self.inner.class(s - INNER),
            _ => StateClass::Other,
        }
    }

    fn describe(&self, state: State) -> String {
        match state {
            L => "L".into(),
            G => "G".into(),
            G_WAIT => "Gw".into(),
            F_RING => "F".into(),
            s if s >= INNER => format!("i:{}", self.inner.describe(s - INNER)),
            s if (COUNT..INNER).contains(&s) => format!("c{}", s - COUNT),
            s => format!("h{s}"),
        }
    }

    fn state_bound(&self) -> State {
        INNER + self.inner.state_bound()
    }
}
