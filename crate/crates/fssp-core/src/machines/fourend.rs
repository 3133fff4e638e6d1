//! Four-End square synchronization: Generals at all four corners, fires at
//! exactly `n`.
//!
//! The square is organized in concentric frames. Each frame's four sides run
//! a two-end hop countdown; the cells one hop from a corner spawn the next
//! frame's corners inward, so frame `f` starts at time `2(f-1)+1` and every
//! frame finishes together at `n`. End roles travel in states and words, not
//! in port signatures, so the machine also runs embedded in one-way tori.

use crate::error::{BuildError, StepError};
use crate::program::{missing, PortWords, Program, State, StateClass};
use crate::sync::{arc, bit_len, reject_below, start_config, SyncBuild};
use crate::topology::{ModelKind, Port, PortSig, Topology};

const HOPF: State = 512;

const L: State = 0;
const F: State = 1;
const C_START: State = 2; // +corner id, 2..=5
const C_WAIT: State = 6;
const HALF: State = 16; // + (axis*2 + from)*HOPF + m
const COUNT: State = 16 + 4 * HOPF; // + k

const TAG_WAKE: u128 = 1;
const TAG_SPAWN: u128 = 2;

/// Corner identities.
const TL: u128 = 0;
const TR: u128 = 1;
const BL: u128 = 2;
const BR: u128 = 3;
const ALL_IDS: u128 = 0xf;

fn wake(id: u128, inward_hi: bool, hop: u128) -> u128 {
    TAG_WAKE | (id << 2) | ((inward_hi as u128) << 4) | (hop << 5)
}

fn spawn_word(ids: u128) -> u128 {
    TAG_SPAWN | (ids << 2)
}

struct Wake {
    id: u128,
    inward_hi: bool,
    hop: u128,
}

fn parse(word: u128) -> Option<Result<Wake, u128>> {
    match word & 0b11 {
        0 => None,
        TAG_WAKE => Some(Ok(Wake {
            id: (word >> 2) & 0b11,
            inward_hi: (word >> 4) & 1 == 1,
            hop: word >> 5,
        })),
        TAG_SPAWN => Some(Err((word >> 2) & ALL_IDS)),
        _ => None,
    }
}

/// The two wakes a corner emits at birth: (port, inward_hi) pairs.
fn corner_wakes(id: u128) -> [(Port, bool); 2] {
    match id {
        TL => [(Port::Right, false), (Port::Down, false)],
        TR => [(Port::Left, false), (Port::Down, true)],
        BL => [(Port::Right, true), (Port::Up, false)],
        _ => [(Port::Left, true), (Port::Up, true)],
    }
}

/// Direction a side's spawn goes, given wake axis and inward flag.
fn inward_port(axis_col: bool, inward_hi: bool) -> Port {
    match (axis_col, inward_hi) {
        (false, false) => Port::Down,  // top side
        (false, true) => Port::Up,     // bottom side
        (true, false) => Port::Right,  // left side
        (true, true) => Port::Left,    // right side
    }
}

#[derive(Debug, Clone)]
pub struct FourEnd {
    capacity: u32,
}

impl FourEnd {
    pub fn new(n: usize) -> FourEnd {
        FourEnd {
            capacity: 5 + bit_len(n as u128 + 1),
        }
    }

    pub fn corner_start_out(id: u128) -> PortWords {
        let mut out = PortWords::empty();
        for (port, hi) in corner_wakes(id) {
            out.set(port, wake(id, hi, 1));
        }
        out
    }

    pub fn build(n: usize, capacity_class: u32) -> Result<SyncBuild, BuildError> {
        if capacity_class < 2 {
            return Err(BuildError::Unsupported {
                construction: "square/four-end".into(),
                reason: "the 1-bit variant (time 2*floor(n/2)+1) is out of scope here; request capacity >= 2".into(),
            });
        }
        reject_below("square/four-end", n, 2)?;
        let topo = Topology::new(ModelKind::Square, n)?;
        let prog = FourEnd::new(n);
        let corner_of = move |cell: usize| -> Option<u128> {
            let (i, j) = (cell / n, cell % n);
            match (i == 0, j == 0, i == n - 1, j == n - 1) {
                (true, true, ..) => Some(TL),
                (true, false, _, true) => Some(TR),
                (false, true, true, _) => Some(BL),
                (false, false, true, true) => Some(BR),
                _ => None,
            }
        };
        let start = start_config(&topo, |cell| match corner_of(cell) {
            Some(id) => {
                // Restrict the emitted wakes to ports the corner has.
                let sig = topo.sig(cell);
                let mut out = PortWords::zeros(sig.outputs);
                for (port, word) in FourEnd::corner_start_out(id).iter() {
                    if sig.has_output(port) {
                        out.set(port, word);
                    }
                }
                (C_START + id as State, out)
            }
            None => (L, PortWords::zeros(topo.sig(cell).outputs)),
        });
        Ok(SyncBuild {
            id: "square/four-end".into(),
            kind: ModelKind::Square,
            n,
            topo,
            program: arc(prog),
            start,
            predicted: n as u64,
            general_cell: 0,
        })
    }
}

impl Program for FourEnd {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let mut out = PortWords::zeros(sig.outputs);
        let any_wake = Port::ALL
            .iter()
            .any(|&p| matches!(parse(input.word_or_zero(p)), Some(Ok(_))));

        let set = |out: &mut PortWords, port: Port, word: u128| {
            if sig.has_output(port) {
                out.set(port, word);
            }
        };

        let res = match state {
            F => (F, out),
            s if (C_START..C_START + 4).contains(&s) => {
                if any_wake {
                    (F, out)
                } else {
                    (C_WAIT, out)
                }
            }
            C_WAIT => {
                if any_wake {
                    (F, out)
                } else {
                    (C_WAIT, out)
                }
            }
            L => {
                if input.is_all_zero() {
                    return Ok((L, out));
                }
                // Collect arriving wakes per axis and spawn ids.
                let mut ids: u128 = 0;
                let mut wakes: Vec<(Port, Wake)> = Vec::new();
                for p in Port::ALL {
                    match parse(input.word_or_zero(p)) {
                        Some(Ok(w)) => wakes.push((p, w)),
                        Some(Err(s)) => ids |= s,
                        None => {}
                    }
                }
                if ids != 0 {
                    // Spawned as a next-frame corner. A full union is the
                    // innermost single cell; anything but a single identity
                    // or the full set cannot arise in a legal run.
                    if !wakes.is_empty() {
                        return Err(missing(self, usize::MAX, state, input));
                    }
                    if ids == ALL_IDS {
                        return Ok((F, out)); // innermost single cell
                    }
                    if ids.count_ones() != 1 {
                        return Err(missing(self, usize::MAX, state, input));
                    }
                    let id = ids.trailing_zeros() as u128;
                    for (port, hi) in corner_wakes(id) {
                        set(&mut out, port, wake(id, hi, 1));
                    }
                    return Ok((C_WAIT, out));
                }
                // Forward wakes and possibly spawn; one wake => side member,
                // two opposite wakes => this is the side's crossing cell.
                let mut spawn_ids: u128 = 0;
                let mut spawn_port = None;
                let mut hops = Vec::new();
                for (p, w) in &wakes {
                    let (fwd, axis_col) = match p {
                        Port::Left => (Port::Right, false),
                        Port::Right => (Port::Left, false),
                        Port::Up => (Port::Down, true),
                        Port::Down => (Port::Up, true),
                    };
                    set(&mut out, fwd, wake(w.id, w.inward_hi, w.hop + 1));
                    if w.hop == 1 {
                        spawn_ids |= 1 << w.id;
                        spawn_port = Some(inward_port(axis_col, w.inward_hi));
                    }
                    hops.push(w.hop);
                }
                if let (Some(p), true) = (spawn_port, spawn_ids != 0) {
                    set(&mut out, p, spawn_word(spawn_ids));
                }
                match wakes.as_slice() {
                    [(p, w)] => {
                        let axis_col = matches!(p, Port::Up | Port::Down);
                        let from_hi = matches!(p, Port::Right | Port::Down);
                        let slot = (axis_col as State) * 2 + from_hi as State;
                        (HALF + slot * HOPF + w.hop as State, out)
                    }
                    [_, _] => {
                        let m = *hops.iter().min().unwrap() as State;
                        (COUNT + m, out)
                    }
                    _ => return Err(missing(self, usize::MAX, state, input)),
                }
            }
            s if (HALF..HALF + 4 * HOPF).contains(&s) => {
                let slot = (s - HALF) / HOPF;
                let m = (s - HALF) % HOPF;
                let (axis_col, from_hi) = (slot / 2 == 1, slot % 2 == 1);
                // The second wake arrives from the opposite direction.
                let expect = match (axis_col, from_hi) {
                    (false, false) => Port::Right,
                    (false, true) => Port::Left,
                    (true, false) => Port::Down,
                    (true, true) => Port::Up,
                };
                match parse(input.word_or_zero(expect)) {
                    Some(Ok(w)) => {
                        let fwd = expect.opposite();
                        set(&mut out, fwd, wake(w.id, w.inward_hi, w.hop + 1));
                        if w.hop == 1 {
                            set(
                                &mut out,
                                inward_port(axis_col, w.inward_hi),
                                spawn_word(1 << w.id),
                            );
                        }
                        (COUNT + m, out)
                    }
                    None if input.is_all_zero() => (s, out),
                    _ => return Err(missing(self, usize::MAX, state, input)),
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
            s if (C_START..=C_WAIT).contains(&s) => StateClass::General,
            _ => StateClass::Other,
        }
    }

    fn describe(&self, state: State) -> String {
        match state {
            L => "L".into(),
            F => "F".into(),
            s if (C_START..C_START + 4).contains(&s) => format!("G{}", s - C_START),
            C_WAIT => "Gw".into(),
            s if (HALF..HALF + 4 * HOPF).contains(&s) => {
                format!("h{}:{}", (s - HALF) / HOPF, (s - HALF) % HOPF)
            }
            s if s >= COUNT => format!("c{}", s - COUNT),
            s => format!("?{s}"),
        }
    }

    fn state_bound(&self) -> State {
        COUNT + HOPF
    }
}
