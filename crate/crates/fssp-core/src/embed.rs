//! Model-to-model simulations.
//!
//! A line computation runs on a one-way ring with a delay factor of two and
//! on a two-way ring in `2t - 1`: the simulated pattern drifts one cell per
//! simulated step while states are forwarded, two transmissions per step. A
//! square computation runs on a one-way torus with a factor of three. The
//! relays carry "units": a simulated state, the words it sent, and its end
//! flags.

use crate::error::{BuildError, StepError};
use crate::program::{missing, PortWords, Program, ProgramRef, State, StateClass};
use crate::sync::{arc, start_config, SyncBuild};
use crate::topology::{ModelKind, Port, PortSig, Topology};

// ---------------------------------------------------------------------------
// 1-D line relays (one-way ring x2; two-way ring x2-1)

#[derive(Clone, Copy)]
struct Codec1 {
    qb: State,
    w: u128,
}

/// (simulated state, sent words, end flags) for a line cell.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Unit1 {
    q: State,
    wl: u128,
    wr: u128,
    leftmost: bool,
    rightmost: bool,
}

impl Codec1 {
    fn new(inner: &dyn Program) -> Codec1 {
        let w = 1u128 << inner.capacity();
        let qb = inner.state_bound();
        let bits = (128 - (qb - 1).leading_zeros()) + 2 * inner.capacity() + 2;
        assert!(bits <= 60, "line program too wide to relay");
        Codec1 { qb, w }
    }

    fn bound(&self) -> u128 {
        self.qb * self.w * self.w * 4
    }

    fn pack(&self, u: Unit1) -> u128 {
        let flags = u.leftmost as u128 | ((u.rightmost as u128) << 1);
        (((u.q * self.w) + u.wl) * self.w + u.wr) * 4 + flags
    }

    fn unpack(&self, v: u128) -> Unit1 {
        Unit1 {
            leftmost: v & 1 != 0,
            rightmost: v & 2 != 0,
            wr: (v / 4) % self.w,
            wl: (v / 4 / self.w) % self.w,
            q: v / 4 / self.w / self.w,
        }
    }
}

impl Unit1 {
    fn sig(&self) -> PortSig {
        let mut mask = 0u8;
        if !self.leftmost {
            mask |= Port::Left.mask();
        }
        if !self.rightmost {
            mask |= Port::Right.mask();
        }
        PortSig { inputs: mask, outputs: mask }
    }

    fn from_start(build: &SyncBuild, cell: usize) -> Unit1 {
        Unit1 {
            q: build.start.states[cell],
            wl: build.start.outs[cell].word_or_zero(Port::Left),
            wr: build.start.outs[cell].word_or_zero(Port::Right),
            leftmost: cell == 0,
            rightmost: cell == build.n - 1,
        }
    }
}

/// Which circular schedule the relay realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayKind {
    /// One-way ring in `2 t(n)`: line cell `i` at ring cell `i + t`, time `2t`.
    ORingDouble,
    /// Two-way ring in `2 t(n) - 1`: line cell `i` at ring cell `i + t - 1`,
    /// time `2t - 1`.
    RingDoubleMinusOne,
}

// State encodings (per packed-unit bound UB):
//   HOLD(u)      = u * TAGS + 0
//   MID(u, ul)   = (u * UB + ul) * TAGS + 1
//   GEN          = 2   (one-way prologue)
//   PRE_MID      = 3   (two-way general's first step)
const TAGS: State = 4;
const T_HOLD: State = 0;
const T_MID: State = 1;
const E_GEN: State = 2;
const E_PRE_MID: State = 3;

const W_SINGLE: u128 = 1;
const W_PAIR: u128 = 2;
const W_SEED: u128 = 3;

pub struct LineRelay {
    inner: ProgramRef,
    codec: Codec1,
    capacity: u32,
    /// The simulated rightmost start cell, adopted by the General.
    gen_hold: Unit1,
    /// The simulated leftmost start cell (the General's own start).
    gen_self: Unit1,
}

impl LineRelay {
    fn new(src: &SyncBuild) -> LineRelay {
        assert_eq!(src.kind, ModelKind::Line);
        let codec = Codec1::new(src.program.as_ref());
        let ub_bits = 128 - (codec.bound() - 1).leading_zeros();
        LineRelay {
            inner: src.program.clone(),
            codec,
            capacity: 2 + 2 * ub_bits,
            gen_hold: Unit1::from_start(src, src.n - 1),
            gen_self: Unit1::from_start(src, 0),
        }
    }

    fn hold(&self, u: Unit1) -> State {
        self.codec.pack(u) * TAGS + T_HOLD
    }

    fn mid(&self, u: Unit1, ul: Unit1) -> State {
        (self.codec.pack(u) * self.codec.bound() + self.codec.pack(ul)) * TAGS + T_MID
    }

    /// The simulated state held at a simulation-time configuration.
    pub fn held(&self, s: State) -> Option<State> {
        if s == E_PRE_MID {
            return Some(self.gen_self.q);
        }
        if s == E_GEN {
            return None;
        }
        (s % TAGS == T_HOLD).then(|| self.codec.unpack(s / TAGS).q)
    }

    fn single(&self, u: Unit1) -> u128 {
        (self.codec.pack(u) << 2) | W_SINGLE
    }

    fn pair(&self, left: Unit1, slf: Unit1) -> u128 {
        ((self.codec.pack(left) * self.codec.bound() + self.codec.pack(slf)) << 2) | W_PAIR
    }

    /// One simulated step of the unit that becomes this cell's next holding.
    fn advance(&self, prev: Unit1, left_in: u128, right_in: u128) -> Result<Unit1, StepError> {
        if prev == Unit1::default() && left_in == 0 && right_in == 0 {
            return Ok(prev);
        }
        let sig = prev.sig();
        let mut input = PortWords::empty();
        if sig.has_input(Port::Left) {
            input.set(Port::Left, left_in);
        }
        if sig.has_input(Port::Right) {
            input.set(Port::Right, right_in);
        }
        let (q, out) = self.inner.step(sig, prev.q, &input)?;
        Ok(Unit1 {
            q,
            wl: out.word_or_zero(Port::Left),
            wr: out.word_or_zero(Port::Right),
            leftmost: prev.leftmost,
            rightmost: prev.rightmost,
        })
    }

    fn emit_single(&self, sig: PortSig, u: Unit1) -> PortWords {
        let mut out = PortWords::zeros(sig.outputs);
        if u != Unit1::default() {
            out.set(Port::Right, self.single(u));
        }
        out
    }

    /// One-way ring running `src` (a Line build over the same `n`) in `2t`.
    pub fn build_oring(src: &SyncBuild, id: &str) -> Result<SyncBuild, BuildError> {
        let n = src.n;
        let topo = Topology::new(ModelKind::ORing, n)?;
        let relay = LineRelay::new(src);
        let seed = (relay.codec.pack(Unit1::from_start(src, 0)) << 2) | W_SEED;
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                (E_GEN, PortWords::empty().with(Port::Right, seed))
            } else {
                (T_HOLD, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        Ok(SyncBuild {
            id: id.into(),
            kind: ModelKind::ORing,
            n,
            topo,
            program: arc(relay),
            start,
            predicted: 2 * src.predicted,
            general_cell: 0,
        })
    }

    /// Two-way ring running `src` in `2t - 1`.
    pub fn build_ring(src: &SyncBuild, id: &str) -> Result<SyncBuild, BuildError> {
        let n = src.n;
        let topo = Topology::new(ModelKind::Ring, n)?;
        let relay = LineRelay::new(src);
        let single = relay.single(Unit1::from_start(src, 0));
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                (E_PRE_MID, PortWords::zeros(topo.sig(cell).outputs).with(Port::Right, single))
            } else {
                (T_HOLD, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        Ok(SyncBuild {
            id: id.into(),
            kind: ModelKind::Ring,
            n,
            topo,
            program: arc(relay),
            start,
            predicted: 2 * src.predicted - 1,
            general_cell: 0,
        })
    }
}

impl Program for LineRelay {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let ub = self.codec.bound();
        let win = input.word_or_zero(Port::Left);
        let tag = win & 0b11;
        let payload = win >> 2;

        if state == E_GEN {
            // One-way prologue: adopt the simulated rightmost start cell.
            let u = self.gen_hold;
            return Ok((self.hold(u), self.emit_single(sig, u)));
        }
        if state == E_PRE_MID {
            // Two-way general's first forwarding step: its next target is
            // the simulated rightmost cell, paired in from the start data.
            let u = self.gen_self;
            let ul = self.gen_hold;
            let mut out = PortWords::zeros(sig.outputs);
            out.set(Port::Right, self.pair(ul, u));
            return Ok((self.mid(u, ul), out));
        }
        match state % TAGS {
            T_HOLD => {
                let u = self.codec.unpack(state / TAGS);
                match tag {
                    0 if win == 0 => {
                        if u == Unit1::default() {
                            Ok((state, PortWords::zeros(sig.outputs)))
                        } else {
                            let ul = Unit1::default();
                            let mut out = PortWords::zeros(sig.outputs);
                            out.set(Port::Right, self.pair(ul, u));
                            Ok((self.mid(u, ul), out))
                        }
                    }
                    W_SINGLE | W_SEED => {
                        let ul = self.codec.unpack(payload);
                        if tag == W_SEED {
                            // One-way prologue: adopt the simulated leftmost
                            // start cell outright.
                            return Ok((self.hold(ul), self.emit_single(sig, ul)));
                        }
                        let mut out = PortWords::zeros(sig.outputs);
                        out.set(Port::Right, self.pair(ul, u));
                        Ok((self.mid(u, ul), out))
                    }
                    W_PAIR => {
                        let p_left = self.codec.unpack(payload / ub);
                        let p_self = self.codec.unpack(payload % ub);
                        let next = self.advance(p_self, p_left.wr, u.wl)?;
                        Ok((self.hold(next), self.emit_single(sig, next)))
                    }
                    _ => Err(missing(self, usize::MAX, state, input)),
                }
            }
            T_MID => {
                let packed = state / TAGS;
                let u = self.codec.unpack(packed / ub);
                let ul = self.codec.unpack(packed % ub);
                let p_left = match tag {
                    W_PAIR => self.codec.unpack(payload / ub),
                    0 if win == 0 => Unit1::default(),
                    _ => return Err(missing(self, usize::MAX, state, input)),
                };
                let next = self.advance(ul, p_left.wr, u.wl)?;
                Ok((self.hold(next), self.emit_single(sig, next)))
            }
            _ => Err(missing(self, usize::MAX, state, input)),
        }
    }

    fn is_firing(&self, state: State) -> bool {
        self.held(state).map(|q| self.inner.is_firing(q)).unwrap_or(false)
    }

    fn is_quiescent(&self, state: State) -> bool {
        state == T_HOLD
    }

    fn class(&self, state: State) -> StateClass {
        match self.held(state) {
            Some(q) => self.inner.class(q),
            None => StateClass::Other,
        }
    }

    fn describe(&self, state: State) -> String {
        match self.held(state) {
            Some(q) => format!("[{}]", self.inner.describe(q)),
            None if state == E_GEN => "gen".into(),
            None => "mid".into(),
        }
    }

    fn state_bound(&self) -> State {
        self.codec.bound() * self.codec.bound() * TAGS
    }
}

// ---------------------------------------------------------------------------
// 2-D torus relay (Square -> Square of ORings, x3)

/// (simulated state, four sent words) for a square cell. The embedded
/// program must be insensitive to port signatures (roles travel in states).
#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Unit2 {
    q: State,
    w: [u128; 4], // indexed by Port
}

#[derive(Clone, Copy)]
struct Codec2 {
    qb: State,
    w: u128,
}

impl Codec2 {
    fn new(inner: &dyn Program) -> Codec2 {
        let w = 1u128 << inner.capacity();
        let qb = inner.state_bound();
        let bits = (128 - (qb - 1).leading_zeros()) + 4 * inner.capacity();
        assert!(bits <= 58, "square program too wide to relay");
        Codec2 { qb, w }
    }

    fn bound(&self) -> u128 {
        self.qb * self.w * self.w * self.w * self.w
    }

    fn pack(&self, u: Unit2) -> u128 {
        let mut v = u.q;
        for i in 0..4 {
            v = v * self.w + u.w[i];
        }
        v
    }

    fn unpack(&self, mut v: u128) -> Unit2 {
        let mut w = [0u128; 4];
        for i in (0..4).rev() {
            w[i] = v % self.w;
            v /= self.w;
        }
        Unit2 { q: v, w }
    }
}

impl Unit2 {
    fn from_start(build: &SyncBuild, cell: usize) -> Unit2 {
        let mut w = [0u128; 4];
        for p in Port::ALL {
            w[p.index()] = build.start.outs[cell].word_or_zero(p);
        }
        Unit2 {
            q: build.start.states[cell],
            w,
        }
    }

    fn word(&self, p: Port) -> u128 {
        self.w[p.index()]
    }
}

const T2_HOLD: State = 0;
const T2_MID1: State = 1;
const T2_MID2: State = 2;
const E2_GEN: State = 3;
const E2_PRE: State = 4;
const E2_FIRE: State = 5;
const TAGS2: State = 8;

const W2_SINGLE: u128 = 1;
const W2_PAIR: u128 = 2;
const W2_CWORD: u128 = 3;
const W2_SEED: u128 = 4;

/// One-way torus executing a square program with a delay factor of three;
/// optionally fires one step early by recomputing a neighbor's transition
/// (the refinement used by the minimal-time build).
pub struct TorusRelay {
    inner: ProgramRef,
    codec: Codec2,
    capacity: u32,
    lookahead: bool,
    seed_tr: Unit2,
    seed_bl: Unit2,
    seed_br: Unit2,
    seed_tl: Unit2,
}

impl TorusRelay {
    fn new(src: &SyncBuild, lookahead: bool) -> TorusRelay {
        assert_eq!(src.kind, ModelKind::Square);
        let n = src.n;
        let codec = Codec2::new(src.program.as_ref());
        let unit_bits = 128 - (codec.bound() - 1).leading_zeros();
        let capacity = 4 + 2 * unit_bits;
        assert!(capacity <= 127, "torus relay words too wide");
        TorusRelay {
            inner: src.program.clone(),
            codec,
            capacity,
            lookahead,
            seed_tl: Unit2::from_start(src, 0),
            seed_tr: Unit2::from_start(src, n - 1),
            seed_bl: Unit2::from_start(src, (n - 1) * n),
            seed_br: Unit2::from_start(src, n * n - 1),
        }
    }

    fn hold(&self, u: Unit2) -> State {
        self.codec.pack(u) * TAGS2 + T2_HOLD
    }

    fn mid1(&self, su: Unit2, sl: Unit2) -> State {
        (self.codec.pack(su) * self.codec.bound() + self.codec.pack(sl)) * TAGS2 + T2_MID1
    }

    fn mid2(&self, cq: State, cd: u128, cr: u128, dw: u128, rw: u128) -> State {
        let w = self.codec.w;
        ((((cq * w + cd) * w + cr) * w + dw) * w + rw) * TAGS2 + T2_MID2
    }

    pub fn held(&self, s: State) -> Option<State> {
        match s % TAGS2 {
            T2_HOLD => Some(self.codec.unpack(s / TAGS2).q),
            _ => None,
        }
    }

    fn single(&self, u: Unit2) -> u128 {
        (self.codec.pack(u) << 3) | W2_SINGLE
    }

    fn pair(&self, su: Unit2, sl: Unit2) -> u128 {
        (((self.codec.pack(su) * self.codec.bound()) + self.codec.pack(sl)) << 3) | W2_PAIR
    }

    fn cword(&self, w: u128) -> u128 {
        (w << 3) | W2_CWORD
    }

    fn seed(&self, u: Unit2, cont: bool) -> u128 {
        ((self.codec.pack(u) << 1 | cont as u128) << 3) | W2_SEED
    }

    fn advance(&self, q: State, uw: u128, lw: u128, dw: u128, rw: u128) -> Result<Unit2, StepError> {
        if q == 0 && uw == 0 && lw == 0 && dw == 0 && rw == 0 {
            return Ok(Unit2::default());
        }
        let sig = PortSig { inputs: 0xf, outputs: 0xf };
        let mut input = PortWords::zeros(0xf);
        input.set(Port::Up, uw);
        input.set(Port::Left, lw);
        input.set(Port::Down, dw);
        input.set(Port::Right, rw);
        let (nq, out) = self.inner.step(sig, q, &input)?;
        let mut w = [0u128; 4];
        for p in Port::ALL {
            w[p.index()] = out.word_or_zero(p);
        }
        Ok(Unit2 { q: nq, w })
    }

    /// Candidate transition with assumed-zero unknown inputs; fires only on a
    /// provable firing successor.
    fn fires(&self, q: State, uw: u128, lw: u128, dw: u128, rw: u128) -> bool {
        self.advance(q, uw, lw, dw, rw)
            .map(|u| self.inner.is_firing(u.q))
            .unwrap_or(false)
    }

    fn emit_single(&self, sig: PortSig, u: Unit2) -> PortWords {
        let mut out = PortWords::zeros(sig.outputs);
        if u != Unit2::default() {
            let w = self.single(u);
            out.set(Port::Down, w);
            out.set(Port::Right, w);
        }
        out
    }

    /// Build: run `src` (a Square build) on a one-way torus of the same `n`.
    pub fn build(src: &SyncBuild, lookahead: bool, id: &str) -> Result<SyncBuild, BuildError> {
        let n = src.n;
        let topo = Topology::new(ModelKind::SquareOfORings, n)?;
        let relay = TorusRelay::new(src, lookahead);
        let seed_down = relay.seed(relay.seed_tr, true);
        let seed_right = relay.seed(relay.seed_bl, true);
        let start = start_config(&topo, |cell| {
            if cell == 0 {
                (
                    E2_GEN,
                    PortWords::empty()
                        .with(Port::Down, seed_down)
                        .with(Port::Right, seed_right),
                )
            } else {
                (T2_HOLD, PortWords::zeros(topo.sig(cell).outputs))
            }
        });
        let predicted = 3 * src.predicted - lookahead as u64;
        Ok(SyncBuild {
            id: id.into(),
            kind: ModelKind::SquareOfORings,
            n,
            topo,
            program: arc(relay),
            start,
            predicted,
            general_cell: 0,
        })
    }
}

impl Program for TorusRelay {
    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn step(&self, sig: PortSig, state: State, input: &PortWords) -> Result<(State, PortWords), StepError> {
        let ub = self.codec.bound();
        let wu = input.word_or_zero(Port::Up);
        let wl = input.word_or_zero(Port::Left);
        let (tu, tl) = (wu & 0b111, wl & 0b111);
        let (pu, pl) = (wu >> 3, wl >> 3);
        let out0 = PortWords::zeros(sig.outputs);

        match state {
            E2_FIRE => return Ok((E2_FIRE, out0)),
            E2_GEN => return Ok((self.codec.pack(self.seed_br) * TAGS2 + E2_PRE, out0)),
            s if s % TAGS2 == E2_PRE => {
                let u = self.codec.unpack(s / TAGS2);
                return Ok((self.hold(u), self.emit_single(sig, u)));
            }
            _ => {}
        }

        // Seed handling (prologue): adopt a corner unit; continue the chain
        // toward the diagonal cell.
        if tu == W2_SEED || tl == W2_SEED {
            let (payload, from_up) = if tu == W2_SEED { (pu, true) } else { (pl, false) };
            let cont = payload & 1 == 1;
            let u = self.codec.unpack(payload >> 1);
            let mut out = out0;
            if cont {
                let port = if from_up { Port::Right } else { Port::Down };
                out.set(port, self.seed(self.seed_tl, false));
                return Ok((self.codec.pack(u) * TAGS2 + E2_PRE, out));
            }
            return Ok((self.hold(u), self.emit_single(sig, u)));
        }

        match state % TAGS2 {
            T2_HOLD => {
                let u = self.codec.unpack(state / TAGS2);
                match (tu, tl) {
                    (0, 0) if wu == 0 && wl == 0 => {
                        if u == Unit2::default() {
                            Ok((state, out0))
                        } else {
                            Ok((self.mid1(Unit2::default(), Unit2::default()), out0))
                        }
                    }
                    _ if tu == W2_SINGLE || tl == W2_SINGLE => {
                        let su = (tu == W2_SINGLE).then(|| self.codec.unpack(pu)).unwrap_or_default();
                        let sl = (tl == W2_SINGLE).then(|| self.codec.unpack(pl)).unwrap_or_default();
                        let mut out = out0;
                        if su != Unit2::default() || sl != Unit2::default() {
                            let w = self.pair(su, sl);
                            out.set(Port::Down, w);
                            out.set(Port::Right, w);
                        }
                        Ok((self.mid1(su, sl), out))
                    }
                    _ if tu == W2_PAIR || tl == W2_PAIR => {
                        // Joined late; singles were silent.
                        self.mid1_step(Unit2::default(), Unit2::default(), wu, wl, sig)
                    }
                    _ if tu == W2_CWORD || tl == W2_CWORD => {
                        let uw = (tu == W2_CWORD).then_some(pu).unwrap_or(0);
                        let lw = (tl == W2_CWORD).then_some(pl).unwrap_or(0);
                        let next = self.advance(0, uw, lw, 0, 0)?;
                        Ok((self.hold(next), self.emit_single(sig, next)))
                    }
                    _ => Err(missing(self, usize::MAX, state, input)),
                }
            }
            T2_MID1 => {
                let packed = state / TAGS2;
                let su = self.codec.unpack(packed / ub);
                let sl = self.codec.unpack(packed % ub);
                self.mid1_step(su, sl, wu, wl, sig)
            }
            T2_MID2 => {
                let w = self.codec.w;
                let mut v = state / TAGS2;
                let rw = v % w;
                v /= w;
                let dw = v % w;
                v /= w;
                let cr = v % w;
                v /= w;
                let cd = v % w;
                let cq = v / w;
                let uw = (tu == W2_CWORD).then_some(pu).unwrap_or(0);
                let lw = (tl == W2_CWORD).then_some(pl).unwrap_or(0);
                let _ = (cd, cr);
                let next = self.advance(cq, uw, lw, dw, rw)?;
                Ok((self.hold(next), self.emit_single(sig, next)))
            }
            _ => Err(missing(self, usize::MAX, state, input)),
        }
    }

    fn is_firing(&self, state: State) -> bool {
        if state == E2_FIRE {
            return true;
        }
        self.held(state).map(|q| self.inner.is_firing(q)).unwrap_or(false)
    }

    fn is_quiescent(&self, state: State) -> bool {
        state == T2_HOLD
    }

    fn class(&self, state: State) -> StateClass {
        if state == E2_FIRE {
            return StateClass::Firing;
        }
        match self.held(state) {
            Some(q) => self.inner.class(q),
            None => StateClass::Other,
        }
    }

    fn describe(&self, state: State) -> String {
        match self.held(state) {
            Some(q) => format!("[{}]", self.inner.describe(q)),
            None => format!("relay{}", state % TAGS2),
        }
    }

    fn state_bound(&self) -> State {
        self.codec.bound() * self.codec.bound() * TAGS2
    }
}

impl TorusRelay {
    fn mid1_step(
        &self,
        su: Unit2,
        sl: Unit2,
        wu: u128,
        wl: u128,
        sig: PortSig,
    ) -> Result<(State, PortWords), StepError> {
        let (tu, tl) = (wu & 0b111, wl & 0b111);
        let (pu, pl) = (wu >> 3, wl >> 3);
        let ub = self.codec.bound();
        let pair_up = (tu == W2_PAIR).then(|| {
            let v = pu;
            (self.codec.unpack(v / ub), self.codec.unpack(v % ub))
        });
        let pair_left = (tl == W2_PAIR).then(|| {
            let v = pl;
            (self.codec.unpack(v / ub), self.codec.unpack(v % ub))
        });
        if !(tu == W2_PAIR || tu == 0) || !(tl == W2_PAIR || tl == 0) {
            return Err(missing(self, usize::MAX, T2_MID1, &PortWords::empty()));
        }

        let c = pair_up
            .map(|(_, c)| c)
            .or(pair_left.map(|(c, _)| c))
            .unwrap_or_default();
        let diag_up = pair_up.map(|(d, _)| d).unwrap_or_default();
        let diag_dn = pair_left.map(|(_, d)| d).unwrap_or_default();

        if self.lookahead {
            let fire = self.fires(c.q, 0, 0, sl.word(Port::Up), su.word(Port::Left))
                || self.fires(su.q, diag_up.word(Port::Down), c.word(Port::Right), 0, 0)
                || self.fires(sl.q, c.word(Port::Down), diag_dn.word(Port::Right), 0, 0);
            if fire {
                return Ok((E2_FIRE, PortWords::zeros(sig.outputs)));
            }
        }

        let mut out = PortWords::zeros(sig.outputs);
        if c.word(Port::Down) != 0 {
            out.set(Port::Down, self.cword(c.word(Port::Down)));
        }
        if c.word(Port::Right) != 0 {
            out.set(Port::Right, self.cword(c.word(Port::Right)));
        }
        Ok((
            self.mid2(c.q, c.word(Port::Down), c.word(Port::Right), sl.word(Port::Up), su.word(Port::Left)),
            out,
        ))
    }
}
