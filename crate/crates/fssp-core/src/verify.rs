//! Exact verification: firing times checked by simulation, parameter sweeps,
//! lower-bound consistency and embedding-schedule oracles.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Configuration;
use crate::engine::{step, Trace};
use crate::error::BuildError;
use crate::program::State;
use crate::sync::SyncBuild;
use crate::topology::ModelKind;

/// Outcome of checking one build at one size.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub n: usize,
    pub predicted: u64,
    pub observed: Option<u64>,
    /// An F appeared somewhere before the predicted time: (cell, time).
    pub early_firing: Option<(usize, u64)>,
    /// Max bits used on any link over the run.
    pub max_bits: u32,
    pub capacity: u32,
    pub quiescence_violations: usize,
    pub horizon: u64,
    pub pass: bool,
}

/// Simulates the build to `2 t(n) + 4` and checks the firing contract: no
/// cell in F before `t(n)`, all cells in F at `t(n)`, horizon not exhausted.
/// Streaming: nothing is retained beyond two configurations.
pub fn check_sync(build: &SyncBuild) -> CheckOutcome {
    let horizon = build.horizon();
    let prog = build.program.as_ref();
    let mut cur = build.start.clone();
    let mut observed = None;
    let mut early = None;
    let mut max_bits = 0;
    let mut quiescence_violations = 0;

    loop {
        let t = cur.time;
        max_bits = max_bits.max(cur.outs.iter().map(|o| o.max_bits()).max().unwrap_or(0));
        let firing: Vec<bool> = cur.states.iter().map(|&s| prog.is_firing(s)).collect();
        if firing.iter().all(|&f| f) {
            if observed.is_none() {
                observed = Some(t);
            }
        } else if observed.is_none() && t < build.predicted {
            if let Some(cell) = firing.iter().position(|&f| f) {
                early.get_or_insert((cell, t));
            }
        }
        if t >= horizon || (observed.is_some() && t >= build.predicted) {
            break;
        }
        let next = match step(&build.topo, prog, &cur) {
            Ok(c) => c,
            Err(_) => break,
        };
        // Quiescence audit on the fly.
        for cell in 0..build.topo.cells() {
            if prog.is_quiescent(cur.states[cell]) {
                let fed = crate::topology::Port::ALL.iter().any(|&p| {
                    build
                        .topo
                        .route(cell, p)
                        .map(|(src, sp)| cur.outs[src].word_or_zero(sp) != 0)
                        .unwrap_or(false)
                });
                if !fed && (next.states[cell] != cur.states[cell] || !next.outs[cell].is_all_zero()) {
                    quiescence_violations += 1;
                }
            }
        }
        cur = next;
    }

    let pass = observed == Some(build.predicted)
        && early.is_none()
        && quiescence_violations == 0
        && max_bits <= build.capacity();
    CheckOutcome {
        id: build.id.clone(),
        n: build.n,
        predicted: build.predicted,
        observed,
        early_firing: early,
        max_bits,
        capacity: build.capacity(),
        quiescence_violations,
        horizon,
        pass,
    }
}

/// Aggregate of a sweep over sizes.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub outcomes: Vec<CheckOutcome>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.pass)
    }
}

/// Runs `factory` over every `n` in `range` (inclusive), in parallel, with
/// deterministic ordering of the report.
pub fn sweep(
    id: &str,
    range: impl IntoIterator<Item = usize>,
    factory: impl Fn(usize) -> Result<SyncBuild, BuildError> + Sync,
) -> Result<VerificationReport, BuildError> {
    let sizes: Vec<usize> = range.into_iter().collect();
    assert!(!sizes.is_empty(), "empty sweep range");
    let builds: Result<Vec<SyncBuild>, BuildError> = sizes.iter().map(|&n| factory(n)).collect();
    let builds = builds?;
    let mut outcomes: Vec<CheckOutcome> = builds.par_iter().map(check_sync).collect();
    outcomes.sort_by_key(|o| o.n);
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(VerificationReport {
        id: id.to_string(),
        outcomes,
        pass,
    })
}

/// The proven minimal synchronization time of each model, used only as a
/// consistency target: constructed times must never undercut it and the
/// minimal builds must meet it exactly.
pub fn lower_bound(kind: ModelKind, n: u64) -> u64 {
    match kind {
        ModelKind::Line | ModelKind::Square => 2 * n - 1,
        ModelKind::Ring | ModelKind::SquareOfRings => n + 1,
        ModelKind::ORing => 2 * n,
        ModelKind::SquareOfORings => 3 * n - 1,
    }
}

/// The three circular simulation schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// `stato_B(i+t, 2t) = stato_A(i, t)` on a one-way ring.
    ORingDouble,
    /// `stato_B(i+t-1, 2t-1) = stato_A(i, t)` on a two-way ring.
    RingDoubleMinusOne,
    /// `stato_B(i+t, k+t, 3t) = stato_A(i, k, t)` on a one-way torus.
    TorusTriple,
}

/// Checks an embedding schedule site-for-site, comparing the source trace
/// against the simulated states extracted from the target trace by
/// `extract`. Returns the first mismatch if any.
pub fn embedding_oracle(
    source: &Trace,
    target: &Trace,
    schedule: Schedule,
    extract: &dyn Fn(State) -> Option<State>,
) -> Result<(), (usize, u64)> {
    let n = source.topo.n();
    let cells = source.topo.cells();
    for t in 1..=source.last_time() {
        let bt = match schedule {
            Schedule::ORingDouble => 2 * t,
            Schedule::RingDoubleMinusOne => 2 * t - 1,
            Schedule::TorusTriple => 3 * t,
        };
        if bt > target.last_time() {
            break;
        }
        let shift = match schedule {
            Schedule::RingDoubleMinusOne => (t - 1) as usize,
            _ => t as usize,
        };
        for cell in 0..cells {
            let target_cell = match schedule {
                Schedule::TorusTriple => {
                    let (i, k) = source.topo.coords(cell);
                    ((i + shift) % n) * n + (k + shift) % n
                }
                _ => (cell + shift) % n,
            };
            let got = extract(target.state(target_cell, bt));
            if got != Some(source.state(cell, t)) {
                return Err((cell, t));
            }
        }
    }
    Ok(())
}

/// Builds a start configuration check: every registered build must start
/// standardly shaped (used in tests).
pub fn start_is_silent_except_general(build: &SyncBuild) -> bool {
    build
        .start
        .outs
        .iter()
        .enumerate()
        .all(|(c, o)| c == build.general_cell || o.is_all_zero() || !build.program.is_quiescent(build.start.states[c]))
}

/// Convenience: run a build and return the full trace (small instances).
pub fn run_build(build: &SyncBuild, horizon: Option<u64>) -> Result<Trace, crate::error::StepError> {
    crate::engine::run(
        &build.topo,
        build.program.as_ref(),
        build.start.clone(),
        horizon.unwrap_or_else(|| build.horizon()),
        crate::engine::RunOptions::default(),
    )
}

/// Clone helper for configurations (used by the CLI).
pub fn clone_start(build: &SyncBuild) -> Configuration {
    build.start.clone()
}
