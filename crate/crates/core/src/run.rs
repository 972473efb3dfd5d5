//! Run bookkeeping shared by the heuristics: budgets, the incumbent tracker
//! and the per-run record.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::instance::Cost;
use crate::solution::Solution;

/// Algorithm variants compared by the experiment harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Local search with scan orders fixed at their initial draw.
    LsNoseq,
    /// Local search with double-bridge re-sequencing.
    LsSeq,
    /// Multi-start tabu search with re-sequencing.
    TabuSeq,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::LsNoseq, Algorithm::LsSeq, Algorithm::TabuSeq];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::LsNoseq => "ls_noseq",
            Algorithm::LsSeq => "ls_seq",
            Algorithm::TabuSeq => "tabu_seq",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected ls_noseq, ls_seq or tabu_seq)"))
    }
}

/// Stopping budget of a multi-start run. The budget is checked between
/// starts only: a descent in progress always runs to its local optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    /// Wall-clock seconds.
    Seconds(f64),
    /// Work units: every start and every applied move consumes one.
    /// Runs under this budget are bit-for-bit reproducible.
    Iterations(u64),
}

/// Best solution of a run, with the time it was first reached.
#[derive(Debug, Clone)]
pub struct Incumbent {
    started: Instant,
    best: Solution,
    best_value: Cost,
    tb_seconds: f64,
    pending: bool,
    moves: u64,
}

impl Incumbent {
    pub fn new(initial: &Solution) -> Self {
        Incumbent {
            started: Instant::now(),
            best: initial.clone(),
            best_value: initial.objective(),
            tb_seconds: 0.0,
            pending: false,
            moves: 0,
        }
    }

    /// Best objective seen so far, including a not yet settled improvement
    /// of the current descent.
    pub fn value(&self) -> Cost {
        self.best_value
    }

    pub fn tb_seconds(&self) -> f64 {
        self.tb_seconds
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    /// Applied moves so far.
    pub fn moves(&self) -> u64 {
        self.moves
    }

    /// Registers one applied move that led to `current`.
    pub fn note_move(&mut self, current: &Solution) {
        self.moves += 1;
        self.observe(current);
    }

    /// Registers a new current objective. Descents only ever improve, so the
    /// solution copy is deferred until [`Incumbent::settle`].
    pub fn observe(&mut self, current: &Solution) {
        if current.objective() > self.best_value {
            self.best_value = current.objective();
            self.tb_seconds = self.elapsed();
            self.pending = true;
        }
    }

    /// Copies `current` if it holds the pending best. Call before `current`
    /// can get worse.
    pub fn settle(&mut self, current: &Solution) {
        if self.pending {
            debug_assert_eq!(current.objective(), self.best_value);
            self.best = current.clone();
            self.pending = false;
        }
    }

    pub fn best(&self) -> &Solution {
        debug_assert!(!self.pending, "unsettled incumbent");
        &self.best
    }

    pub fn into_best(self) -> Solution {
        debug_assert!(!self.pending, "unsettled incumbent");
        self.best
    }

    /// True once `budget` is used up after `starts` starts.
    pub fn exhausted(&self, budget: Budget, starts: u64) -> bool {
        match budget {
            Budget::Seconds(s) => self.elapsed() >= s,
            Budget::Iterations(n) => self.moves + starts >= n,
        }
    }
}

/// One solver execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Best-found objective.
    pub bfs: Cost,
    /// Seconds until `bfs` was first reached.
    pub tb_seconds: f64,
    /// Applied moves.
    pub iterations: u64,
    pub starts: u64,
    pub wall_seconds: f64,
}
