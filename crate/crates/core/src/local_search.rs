//! Greedy first-improvement local search over the five single-store moves,
//! with optional double-bridge re-sequencing of the scan orders.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::run::{Algorithm, Budget, Incumbent, RunRecord};
use crate::search::{descend, sweep, Improving};
use crate::sequence::{diversify, random_sequences, SequenceSet};
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq)]
pub struct LsConfig {
    pub seed: u64,
    /// Re-sequence the scan orders during and between descents.
    pub diversify: bool,
    /// `None` runs a single descent from the empty solution. With a budget,
    /// descents restart from the empty solution under fresh sequences until
    /// the budget is spent.
    pub budget: Option<Budget>,
    /// Cap on sweeps per descent.
    pub max_passes: Option<usize>,
}

impl LsConfig {
    pub fn new(seed: u64) -> Self {
        LsConfig {
            seed,
            diversify: true,
            budget: None,
            max_passes: None,
        }
    }

    pub fn without_diversification(mut self) -> Self {
        self.diversify = false;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn algorithm(&self) -> Algorithm {
        if self.diversify {
            Algorithm::LsSeq
        } else {
            Algorithm::LsNoseq
        }
    }
}

/// One full sweep with re-sequencing; returns whether anything improved.
pub fn improve_pass<R: Rng + ?Sized>(inst: &Instance, sol: &mut Solution, seqs: &mut SequenceSet, rng: &mut R) -> bool {
    let mut inc = Incumbent::new(sol);
    let improved = sweep(inst, sol, seqs, rng, true, &mut Improving, &mut inc);
    inc.settle(sol);
    improved
}

/// Runs the local search and returns the best solution found with its run
/// record.
pub fn run_local_search(inst: &Instance, config: &LsConfig) -> (Solution, RunRecord) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seqs = random_sequences(inst, &mut rng);
    let empty = Solution::empty(inst);
    let mut inc = Incumbent::new(&empty);
    let mut starts = 0u64;
    loop {
        let mut sol = empty.clone();
        descend(
            inst,
            &mut sol,
            &mut seqs,
            &mut rng,
            config.diversify,
            &mut Improving,
            &mut inc,
            config.max_passes,
        );
        starts += 1;
        let Some(budget) = config.budget else { break };
        // without re-sequencing every restart would replay the first descent
        if !config.diversify || inc.exhausted(budget, starts) {
            break;
        }
        seqs = diversify(&seqs, &mut rng);
    }
    let record = RunRecord {
        instance: inst.name().to_string(),
        algorithm: config.algorithm(),
        seed: config.seed,
        bfs: inc.value(),
        tb_seconds: inc.tb_seconds(),
        iterations: inc.moves(),
        starts,
        wall_seconds: inc.elapsed(),
    };
    (inc.into_best(), record)
}
