//! Multi-start tabu search.
//!
//! Each start runs a descent in which store flips are subject to a tabu
//! list: a flip is taken when it improves the current objective and the
//! store is not tabu, or when it beats the best objective of the whole run
//! (aspiration). Facility swaps are never tabu. Between starts the best
//! solution is shaken by a random number of store flips and the scan
//! orders are re-sequenced.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::delta::{apply_move, delta_close_store, delta_open_store, MoveDelta, MoveKind};
use crate::instance::{reachable_stores, Cost, Instance, Level};
use crate::run::{Algorithm, Budget, Incumbent, RunRecord};
use crate::search::{descend, first_opening, FlipRule, Improving};
use crate::sequence::{diversify, random_sequences, SequenceSet};
use crate::solution::{feasible_paths, Solution};

/// Tabu memory over stores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabuState {
    expiry: Vec<u64>,
    tenure: u64,
    iteration: u64,
}

/// `max(1, round(0.025 * m))`.
pub fn default_tenure(num_stores: usize) -> usize {
    ((0.025 * num_stores as f64).round() as usize).max(1)
}

/// `(1, max(2, round(0.05 * m)))`.
pub fn default_shake_range(num_stores: usize) -> (usize, usize) {
    (1, ((0.05 * num_stores as f64).round() as usize).max(2))
}

impl TabuState {
    pub fn new(num_stores: usize, tenure: usize) -> Self {
        assert!(tenure > 0, "tenure must be positive");
        TabuState {
            expiry: vec![0; num_stores],
            tenure: tenure as u64,
            iteration: 0,
        }
    }

    pub fn for_instance(inst: &Instance) -> Self {
        TabuState::new(inst.num_stores(), default_tenure(inst.num_stores()))
    }

    pub fn tenure(&self) -> usize {
        self.tenure as usize
    }

    /// Accepted moves so far.
    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn is_tabu(&self, store: usize) -> bool {
        self.iteration < self.expiry[store]
    }

    /// Iteration up to which flipping `store` is tabu.
    pub fn expiry(&self, store: usize) -> u64 {
        self.expiry[store]
    }

    /// Flip acceptance: improving and not tabu, or better than the best
    /// objective of the run.
    pub fn admits(&self, store: usize, delta: Cost, current: Cost, best: Cost) -> bool {
        let candidate = current + delta;
        (candidate > current && !self.is_tabu(store)) || candidate > best
    }

    /// Counts one accepted move; a flipped store becomes tabu for the next
    /// `tenure` accepted moves.
    pub fn record(&mut self, kind: MoveKind, store: usize) {
        self.iteration += 1;
        if kind.is_flip() {
            self.expiry[store] = self.iteration + self.tenure;
        }
    }
}

impl FlipRule for TabuState {
    fn admits(&self, store: usize, delta: Cost, current: Cost, best: Cost) -> bool {
        TabuState::admits(self, store, delta, current, best)
    }

    fn accepted(&mut self, kind: MoveKind, store: usize) {
        self.record(kind, store);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabuConfig {
    pub seed: u64,
    /// Maximum number of starts.
    pub max_starts: Option<u64>,
    pub budget: Budget,
    /// Shake intensity range; defaults to [`default_shake_range`].
    pub shake: Option<(usize, usize)>,
    pub tenure_override: Option<usize>,
}

impl TabuConfig {
    pub fn new(seed: u64) -> Self {
        TabuConfig {
            seed,
            max_starts: None,
            budget: Budget::Seconds(2.0),
            shake: None,
            tenure_override: None,
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_max_starts(mut self, starts: u64) -> Self {
        self.max_starts = Some(starts);
        self
    }
}

/// Greedy construction: scan stores in sequence order and open each one
/// along its first path (dc / warehouse / plant order) with a positive
/// open delta.
pub fn initial_solution(inst: &Instance, seqs: &SequenceSet) -> Solution {
    let mut sol = Solution::empty(inst);
    for &store in &seqs.stores {
        if let Some(mv) = first_opening(inst, &sol, seqs, store, &Improving, sol.objective()) {
            apply_move(inst, &mut sol, &mv).expect("fresh move");
        }
    }
    sol
}

/// One tabu descent: sweeps until no admissible move remains. The
/// incumbent is updated whenever the current objective exceeds it.
pub fn tabu_descent<R: Rng + ?Sized>(
    inst: &Instance,
    sol: &mut Solution,
    seqs: &mut SequenceSet,
    state: &mut TabuState,
    best: &mut Incumbent,
    rng: &mut R,
) {
    best.observe(sol);
    best.settle(sol);
    descend(inst, sol, seqs, rng, true, state, best, None);
}

/// Applies between `low` and `high` random store flips regardless of their
/// profit effect. The result stays feasible.
pub fn shake<R: Rng + ?Sized>(inst: &Instance, sol: &Solution, rng: &mut R, low: usize, high: usize) -> Solution {
    let reachable: Vec<usize> = reachable_stores(inst).into_iter().collect();
    shake_among(inst, sol, rng, low, high, &reachable, None).0
}

fn random_opening<R: Rng + ?Sized>(
    inst: &Instance,
    sol: &Solution,
    rng: &mut R,
    reachable: &[usize],
) -> Option<MoveDelta> {
    if sol.open_count(Level::Store) >= inst.bounds().stores {
        return None;
    }
    let closed: Vec<usize> = reachable.iter().copied().filter(|&s| !sol.is_open(s)).collect();
    const ATTEMPTS: usize = 16;
    for &store in closed.choose_multiple(rng, ATTEMPTS) {
        let options: Vec<MoveDelta> = feasible_paths(inst, store)
            .into_iter()
            .filter_map(|p| delta_open_store(inst, sol, store, p).ok())
            .collect();
        if let Some(mv) = options.choose(rng) {
            return Some(*mv);
        }
    }
    None
}

/// Returns the shaken solution and the number of flips applied. Flipped
/// stores are recorded in `tabu`, so the next descent cannot simply undo
/// the shake.
fn shake_among<R: Rng + ?Sized>(
    inst: &Instance,
    sol: &Solution,
    rng: &mut R,
    low: usize,
    high: usize,
    reachable: &[usize],
    mut tabu: Option<&mut TabuState>,
) -> (Solution, u64) {
    assert!(low <= high, "shake range {low}..={high} is empty");
    let mut out = sol.clone();
    let flips = rng.gen_range(low..=high);
    let mut applied = 0;
    for _ in 0..flips {
        let open: Vec<usize> = out.open_stores().collect();
        let close_first = open.is_empty() || rng.gen_bool(0.5);
        let mv = if !close_first {
            let store = *open.choose(rng).expect("non-empty");
            Some(delta_close_store(inst, &out, store).expect("store is open"))
        } else {
            random_opening(inst, &out, rng, reachable).or_else(|| {
                open.choose(rng)
                    .map(|&store| delta_close_store(inst, &out, store).expect("store is open"))
            })
        };
        let Some(mv) = mv else { break };
        apply_move(inst, &mut out, &mv).expect("fresh move");
        if let Some(state) = tabu.as_deref_mut() {
            state.record(mv.kind, mv.store);
        }
        applied += 1;
    }
    (out, applied)
}

/// Runs the multi-start tabu search. The first start is built greedily,
/// later ones shake the best solution found so far. The budget is checked
/// between starts.
pub fn run_tabu(inst: &Instance, config: &TabuConfig) -> (Solution, RunRecord) {
    let m = inst.num_stores();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seqs = random_sequences(inst, &mut rng);
    let tenure = config.tenure_override.unwrap_or_else(|| default_tenure(m));
    let mut state = TabuState::new(m, tenure);
    let (low, high) = config.shake.unwrap_or_else(|| default_shake_range(m));
    let reachable: Vec<usize> = reachable_stores(inst).into_iter().collect();

    let empty = Solution::empty(inst);
    let mut inc = Incumbent::new(&empty);
    let mut starts = 0u64;
    let mut extra_moves = 0u64;
    loop {
        let mut sol = if starts == 0 {
            let sol = initial_solution(inst, &seqs);
            extra_moves += sol.open_count(Level::Store) as u64;
            sol
        } else {
            let (sol, applied) = shake_among(inst, inc.best(), &mut rng, low, high, &reachable, Some(&mut state));
            extra_moves += applied;
            sol
        };
        tabu_descent(inst, &mut sol, &mut seqs, &mut state, &mut inc, &mut rng);
        starts += 1;
        let used = inc.moves() + extra_moves;
        let done = match config.budget {
            Budget::Seconds(s) => inc.elapsed() >= s,
            Budget::Iterations(n) => used + starts >= n,
        };
        if done || config.max_starts.is_some_and(|cap| starts >= cap) {
            break;
        }
        seqs = diversify(&seqs, &mut rng);
    }
    let record = RunRecord {
        instance: inst.name().to_string(),
        algorithm: Algorithm::TabuSeq,
        seed: config.seed,
        bfs: inc.value(),
        tb_seconds: inc.tb_seconds(),
        iterations: inc.moves() + extra_moves,
        starts,
        wall_seconds: inc.elapsed(),
    };
    (inc.into_best(), record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{t1, t1_prime};
    use crate::instance::{generate, GenParams};
    use crate::solution::{check_feasibility, Path};

    #[test]
    fn tenure_defaults() {
        assert_eq!(default_tenure(2000), 50);
        assert_eq!(default_tenure(10), 1);
        assert_eq!(default_shake_range(2000), (1, 100));
        assert_eq!(default_shake_range(8), (1, 2));
    }

    #[test]
    fn aspiration_overrides_tabu() {
        let mut state = TabuState::new(3, 5);
        state.record(MoveKind::OpenStore, 1);
        assert!(state.is_tabu(1));
        // improves the current objective but not the best: rejected
        assert!(!state.admits(1, 10, 100, 200));
        // beats the best: accepted despite tabu
        assert!(state.admits(1, 110, 100, 200));
        // a free store only needs to improve
        assert!(state.admits(0, 10, 100, 200));
        assert!(!state.admits(0, 0, 100, 100));
    }

    #[test]
    fn tabu_expires_after_tenure_moves() {
        let mut state = TabuState::new(2, 3);
        state.record(MoveKind::CloseStore, 0);
        for _ in 0..2 {
            state.record(MoveKind::SwapDc, 1);
            assert!(state.is_tabu(0));
        }
        state.record(MoveKind::SwapDc, 1);
        assert!(!state.is_tabu(0));
        // swaps never make a store tabu
        assert!(!state.is_tabu(1));
    }

    #[test]
    fn initial_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = t1_prime();
        let seqs = SequenceSet {
            stores: vec![0, 1],
            plants: vec![0],
            warehouses: vec![0],
            dcs: vec![0],
        };
        assert_eq!(initial_solution(&inst, &seqs).objective(), 65);
        let inst = t1();
        let seqs = random_sequences(&inst, &mut rng);
        assert_eq!(initial_solution(&inst, &seqs), Solution::empty(&inst));

        let mut parts = t1().into_parts();
        parts.pw_arcs.clear();
        let inst = Instance::new(parts).unwrap();
        assert_eq!(initial_solution(&inst, &seqs), Solution::empty(&inst));
    }

    #[test]
    fn tabu_store_is_skipped_unless_it_beats_the_best() {
        let inst = t1_prime();
        let seqs = SequenceSet {
            stores: vec![0, 1],
            plants: vec![0],
            warehouses: vec![0],
            dcs: vec![0],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);

        // store 1 is tabu; opening it from {0} gives 65, above the best 8
        let mut sol = Solution::from_assignment(&inst, vec![Some(Path::new(0, 0, 0)), None]).unwrap();
        let mut state = TabuState::new(2, 10);
        state.record(MoveKind::CloseStore, 1);
        let mut inc = Incumbent::new(&sol);
        tabu_descent(&inst, &mut sol, &mut seqs.clone(), &mut state, &mut inc, &mut rng);
        assert_eq!(sol.objective(), 65);

        // same state, but a better solution has been seen: the flip only
        // improves the current objective and is rejected
        let mut sol = Solution::from_assignment(&inst, vec![Some(Path::new(0, 0, 0)), None]).unwrap();
        let mut state = TabuState::new(2, 10);
        state.record(MoveKind::CloseStore, 1);
        let richer =
            Solution::from_assignment(&inst, vec![Some(Path::new(0, 0, 0)), Some(Path::new(0, 0, 0))]).unwrap();
        let mut inc = Incumbent::new(&richer);
        tabu_descent(&inst, &mut sol, &mut seqs.clone(), &mut state, &mut inc, &mut rng);
        assert_eq!(sol.objective(), 8);
        assert_eq!(inc.value(), 65);
    }

    #[test]
    fn shake_zero_is_identity() {
        let inst = generate(&GenParams::with_sizes(30, 4, 5, 6).with_seed(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (sol, _) = run_tabu(&inst, &TabuConfig::new(1).with_budget(Budget::Iterations(50)));
        assert_eq!(shake(&inst, &sol, &mut rng, 0, 0), sol);
    }

    #[test]
    fn shake_with_nothing_reachable_is_identity() {
        let mut parts = t1().into_parts();
        parts.ds_arcs.clear();
        let inst = Instance::new(parts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let empty = Solution::empty(&inst);
        assert_eq!(shake(&inst, &empty, &mut rng, 3, 5), empty);
    }

    #[test]
    fn shake_stays_feasible() {
        let inst = generate(&GenParams::with_sizes(40, 4, 5, 6).with_seed(7)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sol = Solution::empty(&inst);
        for _ in 0..10_000 {
            sol = shake(&inst, &sol, &mut rng, 0, 4);
            assert!(check_feasibility(&inst, sol.assignment()).is_feasible());
        }
        assert!(sol.is_consistent(&inst));
    }

    #[test]
    fn run_on_t1_prime_finds_optimum() {
        for seed in 0..5 {
            let (sol, rec) = run_tabu(&t1_prime(), &TabuConfig::new(seed).with_budget(Budget::Iterations(200)));
            assert_eq!((sol.objective(), rec.bfs), (65, 65));
        }
    }

    #[test]
    fn iteration_budget_is_deterministic() {
        let inst = generate(&GenParams::with_sizes(80, 6, 8, 10).with_seed(4)).unwrap();
        let cfg = TabuConfig::new(9).with_budget(Budget::Iterations(1500));
        let (a, ra) = run_tabu(&inst, &cfg);
        let (b, rb) = run_tabu(&inst, &cfg);
        assert_eq!(a, b);
        assert_eq!((ra.bfs, ra.iterations, ra.starts), (rb.bfs, rb.iterations, rb.starts));
        assert_eq!(a.objective(), ra.bfs);
        assert!(a.is_consistent(&inst));
    }

    #[test]
    fn max_starts_caps_the_run() {
        let inst = generate(&GenParams::with_sizes(50, 5, 6, 7).with_seed(4)).unwrap();
        let cfg = TabuConfig::new(3).with_budget(Budget::Seconds(60.0)).with_max_starts(4);
        let (_, rec) = run_tabu(&inst, &cfg);
        assert_eq!(rec.starts, 4);
    }
}
