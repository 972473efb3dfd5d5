//! Sweep engine shared by the local search and the tabu search.
//!
//! One sweep has two phases. The first walks the stores in sequence order
//! and tries to close each open store or open each closed one, taking the
//! first admissible opening path in dc / warehouse / plant sequence order.
//! The sequences are then perturbed. The second phase walks the stores again
//! and, for every open store, tries a dc swap, then a warehouse swap, then a
//! plant swap, each taking the first strictly improving target in sequence
//! order. The sequences are perturbed once more at the end.

use rand::Rng;

use crate::delta::{
    apply_move, delta_close_store, delta_open_store, delta_swap_dc, delta_swap_plant, delta_swap_warehouse, MoveDelta,
    MoveKind,
};
use crate::instance::{Cost, Instance, Level};
use crate::run::Incumbent;
use crate::sequence::{diversify, SequenceSet};
use crate::solution::{Path, Solution};

/// Acceptance rule for store flips (close/open). Swaps are always accepted
/// when strictly improving.
pub(crate) trait FlipRule {
    fn admits(&self, store: usize, delta: Cost, current: Cost, best: Cost) -> bool;

    fn accepted(&mut self, kind: MoveKind, store: usize);
}

/// Plain descent: any strictly improving flip.
pub(crate) struct Improving;

impl FlipRule for Improving {
    fn admits(&self, _store: usize, delta: Cost, _current: Cost, _best: Cost) -> bool {
        delta > 0
    }

    fn accepted(&mut self, _kind: MoveKind, _store: usize) {}
}

fn commit<F: FlipRule>(inst: &Instance, sol: &mut Solution, mv: &MoveDelta, rule: &mut F, inc: &mut Incumbent) {
    apply_move(inst, sol, mv).expect("move evaluated against the current solution");
    rule.accepted(mv.kind, mv.store);
    inc.note_move(sol);
}

/// First admissible opening of a closed store in dc / warehouse / plant
/// sequence order.
pub(crate) fn first_opening<F: FlipRule>(
    inst: &Instance,
    sol: &Solution,
    seqs: &SequenceSet,
    store: usize,
    rule: &F,
    best: Cost,
) -> Option<MoveDelta> {
    let bounds = inst.bounds();
    if sol.open_count(Level::Store) >= bounds.stores {
        return None;
    }
    let current = sol.objective();
    for &dc in &seqs.dcs {
        if inst.ds_cost(dc, store).is_none() {
            continue;
        }
        for &warehouse in &seqs.warehouses {
            if inst.wd_cost(warehouse, dc).is_none() {
                continue;
            }
            for &plant in &seqs.plants {
                if !inst.is_eligible(store, plant) || inst.pw_cost(plant, warehouse).is_none() {
                    continue;
                }
                let Ok(mv) = delta_open_store(inst, sol, store, Path { plant, warehouse, dc }) else {
                    continue;
                };
                if rule.admits(store, mv.profit_delta, current, best) {
                    return Some(mv);
                }
            }
        }
    }
    None
}

fn first_improving_swap(candidates: &[usize], mut eval: impl FnMut(usize) -> Option<MoveDelta>) -> Option<MoveDelta> {
    candidates
        .iter()
        .filter_map(|&c| eval(c))
        .find(|mv| mv.profit_delta > 0)
}

/// One two-phase sweep. Returns whether any move was applied.
pub(crate) fn sweep<R: Rng + ?Sized, F: FlipRule>(
    inst: &Instance,
    sol: &mut Solution,
    seqs: &mut SequenceSet,
    rng: &mut R,
    resequence: bool,
    rule: &mut F,
    inc: &mut Incumbent,
) -> bool {
    let mut improved = false;

    // open / close
    for pos in 0..seqs.stores.len() {
        let store = seqs.stores[pos];
        let mv = if sol.is_open(store) {
            delta_close_store(inst, sol, store)
                .ok()
                .filter(|mv| rule.admits(store, mv.profit_delta, sol.objective(), inc.value()))
        } else {
            first_opening(inst, sol, seqs, store, rule, inc.value())
        };
        if let Some(mv) = mv {
            commit(inst, sol, &mv, rule, inc);
            improved = true;
        }
    }

    if resequence {
        *seqs = diversify(seqs, rng);
    }

    // reroute
    for pos in 0..seqs.stores.len() {
        let store = seqs.stores[pos];
        if !sol.is_open(store) {
            continue;
        }
        if let Some(mv) = first_improving_swap(&seqs.dcs, |dc| delta_swap_dc(inst, sol, store, dc).ok()) {
            commit(inst, sol, &mv, rule, inc);
            improved = true;
        }
        if let Some(mv) = first_improving_swap(&seqs.warehouses, |wh| delta_swap_warehouse(inst, sol, store, wh).ok()) {
            commit(inst, sol, &mv, rule, inc);
            improved = true;
        }
        if let Some(mv) = first_improving_swap(&seqs.plants, |p| delta_swap_plant(inst, sol, store, p).ok()) {
            commit(inst, sol, &mv, rule, inc);
            improved = true;
        }
    }

    if resequence {
        *seqs = diversify(seqs, rng);
    }

    improved
}

/// Sweeps until a sweep applies nothing or `max_sweeps` is hit. Returns the
/// number of sweeps and whether the cap stopped the descent.
#[allow(clippy::too_many_arguments)]
pub(crate) fn descend<R: Rng + ?Sized, F: FlipRule>(
    inst: &Instance,
    sol: &mut Solution,
    seqs: &mut SequenceSet,
    rng: &mut R,
    resequence: bool,
    rule: &mut F,
    inc: &mut Incumbent,
    max_sweeps: Option<usize>,
) -> (usize, bool) {
    let mut sweeps = 0;
    loop {
        let improved = sweep(inst, sol, seqs, rng, resequence, rule, inc);
        sweeps += 1;
        if !improved {
            inc.settle(sol);
            return (sweeps, false);
        }
        if max_sweeps.is_some_and(|cap| sweeps >= cap) {
            inc.settle(sol);
            return (sweeps, true);
        }
    }
}
