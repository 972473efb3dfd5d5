//! Paired runs on generated instances: same instance, seed and work budget
//! for each algorithm.

use flp4::bench::run_algorithm;
use flp4::instance::{generate, GenParams, Instance};
use flp4::run::{Algorithm, Budget};

const BUDGET: Budget = Budget::Iterations(20_000);

fn instances() -> Vec<Instance> {
    (0..10)
        .map(|seed| generate(&GenParams::with_sizes(200, 30, 50, 150).with_seed(1000 + seed)).unwrap())
        .collect()
}

fn bfs(inst: &Instance, algorithm: Algorithm, seed: u64) -> i64 {
    run_algorithm(inst, algorithm, seed, Some(BUDGET), None).1.bfs
}

#[test]
fn tabu_matches_or_beats_local_search() {
    for (i, inst) in instances().iter().enumerate() {
        let seed = i as u64;
        let ls = bfs(inst, Algorithm::LsSeq, seed);
        let tabu = bfs(inst, Algorithm::TabuSeq, seed);
        assert!(tabu >= ls, "{}: tabu {tabu} < ls {ls}", inst.name());
    }
}

#[test]
fn resequencing_helps_local_search_on_average() {
    let diffs: Vec<i64> = instances()
        .iter()
        .enumerate()
        .map(|(i, inst)| bfs(inst, Algorithm::LsSeq, i as u64) - bfs(inst, Algorithm::LsNoseq, i as u64))
        .collect();
    let mean = diffs.iter().sum::<i64>() as f64 / diffs.len() as f64;
    assert!(mean >= 0.0, "{diffs:?}");
}
