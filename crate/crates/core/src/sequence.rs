//! Scan orders over stores, plants, warehouses and dcs, and the
//! double-bridge perturbation that re-sequences them between sweeps.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::Instance;

/// Four scan-order permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSet {
    pub stores: Vec<usize>,
    pub plants: Vec<usize>,
    pub warehouses: Vec<usize>,
    pub dcs: Vec<usize>,
}

fn shuffled<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..len).collect();
    v.shuffle(rng);
    v
}

/// Four independent uniform permutations.
pub fn random_sequences<R: Rng + ?Sized>(inst: &Instance, rng: &mut R) -> SequenceSet {
    SequenceSet {
        stores: shuffled(inst.num_stores(), rng),
        plants: shuffled(inst.num_plants(), rng),
        warehouses: shuffled(inst.num_warehouses(), rng),
        dcs: shuffled(inst.num_dcs(), rng),
    }
}

/// Splits `perm` at `0 < a < b < c < len` into `A|B|C|D` and returns
/// `A|C|B|D`.
pub fn double_bridge_at(perm: &[usize], cuts: (usize, usize, usize)) -> Vec<usize> {
    let (a, b, c) = cuts;
    assert!(0 < a && a < b && b < c && c < perm.len(), "invalid cut points {cuts:?}");
    let mut out = Vec::with_capacity(perm.len());
    out.extend_from_slice(&perm[..a]);
    out.extend_from_slice(&perm[b..c]);
    out.extend_from_slice(&perm[a..b]);
    out.extend_from_slice(&perm[c..]);
    out
}

/// One double bridge with three distinct cut points drawn uniformly from
/// `1..len`. Permutations shorter than 4 come back unchanged.
pub fn double_bridge<R: Rng + ?Sized>(perm: &[usize], rng: &mut R) -> Vec<usize> {
    if perm.len() < 4 {
        return perm.to_vec();
    }
    let mut cuts: Vec<usize> = index::sample(rng, perm.len() - 1, 3)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    cuts.sort_unstable();
    double_bridge_at(perm, (cuts[0], cuts[1], cuts[2]))
}

/// Applies one double bridge to each of the four sequences.
pub fn diversify<R: Rng + ?Sized>(seqs: &SequenceSet, rng: &mut R) -> SequenceSet {
    SequenceSet {
        stores: double_bridge(&seqs.stores, rng),
        plants: double_bridge(&seqs.plants, rng),
        warehouses: double_bridge(&seqs.warehouses, rng),
        dcs: double_bridge(&seqs.dcs, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::{generate, GenParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn is_perm(v: &[usize]) -> bool {
        let mut s = v.to_vec();
        s.sort_unstable();
        s.iter().enumerate().all(|(i, &x)| i == x)
    }

    #[test]
    fn bridge_example() {
        let perm = [1, 2, 3, 4, 5, 6, 7, 8];
        assert_eq!(double_bridge_at(&perm, (2, 4, 6)), vec![1, 2, 5, 6, 3, 4, 7, 8]);
    }

    #[test]
    fn short_input_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(double_bridge(&[2, 0, 1], &mut rng), vec![2, 0, 1]);
        assert_eq!(double_bridge(&[], &mut rng), Vec::<usize>::new());
    }

    #[test]
    fn single_store_sequence() {
        let inst = fixtures::t1();
        let mut parts = inst.into_parts();
        parts.sizes.m = 1;
        parts.revenue.truncate(1);
        parts.fixed.store.truncate(1);
        parts.eligibility.truncate(1);
        parts.ds_arcs.remove(&(0, 1));
        let inst = Instance::new(parts).unwrap();
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(random_sequences(&inst, &mut rng).stores, vec![0]);
        }
    }

    #[test]
    fn seeded_sequences_repeat() {
        let inst = generate(&GenParams::with_sizes(30, 5, 6, 7)).unwrap();
        let a = random_sequences(&inst, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_sequences(&inst, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let mut ra = ChaCha8Rng::seed_from_u64(3);
        let mut rb = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(diversify(&a, &mut ra), diversify(&a, &mut rb));
    }

    #[test]
    fn three_store_permutations_are_uniform() {
        let mut parts = fixtures::t1().into_parts();
        parts.sizes.m = 3;
        parts.revenue.push(1);
        parts.fixed.store.push(1);
        parts.eligibility.push(vec![]);
        let inst = Instance::new(parts).unwrap();
        let draws = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(random_sequences(&inst, &mut rng).stores).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let expected = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for (perm, &c) in &counts {
            assert!((c as f64 - expected).abs() <= 3.0 * sigma, "{perm:?}: {c}");
        }
    }

    #[test]
    fn diversify_preserves_permutations() {
        let inst = generate(&GenParams::with_sizes(25, 4, 9, 5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seqs = random_sequences(&inst, &mut rng);
        for _ in 0..1000 {
            seqs = diversify(&seqs, &mut rng);
            assert!(is_perm(&seqs.stores) && is_perm(&seqs.plants));
            assert!(is_perm(&seqs.warehouses) && is_perm(&seqs.dcs));
        }
    }
}
