use flp4::bench::{run_plan, AlgorithmSpec, BenchPlan, InstanceSource};
use flp4::instance::{generate, GenParams};
use flp4::run::{Algorithm, Budget};
use flp4::solution::{evaluate, Solution};

#[test]
fn logged_bfs_matches_persisted_solution() {
    let dir = tempfile::tempdir().unwrap();
    let params: Vec<GenParams> = (0..3)
        .map(|s| GenParams::with_sizes(90, 6, 8, 12).with_seed(s))
        .collect();
    let plan = BenchPlan {
        instances: params.iter().cloned().map(InstanceSource::Generate).collect(),
        algorithms: Algorithm::ALL
            .iter()
            .map(|&algorithm| AlgorithmSpec {
                algorithm,
                budget: Some(Budget::Iterations(1_500)),
                max_starts: None,
            })
            .collect(),
        runs_per_instance: 2,
        seed_base: 7,
        threads: Some(2),
        solutions_dir: Some("sols".into()),
    };
    let rows = run_plan(&plan, dir.path()).unwrap();
    assert_eq!(rows.len(), 3 * Algorithm::ALL.len() * 2);
    for row in &rows {
        assert!(row.is_ok(), "{row:?}");
        let inst = generate(
            params
                .iter()
                .find(|p| row.instance.ends_with(&format!("-{}", p.seed)))
                .unwrap(),
        )
        .unwrap();
        assert_eq!(inst.name(), row.instance);
        let file = dir
            .path()
            .join("sols")
            .join(format!("{}-{}-{}.json", row.instance, row.algorithm, row.seed));
        let sol = Solution::load(&inst, file).unwrap();
        assert_eq!(Some(evaluate(&inst, sol.assignment()).unwrap()), row.bfs);
    }
}
