use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn flp4(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flp4"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("flp4 runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, dims: [&str; 4], seed: &str) {
    let out = flp4(
        &[
            "gen", "--m", dims[0], "--n", dims[1], "--k", dims[2], "--j", dims[3], "--seed", seed, "--out", name,
        ],
        dir,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing_m = flp4(
        &["gen", "--n", "2", "--k", "2", "--j", "2", "--out", "x.json"],
        dir.path(),
    );
    assert_eq!(code(&missing_m), 2);
    let bad_density = flp4(
        &[
            "gen",
            "--m",
            "5",
            "--n",
            "2",
            "--k",
            "2",
            "--j",
            "2",
            "--density",
            "1.5",
            "--out",
            "x.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&bad_density), 2);
    let bad_range = flp4(
        &[
            "gen",
            "--m",
            "5",
            "--n",
            "2",
            "--k",
            "2",
            "--j",
            "2",
            "--revenue-range",
            "9",
            "--out",
            "x.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&bad_range), 2);
    assert_eq!(
        code(&flp4(
            &["solve", "--algo", "anneal", "--instance", "x.json"],
            dir.path()
        )),
        2
    );
    assert_eq!(code(&flp4(&["stats"], dir.path())), 2);
    let zero_budget = flp4(
        &["solve", "--algo", "ls", "--instance", "x.json", "--budget-iters", "0"],
        dir.path(),
    );
    assert_eq!(code(&zero_budget), 2);
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn io_and_parse_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&flp4(&["exact", "--instance", "nope.json"], dir.path())), 4);
    fs::write(dir.path().join("junk.json"), "{not json").unwrap();
    assert_eq!(
        code(&flp4(&["solve", "--algo", "ls", "--instance", "junk.json"], dir.path())),
        4
    );
    assert_eq!(code(&flp4(&["stats", "--log", "missing.csv"], dir.path())), 4);
}

#[test]
fn size_guards_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "big.json", ["40", "3", "3", "3"], "1");
    let exact = flp4(&["exact", "--instance", "big.json"], dir.path());
    assert_eq!(code(&exact), 3);
    assert!(String::from_utf8_lossy(&exact.stderr).contains("error"));
}

#[test]
fn solve_writes_record_and_solution() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "inst.json", ["60", "4", "5", "8"], "9");
    for algo in ["ls", "ls-noseq", "tabu", "ls_seq", "tabu_seq"] {
        let out = flp4(
            &[
                "solve",
                "--algo",
                algo,
                "--instance",
                "inst.json",
                "--seed",
                "2",
                "--budget-iters",
                "800",
                "--out-solution",
                "sol.json",
                "--out-record",
                "rec.json",
            ],
            dir.path(),
        );
        // snake names are not accepted on the command line
        if algo.contains('_') {
            assert_eq!(code(&out), 2);
            continue;
        }
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let rec: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        let saved: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("rec.json")).unwrap()).unwrap();
        assert_eq!(rec, saved);
        assert!(rec["bfs"].as_i64().unwrap() >= 0);
        assert!(rec["iterations"].as_u64().unwrap() <= 800);
        assert!(dir.path().join("sol.json").exists());
    }
}

#[test]
fn exact_and_export_on_a_tiny_instance() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "tiny.json", ["6", "2", "3", "3"], "4");
    let out = flp4(
        &["exact", "--instance", "tiny.json", "--out-solution", "opt.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let best: i64 = stdout(&out).trim().parse().unwrap();
    assert!(best >= 0);

    let solved = flp4(
        &[
            "solve",
            "--algo",
            "tabu",
            "--instance",
            "tiny.json",
            "--budget-iters",
            "500",
        ],
        dir.path(),
    );
    let rec: serde_json::Value = serde_json::from_str(stdout(&solved).trim()).unwrap();
    assert!(rec["bfs"].as_i64().unwrap() <= best);

    assert_eq!(
        code(&flp4(
            &["export-ip", "--instance", "tiny.json", "--out", "m.lp"],
            dir.path()
        )),
        0
    );
    let lp = fs::read_to_string(dir.path().join("m.lp")).unwrap();
    assert!(lp.lines().any(|l| l == "Maximize"));
    assert!(lp.trim_end().ends_with("End"));
}

#[test]
fn bench_then_stats() {
    let dir = tempfile::tempdir().unwrap();
    let plan = r#"{
        "instances": [{"generate": {"m": 80, "n": 5, "k": 6, "j": 10, "seed": 1}},
                      {"generate": {"m": 80, "n": 5, "k": 6, "j": 10, "seed": 2}},
                      {"file": "missing.json"}],
        "algorithms": [{"algorithm": "ls_noseq", "budget": {"iterations": 500}},
                       {"algorithm": "ls_seq", "budget": {"iterations": 500}},
                       {"algorithm": "tabu_seq", "budget": {"iterations": 500}}],
        "runs_per_instance": 3
    }"#;
    fs::write(dir.path().join("plan.json"), plan).unwrap();
    let out = flp4(
        &["bench", "--plan", "plan.json", "--out", "log.csv", "--threads", "2"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // a second run appends without repeating the header
    assert_eq!(
        code(&flp4(&["bench", "--plan", "plan.json", "--out", "log.csv"], dir.path())),
        0
    );
    let log = fs::read_to_string(dir.path().join("log.csv")).unwrap();
    assert_eq!(log.lines().count(), 1 + 2 * 27);
    assert_eq!(log.lines().filter(|l| l.starts_with("instance,")).count(), 1);
    assert_eq!(log.lines().filter(|l| l.contains("error:")).count(), 2 * 9);

    let stats = flp4(&["stats", "--log", "log.csv", "--out", "report.csv"], dir.path());
    assert_eq!(code(&stats), 0);
    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(report.as_bytes());
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    // three comparisons, one size group, two metrics
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| &r[1] == "80-5-6-10"));

    assert_eq!(
        code(&flp4(
            &["bench", "--plan", "plan.json", "--out", "x.csv", "--threads", "0"],
            dir.path()
        )),
        2
    );
}

#[test]
fn fixture_reports_go_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    for table in ["table1", "table2"] {
        let out = flp4(&["stats", "--fixture", table], dir.path());
        assert_eq!(code(&out), 0);
        let text = stdout(&out);
        assert!(text.starts_with("comparison,group,metric,n,mean_diff,stdev,pct,t,F,wilcoxon_p,wilcoxon_exact"));
        assert_eq!(text.lines().count(), 11);
    }
}

#[test]
fn gen_sets_bounds_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = flp4(
        &[
            "gen", "--m", "2000", "--n", "30", "--k", "50", "--j", "150", "--seed", "7", "--out", "a.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bounds stores 400 plants 6 warehouses 10 dcs 30"));
    gen(dir.path(), "b.json", ["2000", "30", "50", "150"], "7");
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
}

#[test]
fn small_fixtures_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    flp4::fixtures::t1().save(dir.path().join("t1.json")).unwrap();
    flp4::fixtures::t1_prime().save(dir.path().join("t1p.json")).unwrap();
    assert_eq!(
        stdout(&flp4(&["exact", "--instance", "t1.json"], dir.path())).trim(),
        "45"
    );
    let out = flp4(
        &["solve", "--algo", "tabu", "--instance", "t1p.json", "--seed", "1"],
        dir.path(),
    );
    let rec: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(rec["bfs"], 65);
}

#[test]
fn tabu_not_below_ls_with_same_seed_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "inst.json", ["300", "30", "50", "150"], "12");
    let bfs = |algo: &str| {
        let out = flp4(
            &[
                "solve",
                "--algo",
                algo,
                "--instance",
                "inst.json",
                "--seed",
                "5",
                "--budget-iters",
                "10000",
            ],
            dir.path(),
        );
        serde_json::from_str::<serde_json::Value>(stdout(&out).trim()).unwrap()["bfs"]
            .as_i64()
            .unwrap()
    };
    assert!(bfs("tabu") >= bfs("ls"));
}
