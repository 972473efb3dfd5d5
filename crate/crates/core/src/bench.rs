//! Experiment harness: seeded run matrices, append-only run logs, the
//! bundled reference result tables and the comparison report built from
//! either source.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{generate, Cost, GenParams, Instance, InstanceError};
use crate::local_search::{run_local_search, LsConfig};
use crate::run::{Algorithm, Budget, RunRecord};
use crate::solution::Solution;
use crate::stats::{anova_f, descriptive, paired_t, wilcoxon_signed_rank, PairedSample};
use crate::tabu_search::{run_tabu, TabuConfig};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("cannot build thread pool: {0}")]
    Threads(String),
}

/// Runs one algorithm. Local search without a budget performs a single
/// descent; tabu search defaults to two seconds.
pub fn run_algorithm(
    inst: &Instance,
    algorithm: Algorithm,
    seed: u64,
    budget: Option<Budget>,
    max_starts: Option<u64>,
) -> (Solution, RunRecord) {
    match algorithm {
        Algorithm::LsNoseq | Algorithm::LsSeq => {
            let mut cfg = LsConfig::new(seed);
            if algorithm == Algorithm::LsNoseq {
                cfg = cfg.without_diversification();
            }
            cfg.budget = budget;
            run_local_search(inst, &cfg)
        }
        Algorithm::TabuSeq => {
            let mut cfg = TabuConfig::new(seed);
            if let Some(b) = budget {
                cfg.budget = b;
            }
            cfg.max_starts = max_starts;
            run_tabu(inst, &cfg)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceSource {
    /// Instance file; relative paths resolve against the plan's directory.
    File(PathBuf),
    Generate(GenParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub budget: Option<Budget>,
    #[serde(default)]
    pub max_starts: Option<u64>,
}

fn default_runs() -> u64 {
    15
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchPlan {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_runs")]
    pub runs_per_instance: u64,
    #[serde(default)]
    pub seed_base: u64,
    /// Worker threads; `None` uses all cores.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Directory receiving every best solution as
    /// `{instance}-{algorithm}-{seed}.json`, relative to the plan's directory.
    #[serde(default)]
    pub solutions_dir: Option<PathBuf>,
}

impl BenchPlan {
    pub fn check(&self) -> Result<(), BenchError> {
        if self.runs_per_instance == 0 {
            return Err(BenchError::Plan("runs_per_instance must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(BenchError::Plan("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<FsPath>) -> Result<Self, BenchError> {
        let plan: BenchPlan = serde_json::from_str(&fs::read_to_string(path)?)?;
        plan.check()?;
        Ok(plan)
    }
}

/// One run-log line. Failed cells carry only identification and status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub bfs: Option<Cost>,
    pub tb_seconds: Option<f64>,
    pub iterations: Option<u64>,
    pub wall_seconds: Option<f64>,
    pub status: String,
}

impl LogRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn from_record(r: &RunRecord) -> Self {
        LogRow {
            instance: r.instance.clone(),
            algorithm: r.algorithm,
            seed: r.seed,
            bfs: Some(r.bfs),
            tb_seconds: Some(r.tb_seconds),
            iterations: Some(r.iterations),
            wall_seconds: Some(r.wall_seconds),
            status: "ok".into(),
        }
    }

    fn failed(instance: &str, algorithm: Algorithm, seed: u64, reason: &str) -> Self {
        LogRow {
            instance: instance.to_string(),
            algorithm,
            seed,
            bfs: None,
            tb_seconds: None,
            iterations: None,
            wall_seconds: None,
            status: format!("error: {}", reason.replace(['\n', '\r'], " ")),
        }
    }
}

fn load_source(src: &InstanceSource, base: &FsPath) -> (String, Result<Instance, InstanceError>) {
    match src {
        InstanceSource::File(p) => {
            let path = if p.is_absolute() { p.clone() } else { base.join(p) };
            let inst = Instance::load(&path);
            let label = match &inst {
                Ok(i) => i.name().to_string(),
                Err(_) => p.display().to_string(),
            };
            (label, inst)
        }
        InstanceSource::Generate(g) => {
            let inst = generate(g);
            let label = match &inst {
                Ok(i) => i.name().to_string(),
                Err(_) => format!("MFL-{}-{}-{}-{}-{}", g.m, g.n, g.k, g.j, g.seed),
            };
            (label, inst)
        }
    }
}

/// Executes every (instance, algorithm, run) cell with seed
/// `seed_base + run`. Rows come back in that canonical order whatever the
/// thread count. Cell failures become error rows.
pub fn run_plan(plan: &BenchPlan, base_dir: impl AsRef<FsPath>) -> Result<Vec<LogRow>, BenchError> {
    use rayon::prelude::*;

    plan.check()?;
    let instances: Vec<(String, Result<Instance, String>)> = plan
        .instances
        .iter()
        .map(|src| {
            let (label, inst) = load_source(src, base_dir.as_ref());
            (label, inst.map_err(|e| e.to_string()))
        })
        .collect();
    let solutions_dir = plan.solutions_dir.as_ref().map(|d| base_dir.as_ref().join(d));
    if let Some(dir) = &solutions_dir {
        fs::create_dir_all(dir)?;
    }

    let mut cells = Vec::new();
    for (i, _) in instances.iter().enumerate() {
        for spec in &plan.algorithms {
            for run in 0..plan.runs_per_instance {
                cells.push((i, spec, plan.seed_base + run));
            }
        }
    }

    let exec = |&(i, spec, seed): &(usize, &AlgorithmSpec, u64)| -> LogRow {
        let (label, inst) = &instances[i];
        let inst = match inst {
            Ok(inst) => inst,
            Err(e) => return LogRow::failed(label, spec.algorithm, seed, e),
        };
        let (sol, rec) = run_algorithm(inst, spec.algorithm, seed, spec.budget, spec.max_starts);
        if let Some(dir) = &solutions_dir {
            let file = dir.join(format!("{}-{}-{}.json", inst.name(), spec.algorithm, seed));
            if let Err(e) = sol.save(inst, &file) {
                return LogRow::failed(label, spec.algorithm, seed, &e.to_string());
            }
        }
        LogRow::from_record(&rec)
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = plan.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| BenchError::Threads(e.to_string()))?;
    Ok(pool.install(|| cells.par_iter().map(exec).collect()))
}

/// Appends `rows` to the run log at `path`, writing the header only when
/// the file is new or empty. Existing rows are never rewritten.
pub fn append_log(path: impl AsRef<FsPath>, rows: &[LogRow]) -> Result<(), BenchError> {
    let path = path.as_ref();
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_log(reader: impl Read) -> Result<Vec<LogRow>, BenchError> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().map(|row| row.map_err(BenchError::from)).collect()
}

pub fn load_log(path: impl AsRef<FsPath>) -> Result<Vec<LogRow>, BenchError> {
    read_log(fs::File::open(path)?)
}

/// Bundled reference results, one row per instance and algorithm pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureTable {
    /// Local search without (a) and with (b) re-sequencing.
    LsSequencing,
    /// Local search (a) and tabu search (b), both re-sequencing.
    TabuVsLs,
}

impl FixtureTable {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "table1" => Some(FixtureTable::LsSequencing),
            "table2" => Some(FixtureTable::TabuVsLs),
            _ => None,
        }
    }

    pub fn algorithms(self) -> (Algorithm, Algorithm) {
        match self {
            FixtureTable::LsSequencing => (Algorithm::LsNoseq, Algorithm::LsSeq),
            FixtureTable::TabuVsLs => (Algorithm::LsSeq, Algorithm::TabuSeq),
        }
    }

    fn data(self) -> &'static str {
        match self {
            FixtureTable::LsSequencing => include_str!("../data/ls_noseq_vs_ls_seq.tsv"),
            FixtureTable::TabuVsLs => include_str!("../data/ls_seq_vs_tabu_seq.tsv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FixtureRow {
    pub instance: String,
    pub bfs_a: Cost,
    pub bfs_b: Cost,
    pub tb_a: f64,
    pub tb_b: f64,
}

pub fn fixture_table(table: FixtureTable) -> Vec<FixtureRow> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .from_reader(table.data().as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.expect("bundled table is well formed");
            FixtureRow {
                instance: rec[0].to_string(),
                bfs_a: rec[1].parse().expect("integer BFS"),
                bfs_b: rec[2].parse().expect("integer BFS"),
                tb_a: rec[3].parse().expect("numeric TB"),
                tb_b: rec[4].parse().expect("numeric TB"),
            }
        })
        .collect()
}

/// Both bundled tables.
pub fn fixture_tables() -> [(FixtureTable, Vec<FixtureRow>); 2] {
    [
        (FixtureTable::LsSequencing, fixture_table(FixtureTable::LsSequencing)),
        (FixtureTable::TabuVsLs, fixture_table(FixtureTable::TabuVsLs)),
    ]
}

/// Size group of an instance name: `MFL-2000-30-50-150-7` belongs to
/// `2000-30-50-150`. Other names form their own group.
pub fn size_group(name: &str) -> String {
    let parts: Vec<&str> = name.split('-').collect();
    let numeric = |s: &&str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if parts.len() == 6 && parts[0] == "MFL" && parts[1..].iter().all(numeric) {
        parts[1..5].join("-")
    } else {
        name.to_string()
    }
}

fn group_key(group: &str) -> (Vec<u64>, String) {
    let nums = group.split('-').map_while(|p| p.parse().ok()).collect();
    (nums, group.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Bfs,
    Tb,
}

/// One report line: statistics of `b - a` over the pairs of a group.
/// Tests that are undefined on the data (zero variance, all-zero
/// differences) are left empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub comparison: String,
    pub group: String,
    pub metric: Metric,
    pub n: usize,
    pub mean_diff: f64,
    pub stdev: f64,
    pub pct: f64,
    pub t: Option<f64>,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    pub wilcoxon_p: Option<f64>,
    pub wilcoxon_exact: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    /// Successful log rows without a partner run.
    pub unpaired: usize,
}

fn comparison_label(a: Algorithm, b: Algorithm) -> String {
    format!("{b}_vs_{a}")
}

fn stat_row(comparison: &str, group: &str, metric: Metric, a: Vec<f64>, b: Vec<f64>) -> Option<ReportRow> {
    let (ga, gb) = (a.clone(), b.clone());
    let sample = PairedSample::new(a, b).ok()?;
    let d = descriptive(&sample);
    let w = wilcoxon_signed_rank(&sample).ok();
    Some(ReportRow {
        comparison: comparison.to_string(),
        group: group.to_string(),
        metric,
        n: sample.len(),
        mean_diff: d.mean_diff,
        stdev: d.stdev_diff,
        pct: d.pct_of_baseline,
        t: paired_t(&sample).ok().map(|t| t.t),
        f: anova_f(&ga, &gb).ok().map(|f| f.f),
        wilcoxon_p: w.map(|w| w.p),
        wilcoxon_exact: w.map(|w| w.exact),
    })
}

/// Pairs `(bfs, tb)` of baseline `a` and candidate `b` per size group.
type Pairs = Vec<((f64, f64), (f64, f64))>;

fn rows_for(comparison: &str, groups: BTreeMap<(Vec<u64>, String), Pairs>) -> Vec<ReportRow> {
    let mut out = Vec::new();
    for ((_, group), pairs) in groups {
        let (bfs_a, bfs_b): (Vec<f64>, Vec<f64>) = pairs.iter().map(|(a, b)| (a.0, b.0)).unzip();
        let (tb_a, tb_b): (Vec<f64>, Vec<f64>) = pairs.iter().map(|(a, b)| (a.1, b.1)).unzip();
        out.extend(stat_row(comparison, &group, Metric::Bfs, bfs_a, bfs_b));
        out.extend(stat_row(comparison, &group, Metric::Tb, tb_a, tb_b));
    }
    out
}

/// Report over a bundled table, one pair per instance.
pub fn report_fixture(table: FixtureTable) -> Report {
    let (a, b) = table.algorithms();
    let mut groups: BTreeMap<_, Pairs> = BTreeMap::new();
    for row in fixture_table(table) {
        let g = size_group(&row.instance);
        groups
            .entry(group_key(&g))
            .or_default()
            .push(((row.bfs_a as f64, row.tb_a), (row.bfs_b as f64, row.tb_b)));
    }
    Report {
        rows: rows_for(&comparison_label(a, b), groups),
        unpaired: 0,
    }
}

/// Comparisons drawn from a run log, baseline first.
pub const LOG_COMPARISONS: [(Algorithm, Algorithm); 3] = [
    (Algorithm::LsNoseq, Algorithm::LsSeq),
    (Algorithm::LsSeq, Algorithm::TabuSeq),
    (Algorithm::LsNoseq, Algorithm::TabuSeq),
];

/// Report over a run log. A pair is two successful runs of the compared
/// algorithms on the same instance with the same seed. Duplicate cells
/// keep their last row.
pub fn report_log(rows: &[LogRow]) -> Report {
    let mut cells: BTreeMap<(String, u64), BTreeMap<Algorithm, (f64, f64)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.is_ok()) {
        let (Some(bfs), Some(tb)) = (r.bfs, r.tb_seconds) else {
            continue;
        };
        cells
            .entry((r.instance.clone(), r.seed))
            .or_default()
            .insert(r.algorithm, (bfs as f64, tb));
    }
    let present: BTreeSet<Algorithm> = cells.values().flat_map(|m| m.keys().copied()).collect();

    let mut report = Report::default();
    let mut paired_cells: BTreeSet<(String, u64, Algorithm)> = BTreeSet::new();
    for (a, b) in LOG_COMPARISONS {
        if !(present.contains(&a) && present.contains(&b)) {
            continue;
        }
        let mut groups: BTreeMap<_, Pairs> = BTreeMap::new();
        for ((inst, seed), algs) in &cells {
            if let (Some(&va), Some(&vb)) = (algs.get(&a), algs.get(&b)) {
                groups.entry(group_key(&size_group(inst))).or_default().push((va, vb));
                paired_cells.insert((inst.clone(), *seed, a));
                paired_cells.insert((inst.clone(), *seed, b));
            }
        }
        report.rows.extend(rows_for(&comparison_label(a, b), groups));
    }
    report.unpaired = cells
        .iter()
        .flat_map(|((inst, seed), algs)| algs.keys().map(move |a| (inst, seed, a)))
        .filter(|(inst, seed, a)| !paired_cells.contains(&((*inst).clone(), **seed, **a)))
        .count();
    report
}

pub fn write_report(report: &Report, out: impl Write) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record([
        "comparison",
        "group",
        "metric",
        "n",
        "mean_diff",
        "stdev",
        "pct",
        "t",
        "F",
        "wilcoxon_p",
        "wilcoxon_exact",
    ])?;
    for row in &report.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(r: &'a Report, group: &str, metric: Metric) -> &'a ReportRow {
        r.rows.iter().find(|x| x.group == group && x.metric == metric).unwrap()
    }

    #[test]
    fn fixture_shapes() {
        let [(_, t1), (_, t2)] = fixture_tables();
        assert_eq!((t1.len(), t2.len()), (50, 50));
        let last = t2.iter().find(|r| r.instance == "MFL-6000-30-50-150-10").unwrap();
        assert_eq!(
            (last.bfs_a, last.bfs_b, last.tb_a, last.tb_b),
            (191798, 193021, 2296.57, 62.328)
        );
        let first = &t1[0];
        assert_eq!(
            (
                first.instance.as_str(),
                first.bfs_a,
                first.bfs_b,
                first.tb_a,
                first.tb_b
            ),
            ("MFL-2000-30-50-150-1", 61630, 62122, 1726.348, 181.595)
        );
        assert!(t1.iter().chain(&t2).all(|r| r.bfs_a > 0 && r.bfs_b > 0));
    }

    #[test]
    fn size_groups() {
        assert_eq!(size_group("MFL-2000-30-50-150-7"), "2000-30-50-150");
        assert_eq!(size_group("T1"), "T1");
        assert_eq!(size_group("MFL-2000-30-50-150"), "MFL-2000-30-50-150");
        assert!(group_key("3000-30-50-150") < group_key("10000-30-50-150"));
    }

    #[test]
    fn fixture_reports() {
        let r = report_fixture(FixtureTable::LsSequencing);
        assert_eq!(r.rows.len(), 10);
        assert_eq!(r.rows[0].group, "2000-30-50-150");
        assert_eq!(r.rows[0].comparison, "ls_seq_vs_ls_noseq");
        let bfs = find(&r, "2000-30-50-150", Metric::Bfs);
        assert_eq!(bfs.mean_diff, 453.0);
        assert!((bfs.stdev - 208.12).abs() <= 0.01);
        let r = report_fixture(FixtureTable::TabuVsLs);
        let bfs = find(&r, "2000-30-50-150", Metric::Bfs);
        assert_eq!(bfs.mean_diff.round(), 974.0);
        assert_eq!((bfs.pct * 10.0).round() / 10.0, 1.6);
    }

    #[test]
    fn empty_log_gives_empty_report() {
        let r = report_log(&[]);
        assert!(r.rows.is_empty());
        let mut out = Vec::new();
        write_report(&r, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 1);
    }

    fn plan(runs: u64, threads: Option<usize>) -> BenchPlan {
        BenchPlan {
            instances: vec![InstanceSource::Generate(
                GenParams::with_sizes(30, 4, 5, 6).with_seed(3),
            )],
            algorithms: vec![
                AlgorithmSpec {
                    algorithm: Algorithm::LsSeq,
                    budget: Some(Budget::Iterations(300)),
                    max_starts: None,
                },
                AlgorithmSpec {
                    algorithm: Algorithm::TabuSeq,
                    budget: Some(Budget::Iterations(300)),
                    max_starts: None,
                },
            ],
            runs_per_instance: runs,
            seed_base: 10,
            threads,
            solutions_dir: None,
        }
    }

    #[test]
    fn plan_cardinality_order_and_determinism() {
        let rows = run_plan(&plan(3, Some(1)), ".").unwrap();
        assert_eq!(rows.len(), 6);
        let keys: Vec<(Algorithm, u64)> = rows.iter().map(|r| (r.algorithm, r.seed)).collect();
        assert_eq!(
            keys,
            vec![
                (Algorithm::LsSeq, 10),
                (Algorithm::LsSeq, 11),
                (Algorithm::LsSeq, 12),
                (Algorithm::TabuSeq, 10),
                (Algorithm::TabuSeq, 11),
                (Algorithm::TabuSeq, 12),
            ]
        );
        let again = run_plan(&plan(3, Some(4)), ".").unwrap();
        let bfs = |rs: &[LogRow]| rs.iter().map(|r| r.bfs).collect::<Vec<_>>();
        assert_eq!(bfs(&rows), bfs(&again));
        assert!(rows.iter().all(|r| r.is_ok() && r.tb_seconds <= r.wall_seconds));
        let report = report_log(&rows);
        assert_eq!(report.unpaired, 0);
        assert!(report
            .rows
            .iter()
            .all(|r| r.comparison == "tabu_seq_vs_ls_seq" && r.n == 3));
    }

    #[test]
    fn failed_instance_becomes_error_rows() {
        let mut p = plan(2, Some(1));
        p.instances.push(InstanceSource::File("does-not-exist.json".into()));
        let rows = run_plan(&p, "/nonexistent").unwrap();
        assert_eq!(rows.len(), 8);
        let failed: Vec<&LogRow> = rows.iter().filter(|r| !r.is_ok()).collect();
        assert_eq!(failed.len(), 4);
        assert!(failed
            .iter()
            .all(|r| r.status.starts_with("error: ") && r.bfs.is_none()));
        assert_eq!(failed[0].instance, "does-not-exist.json");
    }

    #[test]
    fn plan_validation() {
        assert!(matches!(plan(0, None).check(), Err(BenchError::Plan(_))));
        assert!(matches!(plan(1, Some(0)).check(), Err(BenchError::Plan(_))));
        let text =
            r#"{"instances":[{"file":"a.json"}],"algorithms":[{"algorithm":"ls_seq","budget":{"iterations":5}}]}"#;
        let p: BenchPlan = serde_json::from_str(text).unwrap();
        assert_eq!(p.runs_per_instance, 15);
        assert_eq!(p.algorithms[0].budget, Some(Budget::Iterations(5)));
    }

    #[test]
    fn log_is_append_only() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("runs.csv");
        let rows = run_plan(&plan(1, Some(1)), ".").unwrap();
        append_log(&log, &rows).unwrap();
        let first = fs::read_to_string(&log).unwrap();
        append_log(&log, &rows).unwrap();
        let second = fs::read_to_string(&log).unwrap();
        assert!(second.starts_with(&first));
        assert_eq!(
            first.lines().next().unwrap(),
            "instance,algorithm,seed,bfs,tb_seconds,iterations,wall_seconds,status"
        );
        let back = load_log(&log).unwrap();
        assert_eq!(back.len(), 4);
        assert_eq!(back[..2], rows[..]);
    }

    #[test]
    fn unpaired_rows_are_counted() {
        let rows = run_plan(&plan(2, Some(1)), ".").unwrap();
        let partial: Vec<LogRow> = rows
            .into_iter()
            .filter(|r| !(r.algorithm == Algorithm::TabuSeq && r.seed == 11))
            .collect();
        let report = report_log(&partial);
        assert_eq!(report.unpaired, 1);
        // one pair is too few for a paired sample
        assert!(report.rows.is_empty());
    }
}
