//! Solution representation, full objective evaluation and feasibility checks.
//!
//! A solution assigns each store either nothing (closed) or a serving path
//! plant -> warehouse -> dc. Facilities are open exactly when they serve at
//! least one store, so their status is derived from usage counts rather than
//! stored.

use std::fmt;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Cost, Instance, Layer, Level};

/// Serving path of one open store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize, usize)", into = "(usize, usize, usize)")]
pub struct Path {
    pub plant: usize,
    pub warehouse: usize,
    pub dc: usize,
}

impl Path {
    pub const fn new(plant: usize, warehouse: usize, dc: usize) -> Self {
        Path { plant, warehouse, dc }
    }

    /// Transport cost c_nk + c_kj + c_jm of serving `store` along this path.
    pub fn cost(&self, inst: &Instance, store: usize) -> Result<Cost, PathError> {
        if !inst.is_eligible(store, self.plant) {
            return Err(PathError::Ineligible {
                store,
                plant: self.plant,
            });
        }
        let missing = |layer, from, to| PathError::MissingArc { store, layer, from, to };
        let pw = inst
            .pw_cost(self.plant, self.warehouse)
            .ok_or_else(|| missing(Layer::PlantWarehouse, self.plant, self.warehouse))?;
        let wd = inst
            .wd_cost(self.warehouse, self.dc)
            .ok_or_else(|| missing(Layer::WarehouseDc, self.warehouse, self.dc))?;
        let ds = inst
            .ds_cost(self.dc, store)
            .ok_or_else(|| missing(Layer::DcStore, self.dc, store))?;
        Ok(pw + wd + ds)
    }
}

impl From<(usize, usize, usize)> for Path {
    fn from((plant, warehouse, dc): (usize, usize, usize)) -> Self {
        Path { plant, warehouse, dc }
    }
}

impl From<Path> for (usize, usize, usize) {
    fn from(p: Path) -> Self {
        (p.plant, p.warehouse, p.dc)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.plant, self.warehouse, self.dc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("eligibility/range: store {store} cannot use plant {plant}")]
    Ineligible { store: usize, plant: usize },
    #[error("store {store}: missing {layer} arc ({from}, {to})")]
    MissingArc {
        store: usize,
        layer: Layer,
        from: usize,
        to: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("assignment has {found} entries but the instance has {expected} stores")]
    Length { found: usize, expected: usize },
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Number of stores served by each plant, warehouse and dc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Usage {
    pub plant: Vec<u32>,
    pub warehouse: Vec<u32>,
    pub dc: Vec<u32>,
}

impl Usage {
    fn zeros(inst: &Instance) -> Self {
        Usage {
            plant: vec![0; inst.num_plants()],
            warehouse: vec![0; inst.num_warehouses()],
            dc: vec![0; inst.num_dcs()],
        }
    }

    pub fn of(&self, level: Level, idx: usize) -> u32 {
        match level {
            Level::Store => panic!("store usage is the assignment itself"),
            Level::Plant => self.plant[idx],
            Level::Warehouse => self.warehouse[idx],
            Level::Dc => self.dc[idx],
        }
    }

    fn open_count(counts: &[u32]) -> usize {
        counts.iter().filter(|&&c| c > 0).count()
    }
}

/// All complete paths that can serve `store`, ordered by (dc, warehouse, plant).
pub fn feasible_paths(inst: &Instance, store: usize) -> Vec<Path> {
    let mut out = Vec::new();
    for &dc in inst.dcs_of_store(store) {
        for warehouse in 0..inst.num_warehouses() {
            if inst.wd_cost(warehouse, dc).is_none() {
                continue;
            }
            for &plant in inst.eligibility(store) {
                if inst.pw_cost(plant, warehouse).is_some() {
                    out.push(Path { plant, warehouse, dc });
                }
            }
        }
    }
    out
}

/// Recounts facility usage from scratch. Out-of-range indices are ignored.
pub fn recount_usage(inst: &Instance, assignment: &[Option<Path>]) -> Usage {
    let mut usage = Usage::zeros(inst);
    for path in assignment.iter().flatten() {
        if let Some(c) = usage.plant.get_mut(path.plant) {
            *c += 1;
        }
        if let Some(c) = usage.warehouse.get_mut(path.warehouse) {
            *c += 1;
        }
        if let Some(c) = usage.dc.get_mut(path.dc) {
            *c += 1;
        }
    }
    usage
}

/// Total profit: revenue of open stores minus the fixed costs of every used
/// facility and the transport cost along each open store's path.
pub fn evaluate(inst: &Instance, assignment: &[Option<Path>]) -> Result<Cost, EvalError> {
    if assignment.len() != inst.num_stores() {
        return Err(EvalError::Length {
            found: assignment.len(),
            expected: inst.num_stores(),
        });
    }
    let mut profit = 0;
    for (store, path) in assignment.iter().enumerate() {
        if let Some(path) = path {
            profit += inst.revenue(store) - inst.fixed_cost(Level::Store, store) - path.cost(inst, store)?;
        }
    }
    let usage = recount_usage(inst, assignment);
    let fixed = inst.fixed();
    let charge = |counts: &[u32], costs: &[Cost]| -> Cost {
        counts.iter().zip(costs).filter(|(&c, _)| c > 0).map(|(_, &f)| f).sum()
    };
    profit -= charge(&usage.plant, &fixed.plant);
    profit -= charge(&usage.warehouse, &fixed.warehouse);
    profit -= charge(&usage.dc, &fixed.dc);
    Ok(profit)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityViolation {
    Length { found: usize, expected: usize },
    Path(PathError),
    BoundExceeded { level: Level, count: usize, bound: usize },
}

impl fmt::Display for FeasibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeasibilityViolation::Length { found, expected } => {
                write!(f, "assignment length {found} != store count {expected}")
            }
            FeasibilityViolation::Path(e) => e.fmt(f),
            FeasibilityViolation::BoundExceeded { level, count, bound } => {
                write!(f, "{level} bound: {count} > {bound}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<FeasibilityViolation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Checks eligibility, arc existence on all three layers and the four
/// cardinality bounds. The single-path-per-store and open-when-used
/// constraints hold by construction of the representation.
pub fn check_feasibility(inst: &Instance, assignment: &[Option<Path>]) -> FeasibilityReport {
    let mut violations = Vec::new();
    if assignment.len() != inst.num_stores() {
        violations.push(FeasibilityViolation::Length {
            found: assignment.len(),
            expected: inst.num_stores(),
        });
        return FeasibilityReport { violations };
    }
    for (store, path) in assignment.iter().enumerate() {
        if let Some(Err(e)) = path.map(|p| p.cost(inst, store)) {
            violations.push(FeasibilityViolation::Path(e));
        }
    }
    let usage = recount_usage(inst, assignment);
    let bounds = inst.bounds();
    let counts = [
        (Level::Store, assignment.iter().flatten().count()),
        (Level::Plant, Usage::open_count(&usage.plant)),
        (Level::Warehouse, Usage::open_count(&usage.warehouse)),
        (Level::Dc, Usage::open_count(&usage.dc)),
    ];
    for (level, count) in counts {
        let bound = bounds.of(level);
        if count > bound {
            violations.push(FeasibilityViolation::BoundExceeded { level, count, bound });
        }
    }
    FeasibilityReport { violations }
}

#[derive(Debug, Error)]
pub enum SolutionError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("infeasible solution: {0}")]
    Infeasible(FeasibilityReport),
    #[error("stored objective {stored} does not match evaluated objective {computed}")]
    ObjectiveMismatch { stored: Cost, computed: Cost },
}

/// A feasible solution with cached usage counts and objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    assignment: Vec<Option<Path>>,
    usage: Usage,
    open: [usize; 4],
    objective: Cost,
}

impl Solution {
    /// All stores closed; profit 0.
    pub fn empty(inst: &Instance) -> Self {
        Solution {
            assignment: vec![None; inst.num_stores()],
            usage: Usage::zeros(inst),
            open: [0; 4],
            objective: 0,
        }
    }

    pub fn from_assignment(inst: &Instance, assignment: Vec<Option<Path>>) -> Result<Self, SolutionError> {
        let report = check_feasibility(inst, &assignment);
        if !report.is_feasible() {
            return Err(SolutionError::Infeasible(report));
        }
        let objective = evaluate(inst, &assignment)?;
        let usage = recount_usage(inst, &assignment);
        let open = [
            assignment.iter().flatten().count(),
            Usage::open_count(&usage.plant),
            Usage::open_count(&usage.warehouse),
            Usage::open_count(&usage.dc),
        ];
        Ok(Solution {
            assignment,
            usage,
            open,
            objective,
        })
    }

    pub fn assignment(&self) -> &[Option<Path>] {
        &self.assignment
    }

    pub fn path(&self, store: usize) -> Option<Path> {
        self.assignment[store]
    }

    pub fn is_open(&self, store: usize) -> bool {
        self.assignment[store].is_some()
    }

    pub fn objective(&self) -> Cost {
        self.objective
    }

    pub fn usage(&self) -> &Usage {
        &self.usage
    }

    /// Number of open facilities at `level`.
    pub fn open_count(&self, level: Level) -> usize {
        self.open[level_slot(level)]
    }

    pub fn open_stores(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.iter().enumerate().filter_map(|(m, p)| p.map(|_| m))
    }

    /// Replaces the path of one store and shifts the cached objective by
    /// `delta`. Callers guarantee feasibility and the correctness of `delta`.
    pub(crate) fn set_path(&mut self, store: usize, new: Option<Path>, delta: Cost) {
        if let Some(old) = self.assignment[store] {
            self.release(Level::Plant, old.plant);
            self.release(Level::Warehouse, old.warehouse);
            self.release(Level::Dc, old.dc);
            self.open[0] -= 1;
        }
        if let Some(new) = new {
            self.acquire(Level::Plant, new.plant);
            self.acquire(Level::Warehouse, new.warehouse);
            self.acquire(Level::Dc, new.dc);
            self.open[0] += 1;
        }
        self.assignment[store] = new;
        self.objective += delta;
    }

    fn counts_mut(&mut self, level: Level) -> &mut Vec<u32> {
        match level {
            Level::Plant => &mut self.usage.plant,
            Level::Warehouse => &mut self.usage.warehouse,
            Level::Dc => &mut self.usage.dc,
            Level::Store => unreachable!(),
        }
    }

    fn release(&mut self, level: Level, idx: usize) {
        let c = &mut self.counts_mut(level)[idx];
        *c -= 1;
        if *c == 0 {
            self.open[level_slot(level)] -= 1;
        }
    }

    fn acquire(&mut self, level: Level, idx: usize) {
        let c = &mut self.counts_mut(level)[idx];
        *c += 1;
        if *c == 1 {
            self.open[level_slot(level)] += 1;
        }
    }

    /// Compares the cached usage counts and objective with a recount.
    pub fn is_consistent(&self, inst: &Instance) -> bool {
        let Ok(objective) = evaluate(inst, &self.assignment) else {
            return false;
        };
        let usage = recount_usage(inst, &self.assignment);
        let open = [
            self.assignment.iter().flatten().count(),
            Usage::open_count(&usage.plant),
            Usage::open_count(&usage.warehouse),
            Usage::open_count(&usage.dc),
        ];
        objective == self.objective && usage == self.usage && open == self.open
    }

    pub fn to_json(&self, inst: &Instance) -> String {
        let file = SolutionFile {
            instance: inst.name().to_string(),
            objective: self.objective,
            assignment: self.assignment.clone(),
        };
        let mut s = serde_json::to_string(&file).expect("solution serializes");
        s.push('\n');
        s
    }

    /// Parses a solution file, re-evaluates it and checks the stored
    /// objective against the evaluation.
    pub fn from_json(inst: &Instance, text: &str) -> Result<Self, SolutionError> {
        let file: SolutionFile = serde_json::from_str(text)?;
        let sol = Solution::from_assignment(inst, file.assignment)?;
        if sol.objective != file.objective {
            return Err(SolutionError::ObjectiveMismatch {
                stored: file.objective,
                computed: sol.objective,
            });
        }
        Ok(sol)
    }

    pub fn save(&self, inst: &Instance, path: impl AsRef<FsPath>) -> Result<(), SolutionError> {
        let path = path.as_ref();
        fs::write(path, self.to_json(inst)).map_err(|source| SolutionError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(inst: &Instance, path: impl AsRef<FsPath>) -> Result<Self, SolutionError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| SolutionError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(inst, &text)
    }
}

fn level_slot(level: Level) -> usize {
    match level {
        Level::Store => 0,
        Level::Plant => 1,
        Level::Warehouse => 2,
        Level::Dc => 3,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    instance: String,
    objective: Cost,
    assignment: Vec<Option<Path>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{t1, t1_prime};
    use crate::instance::Bounds;

    const P: Option<Path> = Some(Path::new(0, 0, 0));

    #[test]
    fn t1_both_open_is_45() {
        assert_eq!(evaluate(&t1(), &[P, P]), Ok(45));
    }

    #[test]
    fn t1_first_store_only_is_minus_12() {
        assert_eq!(evaluate(&t1(), &[P, None]), Ok(-12));
    }

    #[test]
    fn all_closed_is_zero() {
        assert_eq!(evaluate(&t1(), &[None, None]), Ok(0));
        assert_eq!(evaluate(&t1_prime(), &[None, None]), Ok(0));
    }

    #[test]
    fn evaluate_rejects_missing_arc() {
        let err = evaluate(&t1(), &[Some(Path::new(0, 0, 1)), None]).unwrap_err();
        assert!(matches!(
            err,
            EvalError::Path(PathError::MissingArc {
                store: 0,
                layer: Layer::WarehouseDc,
                ..
            })
        ));
    }

    #[test]
    fn feasible_t1() {
        assert!(check_feasibility(&t1(), &[P, P]).is_feasible());
    }

    #[test]
    fn nonexistent_plant_is_flagged() {
        let report = check_feasibility(&t1(), &[Some(Path::new(1, 0, 0)), P]);
        assert_eq!(report.violations.len(), 1);
        assert!(report.to_string().contains("eligibility/range: store 0"), "{report}");
    }

    #[test]
    fn store_bound_is_flagged() {
        let inst = t1().with_bounds(Bounds {
            stores: 1,
            plants: 1,
            warehouses: 1,
            dcs: 1,
        });
        let report = check_feasibility(&inst, &[P, P]);
        assert_eq!(report.to_string(), "store bound: 2 > 1");
    }

    #[test]
    fn usage_counts() {
        let inst = t1();
        let u = recount_usage(&inst, &[P, P]);
        assert_eq!((u.plant[0], u.warehouse[0], u.dc[0]), (2, 2, 2));
        let u = recount_usage(&inst, &[None, None]);
        assert_eq!((u.plant[0], u.warehouse[0], u.dc[0]), (0, 0, 0));
        let u = recount_usage(&inst, &[None, P]);
        assert_eq!((u.plant[0], u.warehouse[0], u.dc[0]), (1, 1, 1));
    }

    #[test]
    fn solution_json_round_trip() {
        let inst = t1();
        let sol = Solution::from_assignment(&inst, vec![P, None]).unwrap();
        let json = sol.to_json(&inst);
        assert_eq!(
            json,
            "{\"instance\":\"T1\",\"objective\":-12,\"assignment\":[[0,0,0],null]}\n"
        );
        assert_eq!(Solution::from_json(&inst, &json).unwrap(), sol);
    }

    #[test]
    fn tampered_objective_is_rejected() {
        let inst = t1();
        let json = "{\"instance\":\"T1\",\"objective\":44,\"assignment\":[[0,0,0],[0,0,0]]}";
        assert!(matches!(
            Solution::from_json(&inst, json),
            Err(SolutionError::ObjectiveMismatch {
                stored: 44,
                computed: 45
            })
        ));
    }

    #[test]
    fn set_path_keeps_caches_consistent() {
        let inst = t1();
        let mut sol = Solution::empty(&inst);
        sol.set_path(0, P, -12);
        assert!(sol.is_consistent(&inst));
        sol.set_path(1, P, 57);
        assert!(sol.is_consistent(&inst));
        assert_eq!(sol.open_count(Level::Dc), 1);
        sol.set_path(1, None, -57);
        assert!(sol.is_consistent(&inst));
        assert_eq!(sol.objective(), -12);
    }
}
