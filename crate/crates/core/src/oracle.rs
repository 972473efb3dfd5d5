//! Exact optimum of tiny instances, and an LP-format export of the path-based
//! 0-1 model for cross-checking with external solvers.
//!
//! The enumeration walks every plant / warehouse / dc subset within the
//! bounds. With the facility sets fixed, stores are independent except for
//! the store bound: each reachable store takes its cheapest path through the
//! open facilities and the `us` most profitable stores with positive profit
//! are opened. Only the facilities those paths actually use are charged.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path as FsPath;

use rayon::prelude::*;
use thiserror::Error;

use crate::instance::{Cost, Instance, Level};
use crate::solution::{feasible_paths, Path, Solution};

/// Largest plant, warehouse and dc set accepted by [`exact_enumerate`].
pub const MAX_FACILITIES: usize = 6;
/// Largest store set accepted by [`exact_enumerate`].
pub const MAX_STORES: usize = 12;
/// Largest number of path variables accepted by [`export_path_ip`].
pub const MAX_PATHS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(
        "instance too large for exact enumeration: {level} set has {size} elements (limit {limit}; \
         plants, warehouses and dcs <= {MAX_FACILITIES}, stores <= {MAX_STORES})"
    )]
    TooLarge { level: Level, size: usize, limit: usize },
    #[error("instance has {count} feasible paths, more than the export limit of {limit}")]
    TooManyPaths { count: usize, limit: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub objective: Cost,
    pub solution: Solution,
}

fn check_size(inst: &Instance) -> Result<(), OracleError> {
    for level in [Level::Plant, Level::Warehouse, Level::Dc, Level::Store] {
        let size = inst.sizes().of(level);
        let limit = if level == Level::Store {
            MAX_STORES
        } else {
            MAX_FACILITIES
        };
        if size > limit {
            return Err(OracleError::TooLarge { level, size, limit });
        }
    }
    Ok(())
}

fn masks(size: usize, bound: usize) -> Vec<u32> {
    (0u32..1 << size).filter(|m| m.count_ones() as usize <= bound).collect()
}

fn has(mask: u32, i: usize) -> bool {
    mask >> i & 1 == 1
}

/// Cheapest path for `store` through the open facilities; ties go to the
/// lowest (dc, warehouse, plant).
fn cheapest_path(inst: &Instance, store: usize, plants: u32, warehouses: u32, dcs: u32) -> Option<(Cost, Path)> {
    let mut best: Option<(Cost, Path)> = None;
    for &dc in inst.dcs_of_store(store) {
        if !has(dcs, dc) {
            continue;
        }
        let c_ds = inst.ds_cost(dc, store).expect("dc listed for store");
        for warehouse in 0..inst.num_warehouses() {
            let Some(c_wd) = inst.wd_cost(warehouse, dc).filter(|_| has(warehouses, warehouse)) else {
                continue;
            };
            for &plant in inst.eligibility(store) {
                let Some(c_pw) = inst.pw_cost(plant, warehouse).filter(|_| has(plants, plant)) else {
                    continue;
                };
                let cost = c_pw + c_wd + c_ds;
                if best.is_none_or(|(b, _)| cost < b) {
                    best = Some((cost, Path { plant, warehouse, dc }));
                }
            }
        }
    }
    best
}

/// Best assignment for fixed facility sets, with its open-iff-used value.
fn best_for(inst: &Instance, plants: u32, warehouses: u32, dcs: u32) -> (Cost, Vec<Option<Path>>) {
    let m = inst.num_stores();
    let mut candidates: Vec<(Cost, usize, Path)> = (0..m)
        .filter_map(|store| {
            let (cost, path) = cheapest_path(inst, store, plants, warehouses, dcs)?;
            let profit = inst.revenue(store) - inst.fixed_cost(Level::Store, store) - cost;
            (profit > 0).then_some((profit, store, path))
        })
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    candidates.truncate(inst.bounds().stores);

    let mut assignment = vec![None; m];
    let (mut used_p, mut used_w, mut used_d) = (0u32, 0u32, 0u32);
    let mut value = 0;
    for &(profit, store, path) in &candidates {
        assignment[store] = Some(path);
        value += profit;
        used_p |= 1 << path.plant;
        used_w |= 1 << path.warehouse;
        used_d |= 1 << path.dc;
    }
    let charge = |level: Level, mask: u32, size: usize| -> Cost {
        (0..size)
            .filter(|&i| has(mask, i))
            .map(|i| inst.fixed_cost(level, i))
            .sum()
    };
    value -= charge(Level::Plant, used_p, inst.num_plants());
    value -= charge(Level::Warehouse, used_w, inst.num_warehouses());
    value -= charge(Level::Dc, used_d, inst.num_dcs());
    (value, assignment)
}

/// Exact optimum by facility-subset enumeration. Among optimal facility
/// sets the lexicographically smallest (plant, warehouse, dc) mask triple
/// wins, so the result is deterministic.
pub fn exact_enumerate(inst: &Instance) -> Result<ExactResult, OracleError> {
    check_size(inst)?;
    let b = inst.bounds();
    let pm = masks(inst.num_plants(), b.plants);
    let wm = masks(inst.num_warehouses(), b.warehouses);
    let dm = masks(inst.num_dcs(), b.dcs);

    let best = pm
        .par_iter()
        .map(|&p| {
            let mut best: Option<(Cost, (u32, u32, u32))> = None;
            for &w in &wm {
                for &d in &dm {
                    let (value, _) = best_for(inst, p, w, d);
                    if best.is_none_or(|(v, _)| value > v) {
                        best = Some((value, (p, w, d)));
                    }
                }
            }
            best.expect("the empty subsets are always enumerated")
        })
        .reduce_with(|x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x })
        .expect("the empty subset is always enumerated");

    let (p, w, d) = best.1;
    let (objective, assignment) = best_for(inst, p, w, d);
    let solution = Solution::from_assignment(inst, assignment).expect("oracle assignment is feasible");
    debug_assert_eq!(solution.objective(), objective);
    Ok(ExactResult { objective, solution })
}

/// Writes `terms` as a linear expression, a few terms per line.
fn push_terms(out: &mut String, terms: &[(Cost, String)]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (i, (coef, var)) in terms.iter().enumerate() {
        if i > 0 && i % 8 == 0 {
            out.push_str("\n   ");
        }
        let sign = if *coef < 0 { '-' } else { '+' };
        if i == 0 && *coef >= 0 {
            write!(out, " {} {var}", coef.abs()).unwrap();
        } else {
            write!(out, " {sign} {} {var}", coef.abs()).unwrap();
        }
    }
}

fn push_row(out: &mut String, name: &str, terms: &[(Cost, String)], sense: &str, rhs: Cost) {
    write!(out, " {name}:").unwrap();
    push_terms(out, terms);
    writeln!(out, " {sense} {rhs}").unwrap();
}

fn x_name(store: usize, p: &Path) -> String {
    format!("x_{}_{}_{}_{}", p.plant, p.warehouse, p.dc, store)
}

/// Renders the path-based 0-1 model in LP format.
///
/// Variables: `p{n}`, `w{k}`, `d{j}`, `s{m}` open plants, warehouses, dcs
/// and stores; `x_{n}_{k}_{j}_{m}` selects path n -> k -> j -> m. The
/// objective maximizes path margins `R_m - c_nk - c_kj - c_jm` minus fixed
/// costs on the indicators. Rows: every path is linked to its four
/// indicators, an open store takes exactly one path (so at most one), and
/// the four cardinality bounds.
pub fn path_ip_string(inst: &Instance) -> Result<String, OracleError> {
    let count: usize = (0..inst.num_stores()).map(|s| feasible_paths(inst, s).len()).sum();
    if count > MAX_PATHS {
        return Err(OracleError::TooManyPaths {
            count,
            limit: MAX_PATHS,
        });
    }
    let paths: Vec<(usize, Path, Cost)> = (0..inst.num_stores())
        .flat_map(|store| {
            feasible_paths(inst, store)
                .into_iter()
                .map(move |path| (store, path, path.cost(inst, store).expect("feasible path")))
        })
        .collect();

    let mut out = String::new();
    writeln!(out, "\\ {}: {} path variables", inst.name(), paths.len()).unwrap();
    out.push_str("Maximize\n obj:");
    let mut obj: Vec<(Cost, String)> = paths
        .iter()
        .map(|(store, path, cost)| (inst.revenue(*store) - cost, x_name(*store, path)))
        .collect();
    let indicators = [
        ("s", Level::Store),
        ("p", Level::Plant),
        ("w", Level::Warehouse),
        ("d", Level::Dc),
    ];
    for (prefix, level) in indicators {
        for i in 0..inst.sizes().of(level) {
            obj.push((-inst.fixed_cost(level, i), format!("{prefix}{i}")));
        }
    }
    push_terms(&mut out, &obj);
    out.push_str("\nSubject To\n");

    for (store, path, _) in &paths {
        let x = x_name(*store, path);
        let links = [("s", *store), ("p", path.plant), ("w", path.warehouse), ("d", path.dc)];
        for (prefix, idx) in links {
            let row = format!("link_{prefix}_{}", &x[2..]);
            push_row(
                &mut out,
                &row,
                &[(1, x.clone()), (-1, format!("{prefix}{idx}"))],
                "<=",
                0,
            );
        }
    }
    for store in 0..inst.num_stores() {
        let mut terms: Vec<(Cost, String)> = paths
            .iter()
            .filter(|(s, _, _)| *s == store)
            .map(|(s, p, _)| (1, x_name(*s, p)))
            .collect();
        terms.push((-1, format!("s{store}")));
        push_row(&mut out, &format!("one_path_s{store}"), &terms, "=", 0);
    }
    let b = inst.bounds();
    for (prefix, level) in indicators {
        let size = inst.sizes().of(level);
        let terms: Vec<(Cost, String)> = (0..size).map(|i| (1, format!("{prefix}{i}"))).collect();
        push_row(&mut out, &format!("bound_{prefix}"), &terms, "<=", b.of(level) as Cost);
    }

    out.push_str("Binary\n");
    for (prefix, level) in indicators {
        for i in 0..inst.sizes().of(level) {
            writeln!(out, " {prefix}{i}").unwrap();
        }
    }
    for (store, path, _) in &paths {
        writeln!(out, " {}", x_name(*store, path)).unwrap();
    }
    out.push_str("End\n");
    Ok(out)
}

/// Writes [`path_ip_string`] to `out`.
pub fn export_path_ip(inst: &Instance, out: impl AsRef<FsPath>) -> Result<(), OracleError> {
    let text = path_ip_string(inst)?;
    fs::write(out, text)?;
    Ok(())
}
