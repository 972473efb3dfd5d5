//! Constant-time profit deltas for the five single-store moves and their
//! application to a [`Solution`].
//!
//! Every delta is a profit change: positive means the move improves the
//! objective. The close/open formulas carry fixed-cost terms for facilities
//! whose usage crosses between zero and one; the three swaps reroute one
//! layer of the store's path and carry a release term for the old facility
//! and an acquisition term for the new one.

use std::fmt;

use thiserror::Error;

use crate::instance::{Cost, Instance, Layer, Level};
use crate::solution::{Path, PathError, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// Close an open store.
    CloseStore,
    /// Open a closed store along a given path.
    OpenStore,
    /// Reroute an open store through another dc.
    SwapDc,
    /// Reroute an open store through another warehouse.
    SwapWarehouse,
    /// Supply an open store from another plant.
    SwapPlant,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::CloseStore,
        MoveKind::OpenStore,
        MoveKind::SwapDc,
        MoveKind::SwapWarehouse,
        MoveKind::SwapPlant,
    ];

    pub fn is_flip(self) -> bool {
        matches!(self, MoveKind::CloseStore | MoveKind::OpenStore)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::CloseStore => "close",
            MoveKind::OpenStore => "open",
            MoveKind::SwapDc => "swap-dc",
            MoveKind::SwapWarehouse => "swap-warehouse",
            MoveKind::SwapPlant => "swap-plant",
        })
    }
}

/// An evaluated move. `profit_delta` is exactly
/// `evaluate(after) - evaluate(before)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveDelta {
    pub kind: MoveKind,
    pub store: usize,
    pub old_path: Option<Path>,
    pub new_path: Option<Path>,
    pub profit_delta: Cost,
}

/// Why a move cannot be applied to the current solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Inapplicable {
    #[error("store {0} is closed")]
    StoreClosed(usize),
    #[error("store {0} is already open")]
    StoreOpen(usize),
    #[error("target facility equals the current one")]
    SameFacility,
    #[error("store {store} cannot use plant {plant}")]
    Ineligible { store: usize, plant: usize },
    #[error("missing {0} arc ({1}, {2})")]
    MissingArc(Layer, usize, usize),
    #[error("{0} bound reached")]
    BoundReached(Level),
}

impl From<PathError> for Inapplicable {
    fn from(e: PathError) -> Self {
        match e {
            PathError::Ineligible { store, plant } => Inapplicable::Ineligible { store, plant },
            PathError::MissingArc { layer, from, to, .. } => Inapplicable::MissingArc(layer, from, to),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("stale {kind} move for store {store}: the solution changed since it was evaluated")]
pub struct StaleMove {
    pub kind: MoveKind,
    pub store: usize,
}

/// Fixed cost recovered when the store leaves facility `idx`.
#[inline]
fn release_gain(inst: &Instance, sol: &Solution, level: Level, idx: usize) -> Cost {
    if sol.usage().of(level, idx) == 1 {
        inst.fixed_cost(level, idx)
    } else {
        0
    }
}

/// Fixed cost incurred when the store starts using facility `idx`.
#[inline]
fn acquire_cost(inst: &Instance, sol: &Solution, level: Level, idx: usize) -> Cost {
    if sol.usage().of(level, idx) == 0 {
        inst.fixed_cost(level, idx)
    } else {
        0
    }
}

/// Open-facility count at `level` after moving one store from `old` to `new`
/// must stay within the bound.
#[inline]
fn check_swap_bound(inst: &Instance, sol: &Solution, level: Level, old: usize, new: usize) -> Result<(), Inapplicable> {
    let usage = sol.usage();
    let after = sol.open_count(level) + usize::from(usage.of(level, new) == 0) - usize::from(usage.of(level, old) == 1);
    if after > inst.bounds().of(level) {
        Err(Inapplicable::BoundReached(level))
    } else {
        Ok(())
    }
}

#[inline]
fn open_path(sol: &Solution, store: usize) -> Result<Path, Inapplicable> {
    sol.path(store).ok_or(Inapplicable::StoreClosed(store))
}

/// Close an open store: loses its revenue, saves its fixed and transport
/// costs, and saves the fixed cost of every facility it was the only user of.
pub fn delta_close_store(inst: &Instance, sol: &Solution, store: usize) -> Result<MoveDelta, Inapplicable> {
    let path = open_path(sol, store)?;
    let transport = path.cost(inst, store)?;
    let profit_delta = -inst.revenue(store)
        + transport
        + inst.fixed_cost(Level::Store, store)
        + release_gain(inst, sol, Level::Dc, path.dc)
        + release_gain(inst, sol, Level::Warehouse, path.warehouse)
        + release_gain(inst, sol, Level::Plant, path.plant);
    Ok(MoveDelta {
        kind: MoveKind::CloseStore,
        store,
        old_path: Some(path),
        new_path: None,
        profit_delta,
    })
}

/// Open a closed store along `path`, paying the fixed cost of every facility
/// that is currently unused.
pub fn delta_open_store(inst: &Instance, sol: &Solution, store: usize, path: Path) -> Result<MoveDelta, Inapplicable> {
    if sol.is_open(store) {
        return Err(Inapplicable::StoreOpen(store));
    }
    let transport = path.cost(inst, store)?;
    let bounds = inst.bounds();
    if sol.open_count(Level::Store) >= bounds.stores {
        return Err(Inapplicable::BoundReached(Level::Store));
    }
    let usage = sol.usage();
    for (level, idx) in [
        (Level::Plant, path.plant),
        (Level::Warehouse, path.warehouse),
        (Level::Dc, path.dc),
    ] {
        if usage.of(level, idx) == 0 && sol.open_count(level) >= bounds.of(level) {
            return Err(Inapplicable::BoundReached(level));
        }
    }
    let profit_delta = inst.revenue(store)
        - transport
        - inst.fixed_cost(Level::Store, store)
        - acquire_cost(inst, sol, Level::Dc, path.dc)
        - acquire_cost(inst, sol, Level::Warehouse, path.warehouse)
        - acquire_cost(inst, sol, Level::Plant, path.plant);
    Ok(MoveDelta {
        kind: MoveKind::OpenStore,
        store,
        old_path: None,
        new_path: Some(path),
        profit_delta,
    })
}

/// Serve an open store through dc `new_dc`: changes c_kj and c_jm.
pub fn delta_swap_dc(inst: &Instance, sol: &Solution, store: usize, new_dc: usize) -> Result<MoveDelta, Inapplicable> {
    let old = open_path(sol, store)?;
    if new_dc == old.dc {
        return Err(Inapplicable::SameFacility);
    }
    let new_wd = inst.wd_cost(old.warehouse, new_dc).ok_or(Inapplicable::MissingArc(
        Layer::WarehouseDc,
        old.warehouse,
        new_dc,
    ))?;
    let new_ds = inst
        .ds_cost(new_dc, store)
        .ok_or(Inapplicable::MissingArc(Layer::DcStore, new_dc, store))?;
    check_swap_bound(inst, sol, Level::Dc, old.dc, new_dc)?;
    let old_wd = inst.wd_cost(old.warehouse, old.dc).expect("current path is feasible");
    let old_ds = inst.ds_cost(old.dc, store).expect("current path is feasible");
    let profit_delta = old_ds - new_ds + old_wd - new_wd + release_gain(inst, sol, Level::Dc, old.dc)
        - acquire_cost(inst, sol, Level::Dc, new_dc);
    Ok(MoveDelta {
        kind: MoveKind::SwapDc,
        store,
        old_path: Some(old),
        new_path: Some(Path { dc: new_dc, ..old }),
        profit_delta,
    })
}

/// Serve an open store through warehouse `new_wh`: changes c_nk and c_kj.
pub fn delta_swap_warehouse(
    inst: &Instance,
    sol: &Solution,
    store: usize,
    new_wh: usize,
) -> Result<MoveDelta, Inapplicable> {
    let old = open_path(sol, store)?;
    if new_wh == old.warehouse {
        return Err(Inapplicable::SameFacility);
    }
    let new_pw =
        inst.pw_cost(old.plant, new_wh)
            .ok_or(Inapplicable::MissingArc(Layer::PlantWarehouse, old.plant, new_wh))?;
    let new_wd = inst
        .wd_cost(new_wh, old.dc)
        .ok_or(Inapplicable::MissingArc(Layer::WarehouseDc, new_wh, old.dc))?;
    check_swap_bound(inst, sol, Level::Warehouse, old.warehouse, new_wh)?;
    let old_pw = inst
        .pw_cost(old.plant, old.warehouse)
        .expect("current path is feasible");
    let old_wd = inst.wd_cost(old.warehouse, old.dc).expect("current path is feasible");
    let profit_delta = old_pw - new_pw + old_wd - new_wd + release_gain(inst, sol, Level::Warehouse, old.warehouse)
        - acquire_cost(inst, sol, Level::Warehouse, new_wh);
    Ok(MoveDelta {
        kind: MoveKind::SwapWarehouse,
        store,
        old_path: Some(old),
        new_path: Some(Path {
            warehouse: new_wh,
            ..old
        }),
        profit_delta,
    })
}

/// Supply an open store from plant `new_plant`: changes c_nk only.
pub fn delta_swap_plant(
    inst: &Instance,
    sol: &Solution,
    store: usize,
    new_plant: usize,
) -> Result<MoveDelta, Inapplicable> {
    let old = open_path(sol, store)?;
    if new_plant == old.plant {
        return Err(Inapplicable::SameFacility);
    }
    if !inst.is_eligible(store, new_plant) {
        return Err(Inapplicable::Ineligible {
            store,
            plant: new_plant,
        });
    }
    let new_pw = inst.pw_cost(new_plant, old.warehouse).ok_or(Inapplicable::MissingArc(
        Layer::PlantWarehouse,
        new_plant,
        old.warehouse,
    ))?;
    check_swap_bound(inst, sol, Level::Plant, old.plant, new_plant)?;
    let old_pw = inst
        .pw_cost(old.plant, old.warehouse)
        .expect("current path is feasible");
    let profit_delta = old_pw - new_pw + release_gain(inst, sol, Level::Plant, old.plant)
        - acquire_cost(inst, sol, Level::Plant, new_plant);
    Ok(MoveDelta {
        kind: MoveKind::SwapPlant,
        store,
        old_path: Some(old),
        new_path: Some(Path {
            plant: new_plant,
            ..old
        }),
        profit_delta,
    })
}

/// Re-evaluates `mv` against the current state of `sol`.
fn reevaluate(inst: &Instance, sol: &Solution, mv: &MoveDelta) -> Option<MoveDelta> {
    let m = mv.store;
    if m >= inst.num_stores() {
        return None;
    }
    let fresh = match (mv.kind, mv.new_path) {
        (MoveKind::CloseStore, _) => delta_close_store(inst, sol, m),
        (MoveKind::OpenStore, Some(p)) => delta_open_store(inst, sol, m, p),
        (MoveKind::SwapDc, Some(p)) => delta_swap_dc(inst, sol, m, p.dc),
        (MoveKind::SwapWarehouse, Some(p)) => delta_swap_warehouse(inst, sol, m, p.warehouse),
        (MoveKind::SwapPlant, Some(p)) => delta_swap_plant(inst, sol, m, p.plant),
        _ => return None,
    };
    fresh.ok()
}

/// Applies an evaluated move. The move must still describe the current
/// solution exactly (same old path, same delta, still applicable); otherwise
/// it is rejected as stale and `sol` is left untouched.
pub fn apply_move(inst: &Instance, sol: &mut Solution, mv: &MoveDelta) -> Result<(), StaleMove> {
    match reevaluate(inst, sol, mv) {
        Some(fresh) if fresh == *mv => {
            sol.set_path(mv.store, mv.new_path, mv.profit_delta);
            Ok(())
        }
        _ => Err(StaleMove {
            kind: mv.kind,
            store: mv.store,
        }),
    }
}

/// Every applicable move of every kind for one store, in a fixed order.
pub fn applicable_moves(inst: &Instance, sol: &Solution, store: usize) -> Vec<MoveDelta> {
    let mut out = Vec::new();
    match sol.path(store) {
        Some(_) => {
            out.extend(delta_close_store(inst, sol, store).ok());
            out.extend((0..inst.num_dcs()).filter_map(|j| delta_swap_dc(inst, sol, store, j).ok()));
            out.extend((0..inst.num_warehouses()).filter_map(|k| delta_swap_warehouse(inst, sol, store, k).ok()));
            out.extend((0..inst.num_plants()).filter_map(|n| delta_swap_plant(inst, sol, store, n).ok()));
        }
        None => {
            out.extend(
                crate::solution::feasible_paths(inst, store)
                    .into_iter()
                    .filter_map(|p| delta_open_store(inst, sol, store, p).ok()),
            );
        }
    }
    out
}
