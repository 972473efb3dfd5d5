//! Problem data: facility sets, eligibility, arc costs, fixed costs, revenues
//! and cardinality bounds, plus the JSON instance format and a seeded generator.
//!
//! An [`Instance`] is immutable once built. Arc maps are kept sparse for
//! serialization and mirrored into dense lookup tables so that the solvers
//! can test and price an arc in constant time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integer currency unit used for every revenue and cost.
pub type Cost = i64;

/// Sparse arc map `(from, to) -> cost`.
pub type ArcMap = BTreeMap<(usize, usize), Cost>;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("parse error: duplicate arc ({from}, {to}) in `{field}`")]
    DuplicateArc {
        field: &'static str,
        from: usize,
        to: usize,
    },
    #[error("parse error: field `{field}` has length {found}, expected {expected}")]
    Length {
        field: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("invalid parameter `{field}`: {reason}")]
    Param { field: &'static str, reason: String },
}

/// The four facility levels of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Store,
    Plant,
    Warehouse,
    Dc,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Store => "store",
            Level::Plant => "plant",
            Level::Warehouse => "warehouse",
            Level::Dc => "dc",
        })
    }
}

/// The three arc layers of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    PlantWarehouse,
    WarehouseDc,
    DcStore,
}

impl Layer {
    pub fn field(self) -> &'static str {
        match self {
            Layer::PlantWarehouse => "pw_arcs",
            Layer::WarehouseDc => "wd_arcs",
            Layer::DcStore => "ds_arcs",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::PlantWarehouse => "pw",
            Layer::WarehouseDc => "wd",
            Layer::DcStore => "ds",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    /// Retail stores.
    pub m: usize,
    /// Plants.
    pub n: usize,
    /// Warehouses.
    pub k: usize,
    /// Distribution centers.
    pub j: usize,
}

impl Sizes {
    pub fn of(&self, level: Level) -> usize {
        match level {
            Level::Store => self.m,
            Level::Plant => self.n,
            Level::Warehouse => self.k,
            Level::Dc => self.j,
        }
    }
}

/// Upper bounds on the number of open facilities per level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(rename = "us")]
    pub stores: usize,
    #[serde(rename = "up")]
    pub plants: usize,
    #[serde(rename = "uw")]
    pub warehouses: usize,
    #[serde(rename = "ud")]
    pub dcs: usize,
}

impl Bounds {
    pub fn of(&self, level: Level) -> usize {
        match level {
            Level::Store => self.stores,
            Level::Plant => self.plants,
            Level::Warehouse => self.warehouses,
            Level::Dc => self.dcs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedCosts {
    pub store: Vec<Cost>,
    pub plant: Vec<Cost>,
    pub warehouse: Vec<Cost>,
    pub dc: Vec<Cost>,
}

/// Mutable raw material for an [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceParts {
    pub name: String,
    pub sizes: Sizes,
    pub bounds: Bounds,
    pub revenue: Vec<Cost>,
    pub fixed: FixedCosts,
    pub eligibility: Vec<Vec<usize>>,
    pub pw_arcs: ArcMap,
    pub wd_arcs: ArcMap,
    pub ds_arcs: ArcMap,
}

/// Dense mirrors of the sparse data. Out-of-range entries are left out; they
/// only show up in [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
struct ArcIndex {
    pw: Vec<Option<Cost>>,
    wd: Vec<Option<Cost>>,
    // store-major: index m * j_count + j
    ds: Vec<Option<Cost>>,
    eligible: Vec<bool>,
    store_dcs: Vec<Vec<usize>>,
}

impl ArcIndex {
    fn build(p: &InstanceParts) -> Self {
        let Sizes { m, n, k, j } = p.sizes;
        let mut pw = vec![None; n * k];
        for (&(a, b), &c) in &p.pw_arcs {
            if a < n && b < k {
                pw[a * k + b] = Some(c);
            }
        }
        let mut wd = vec![None; k * j];
        for (&(a, b), &c) in &p.wd_arcs {
            if a < k && b < j {
                wd[a * j + b] = Some(c);
            }
        }
        let mut ds = vec![None; j * m];
        let mut store_dcs = vec![Vec::new(); m];
        for (&(a, b), &c) in &p.ds_arcs {
            if a < j && b < m {
                ds[b * j + a] = Some(c);
                store_dcs[b].push(a);
            }
        }
        for dcs in &mut store_dcs {
            dcs.sort_unstable();
        }
        let mut eligible = vec![false; m * n];
        for (store, plants) in p.eligibility.iter().enumerate() {
            for &plant in plants {
                if plant < n {
                    eligible[store * n + plant] = true;
                }
            }
        }
        ArcIndex {
            pw,
            wd,
            ds,
            eligible,
            store_dcs,
        }
    }
}

/// Immutable problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    parts: InstanceParts,
    index: ArcIndex,
}

impl Instance {
    /// Builds an instance, rejecting only structural length mismatches.
    /// Semantic problems (bad indices, negative costs, oversized bounds) are
    /// reported by [`validate`].
    pub fn new(mut parts: InstanceParts) -> Result<Self, InstanceError> {
        let s = parts.sizes;
        check_len("revenue", parts.revenue.len(), s.m)?;
        check_len("fixed.store", parts.fixed.store.len(), s.m)?;
        check_len("fixed.plant", parts.fixed.plant.len(), s.n)?;
        check_len("fixed.warehouse", parts.fixed.warehouse.len(), s.k)?;
        check_len("fixed.dc", parts.fixed.dc.len(), s.j)?;
        check_len("eligibility", parts.eligibility.len(), s.m)?;
        for plants in &mut parts.eligibility {
            plants.sort_unstable();
            plants.dedup();
        }
        let index = ArcIndex::build(&parts);
        Ok(Instance { parts, index })
    }

    pub fn parts(&self) -> &InstanceParts {
        &self.parts
    }

    pub fn into_parts(self) -> InstanceParts {
        self.parts
    }

    /// Same data with different cardinality bounds.
    pub fn with_bounds(self, bounds: Bounds) -> Self {
        let mut parts = self.parts;
        parts.bounds = bounds;
        Instance::new(parts).expect("lengths unchanged")
    }

    pub fn name(&self) -> &str {
        &self.parts.name
    }

    pub fn sizes(&self) -> Sizes {
        self.parts.sizes
    }

    pub fn num_stores(&self) -> usize {
        self.parts.sizes.m
    }

    pub fn num_plants(&self) -> usize {
        self.parts.sizes.n
    }

    pub fn num_warehouses(&self) -> usize {
        self.parts.sizes.k
    }

    pub fn num_dcs(&self) -> usize {
        self.parts.sizes.j
    }

    pub fn bounds(&self) -> Bounds {
        self.parts.bounds
    }

    pub fn revenue(&self, store: usize) -> Cost {
        self.parts.revenue[store]
    }

    pub fn fixed(&self) -> &FixedCosts {
        &self.parts.fixed
    }

    pub fn fixed_cost(&self, level: Level, idx: usize) -> Cost {
        let f = &self.parts.fixed;
        match level {
            Level::Store => f.store[idx],
            Level::Plant => f.plant[idx],
            Level::Warehouse => f.warehouse[idx],
            Level::Dc => f.dc[idx],
        }
    }

    /// Eligible plants of a store (sorted).
    pub fn eligibility(&self, store: usize) -> &[usize] {
        &self.parts.eligibility[store]
    }

    pub fn is_eligible(&self, store: usize, plant: usize) -> bool {
        let n = self.parts.sizes.n;
        store < self.parts.sizes.m && plant < n && self.index.eligible[store * n + plant]
    }

    pub fn pw_arcs(&self) -> &ArcMap {
        &self.parts.pw_arcs
    }

    pub fn wd_arcs(&self) -> &ArcMap {
        &self.parts.wd_arcs
    }

    pub fn ds_arcs(&self) -> &ArcMap {
        &self.parts.ds_arcs
    }

    #[inline]
    pub fn pw_cost(&self, plant: usize, warehouse: usize) -> Option<Cost> {
        let Sizes { n, k, .. } = self.parts.sizes;
        if plant < n && warehouse < k {
            self.index.pw[plant * k + warehouse]
        } else {
            None
        }
    }

    #[inline]
    pub fn wd_cost(&self, warehouse: usize, dc: usize) -> Option<Cost> {
        let Sizes { k, j, .. } = self.parts.sizes;
        if warehouse < k && dc < j {
            self.index.wd[warehouse * j + dc]
        } else {
            None
        }
    }

    #[inline]
    pub fn ds_cost(&self, dc: usize, store: usize) -> Option<Cost> {
        let Sizes { m, j, .. } = self.parts.sizes;
        if dc < j && store < m {
            self.index.ds[store * j + dc]
        } else {
            None
        }
    }

    /// Distribution centers with an arc into `store` (the set D_m), sorted.
    pub fn dcs_of_store(&self, store: usize) -> &[usize] {
        &self.index.store_dcs[store]
    }

    /// Upper bound on the objective: every store with positive margin opened
    /// for free.
    pub fn revenue_total(&self) -> Cost {
        self.parts.revenue.iter().sum()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), InstanceError> {
        let path = path.as_ref();
        let io_err = |source| InstanceError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = fs::File::create(path).map_err(io_err)?;
        let mut w = BufWriter::new(file);
        w.write_all(self.to_json().as_bytes()).map_err(io_err)?;
        w.flush().map_err(io_err)
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let parts = InstanceParts {
            name: file.name,
            sizes: file.sizes,
            bounds: file.bounds,
            revenue: file.revenue,
            fixed: file.fixed,
            eligibility: file.eligibility,
            pw_arcs: arc_map("pw_arcs", &file.pw_arcs)?,
            wd_arcs: arc_map("wd_arcs", &file.wd_arcs)?,
            ds_arcs: arc_map("ds_arcs", &file.ds_arcs)?,
        };
        Instance::new(parts)
    }

    pub fn to_json(&self) -> String {
        let p = &self.parts;
        let triples =
            |arcs: &ArcMap| -> Vec<(usize, usize, Cost)> { arcs.iter().map(|(&(a, b), &c)| (a, b, c)).collect() };
        let file = InstanceFile {
            name: p.name.clone(),
            sizes: p.sizes,
            bounds: p.bounds,
            revenue: p.revenue.clone(),
            fixed: p.fixed.clone(),
            eligibility: p.eligibility.clone(),
            pw_arcs: triples(&p.pw_arcs),
            wd_arcs: triples(&p.wd_arcs),
            ds_arcs: triples(&p.ds_arcs),
        };
        let mut s = serde_json::to_string(&file).expect("instance serializes");
        s.push('\n');
        s
    }
}

fn check_len(field: &'static str, found: usize, expected: usize) -> Result<(), InstanceError> {
    if found == expected {
        Ok(())
    } else {
        Err(InstanceError::Length { field, found, expected })
    }
}

fn arc_map(field: &'static str, triples: &[(usize, usize, Cost)]) -> Result<ArcMap, InstanceError> {
    let mut map = ArcMap::new();
    for &(from, to, cost) in triples {
        if map.insert((from, to), cost).is_some() {
            return Err(InstanceError::DuplicateArc { field, from, to });
        }
    }
    Ok(map)
}

/// On-disk layout of an instance.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    name: String,
    sizes: Sizes,
    bounds: Bounds,
    revenue: Vec<Cost>,
    fixed: FixedCosts,
    eligibility: Vec<Vec<usize>>,
    pw_arcs: Vec<(usize, usize, Cost)>,
    wd_arcs: Vec<(usize, usize, Cost)>,
    ds_arcs: Vec<(usize, usize, Cost)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceViolation {
    EmptySet {
        level: Level,
    },
    BoundExceedsSize {
        level: Level,
        bound: usize,
        size: usize,
    },
    ArcOutOfRange {
        layer: Layer,
        from: usize,
        to: usize,
    },
    EligibilityOutOfRange {
        store: usize,
        plant: usize,
    },
    NegativeValue {
        field: &'static str,
        index: usize,
        value: Cost,
    },
    NegativeArcCost {
        layer: Layer,
        from: usize,
        to: usize,
        cost: Cost,
    },
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceViolation::EmptySet { level } => write!(f, "{level} set is empty"),
            InstanceViolation::BoundExceedsSize { level, bound, size } => {
                write!(f, "{level} bound exceeds set size ({bound} > {size})")
            }
            InstanceViolation::ArcOutOfRange { layer, from, to } => {
                write!(f, "arc endpoint out of range: {layer} arc ({from}, {to})")
            }
            InstanceViolation::EligibilityOutOfRange { store, plant } => {
                write!(f, "eligibility of store {store} names plant {plant}, out of range")
            }
            InstanceViolation::NegativeValue { field, index, value } => {
                write!(f, "negative value {value} in `{field}` at index {index}")
            }
            InstanceViolation::NegativeArcCost { layer, from, to, cost } => {
                write!(f, "negative cost {cost} on {layer} arc ({from}, {to})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<InstanceViolation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every invariant violation of `inst`. An empty report means valid.
pub fn validate(inst: &Instance) -> ValidationReport {
    let p = inst.parts();
    let s = p.sizes;
    let mut out = Vec::new();

    for level in [Level::Store, Level::Plant, Level::Warehouse, Level::Dc] {
        let size = s.of(level);
        let bound = p.bounds.of(level);
        if size == 0 {
            out.push(InstanceViolation::EmptySet { level });
        }
        if bound > size {
            out.push(InstanceViolation::BoundExceedsSize { level, bound, size });
        }
    }

    let arrays: [(&'static str, &[Cost]); 5] = [
        ("revenue", &p.revenue),
        ("fixed.store", &p.fixed.store),
        ("fixed.plant", &p.fixed.plant),
        ("fixed.warehouse", &p.fixed.warehouse),
        ("fixed.dc", &p.fixed.dc),
    ];
    for (field, values) in arrays {
        for (index, &value) in values.iter().enumerate() {
            if value < 0 {
                out.push(InstanceViolation::NegativeValue { field, index, value });
            }
        }
    }

    for (store, plants) in p.eligibility.iter().enumerate() {
        for &plant in plants {
            if plant >= s.n {
                out.push(InstanceViolation::EligibilityOutOfRange { store, plant });
            }
        }
    }

    let layers = [
        (Layer::PlantWarehouse, &p.pw_arcs, s.n, s.k),
        (Layer::WarehouseDc, &p.wd_arcs, s.k, s.j),
        (Layer::DcStore, &p.ds_arcs, s.j, s.m),
    ];
    for (layer, arcs, from_size, to_size) in layers {
        for (&(from, to), &cost) in arcs {
            if from >= from_size || to >= to_size {
                out.push(InstanceViolation::ArcOutOfRange { layer, from, to });
            }
            if cost < 0 {
                out.push(InstanceViolation::NegativeArcCost { layer, from, to, cost });
            }
        }
    }

    ValidationReport { violations: out }
}

/// Stores that can be served by at least one complete path
/// plant -> warehouse -> dc -> store.
pub fn reachable_stores(inst: &Instance) -> BTreeSet<usize> {
    let Sizes { m, k, .. } = inst.sizes();
    let mut reachable = BTreeSet::new();
    let mut warehouse_ok = vec![false; k];
    for store in 0..m {
        warehouse_ok.iter_mut().for_each(|w| *w = false);
        for &plant in inst.eligibility(store) {
            for (wh, ok) in warehouse_ok.iter_mut().enumerate() {
                if inst.pw_cost(plant, wh).is_some() {
                    *ok = true;
                }
            }
        }
        let served = inst.dcs_of_store(store).iter().any(|&dc| {
            warehouse_ok
                .iter()
                .enumerate()
                .any(|(wh, &ok)| ok && inst.wd_cost(wh, dc).is_some())
        });
        if served {
            reachable.insert(store);
        }
    }
    reachable
}

/// Inclusive integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: Cost,
    pub hi: Cost,
}

impl IntRange {
    pub const fn new(lo: Cost, hi: Cost) -> Self {
        IntRange { lo, hi }
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Parameters of the random instance generator.
///
/// The value ranges are this crate's own defaults; the experimental setup
/// only fixes matrix density and bound fraction at 20%.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub density: f64,
    pub bound_fraction: f64,
    pub revenue_range: IntRange,
    pub transport_cost_range: IntRange,
    pub fixed_store_range: IntRange,
    pub fixed_plant_range: IntRange,
    pub fixed_warehouse_range: IntRange,
    pub fixed_dc_range: IntRange,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            m: 2000,
            n: 30,
            k: 50,
            j: 150,
            density: 0.2,
            bound_fraction: 0.2,
            revenue_range: IntRange::new(50, 150),
            transport_cost_range: IntRange::new(1, 20),
            fixed_store_range: IntRange::new(5, 50),
            fixed_plant_range: IntRange::new(20, 100),
            fixed_warehouse_range: IntRange::new(20, 100),
            fixed_dc_range: IntRange::new(20, 100),
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn with_sizes(m: usize, n: usize, k: usize, j: usize) -> Self {
        GenParams {
            m,
            n,
            k,
            j,
            ..GenParams::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn check(&self) -> Result<(), InstanceError> {
        let param = |field: &'static str, reason: &str| {
            Err(InstanceError::Param {
                field,
                reason: reason.to_string(),
            })
        };
        for (field, v) in [("m", self.m), ("n", self.n), ("k", self.k), ("j", self.j)] {
            if v == 0 {
                return param(field, "set size must be positive");
            }
        }
        for (field, v) in [("density", self.density), ("bound_fraction", self.bound_fraction)] {
            if !(v > 0.0 && v <= 1.0) {
                return param(field, "must lie in (0, 1]");
            }
        }
        let ranges = [
            ("revenue_range", self.revenue_range),
            ("transport_cost_range", self.transport_cost_range),
            ("fixed_store_range", self.fixed_store_range),
            ("fixed_plant_range", self.fixed_plant_range),
            ("fixed_warehouse_range", self.fixed_warehouse_range),
            ("fixed_dc_range", self.fixed_dc_range),
        ];
        for (field, r) in ranges {
            if r.lo < 0 {
                return param(field, "lower end must be non-negative");
            }
            if r.lo > r.hi {
                return param(field, "lower end exceeds upper end");
            }
        }
        Ok(())
    }

    /// `ceil(bound_fraction * size)`, robust to the representation error of
    /// fractions such as 0.2.
    pub fn bound_for(&self, size: usize) -> usize {
        let raw = self.bound_fraction * size as f64;
        let b = (raw - 1e-9).ceil().max(0.0) as usize;
        b.min(size)
    }
}

/// Draws a random instance. Every eligibility entry and arc exists
/// independently with probability `density`; all values are uniform in
/// their ranges. Deterministic in `params.seed`.
pub fn generate(params: &GenParams) -> Result<Instance, InstanceError> {
    params.check()?;
    let GenParams { m, n, k, j, .. } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let draw = |r: IntRange, rng: &mut ChaCha8Rng| rng.gen_range(r.lo..=r.hi);

    let revenue: Vec<Cost> = (0..m).map(|_| draw(params.revenue_range, &mut rng)).collect();
    let fixed = FixedCosts {
        store: (0..m).map(|_| draw(params.fixed_store_range, &mut rng)).collect(),
        plant: (0..n).map(|_| draw(params.fixed_plant_range, &mut rng)).collect(),
        warehouse: (0..k).map(|_| draw(params.fixed_warehouse_range, &mut rng)).collect(),
        dc: (0..j).map(|_| draw(params.fixed_dc_range, &mut rng)).collect(),
    };
    let eligibility = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen_bool(params.density)).collect())
        .collect();
    let arcs = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
        let mut map = ArcMap::new();
        for a in 0..rows {
            for b in 0..cols {
                if rng.gen_bool(params.density) {
                    map.insert((a, b), draw(params.transport_cost_range, rng));
                }
            }
        }
        map
    };
    let pw_arcs = arcs(n, k, &mut rng);
    let wd_arcs = arcs(k, j, &mut rng);
    let ds_arcs = arcs(j, m, &mut rng);

    Instance::new(InstanceParts {
        name: format!("MFL-{m}-{n}-{k}-{j}-{}", params.seed),
        sizes: Sizes { m, n, k, j },
        bounds: Bounds {
            stores: params.bound_for(m),
            plants: params.bound_for(n),
            warehouses: params.bound_for(k),
            dcs: params.bound_for(j),
        },
        revenue,
        fixed,
        eligibility,
        pw_arcs,
        wd_arcs,
        ds_arcs,
    })
}
