//! Tiny hand-checkable instances.
//!
//! `t1` has two stores sharing a single plant, warehouse and dc. The other
//! fixtures add one facility each so that every swap move has a target.
//! All indices are zero-based.

use crate::instance::{ArcMap, Bounds, FixedCosts, Instance, InstanceParts, Sizes};

fn t1_parts() -> InstanceParts {
    InstanceParts {
        name: "T1".to_string(),
        sizes: Sizes { m: 2, n: 1, k: 1, j: 1 },
        bounds: Bounds {
            stores: 2,
            plants: 1,
            warehouses: 1,
            dcs: 1,
        },
        revenue: vec![100, 80],
        fixed: FixedCosts {
            store: vec![10, 10],
            plant: vec![40],
            warehouse: vec![30],
            dc: vec![20],
        },
        eligibility: vec![vec![0], vec![0]],
        pw_arcs: ArcMap::from([((0, 0), 3)]),
        wd_arcs: ArcMap::from([((0, 0), 4)]),
        ds_arcs: ArcMap::from([((0, 0), 5), ((0, 1), 6)]),
    }
}

/// Optimum 45 with both stores open; no single opening from the empty
/// solution is profitable.
pub fn t1() -> Instance {
    Instance::new(t1_parts()).expect("fixture")
}

/// `t1` with the first store's revenue raised to 120 (optimum 65).
pub fn t1_prime() -> Instance {
    let mut p = t1_parts();
    p.name = "T1p".to_string();
    p.revenue[0] = 120;
    Instance::new(p).expect("fixture")
}

/// `t1` plus a second dc (fixed 25) reachable from the warehouse at cost 1
/// and serving store 0 at cost 2.
pub fn t2() -> Instance {
    let mut p = t1_parts();
    p.name = "T2".to_string();
    p.sizes.j = 2;
    p.bounds.dcs = 2;
    p.fixed.dc.push(25);
    p.wd_arcs.insert((0, 1), 1);
    p.ds_arcs.insert((1, 0), 2);
    Instance::new(p).expect("fixture")
}

/// `t1` plus a second warehouse (fixed 25) with pw cost 1 and wd cost 2.
pub fn t3() -> Instance {
    let mut p = t1_parts();
    p.name = "T3".to_string();
    p.sizes.k = 2;
    p.bounds.warehouses = 2;
    p.fixed.warehouse.push(25);
    p.pw_arcs.insert((0, 1), 1);
    p.wd_arcs.insert((1, 0), 2);
    Instance::new(p).expect("fixture")
}

/// `t1` plus a second plant (fixed 35) eligible for store 0 with pw cost 2.
pub fn t4() -> Instance {
    let mut p = t1_parts();
    p.name = "T4".to_string();
    p.sizes.n = 2;
    p.bounds.plants = 2;
    p.fixed.plant.push(35);
    p.pw_arcs.insert((1, 0), 2);
    p.eligibility[0].push(1);
    Instance::new(p).expect("fixture")
}
