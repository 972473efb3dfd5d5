//! Solver toolkit for the four-level facility location problem: choose which
//! retail stores to serve and route each one through a plant, a warehouse and
//! a distribution center so that total profit is maximized.

pub mod bench;
pub mod delta;
pub mod fixtures;
pub mod instance;
pub mod local_search;
pub mod oracle;
pub mod run;
mod search;
pub mod sequence;
pub mod solution;
pub mod stats;
pub mod tabu_search;
