//! Minimax regret 1-median on dynamic path networks.
//!
//! A path network carries a supply interval on every vertex. For a sink
//! position `x` and a scenario `s` (one supply per vertex), `Φ^s(x)` is the
//! total evacuation time when every unit of supply travels to `x` under a
//! uniform edge capacity. The regret of `x` under `s` is its excess over the
//! best sink for `s`; [`solve`] finds the sink minimizing the worst regret
//! over all scenarios.
//!
//! The crate is `no_std` and needs only `alloc`.
//!
//! ```
//! use regret_median_core::{network::fixtures::fixture_a, solve};
//!
//! let sol = solve(&fixture_a());
//! assert_eq!(sol.x_star.coordinate, 3.0);
//! assert_eq!(sol.value, 0.0);
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod envelope;
pub mod evacuation;
pub mod network;
pub mod oracle;
pub mod regret;
pub mod scenarios;

pub use evacuation::{cost, median, vertex_costs_all, Direction};
pub use network::{Location, NetworkError, PathNetwork, PointOnPath, Scenario, WeightInterval};
pub use regret::{solve, solve_with, Solution, SolveOptions, Strategy};
pub use scenarios::{universe, ScenarioUniverse, Side};
