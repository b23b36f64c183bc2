//! Monte Carlo simulator for the 2-D random network: point generation in a
//! sector, Strategy A/B routing and energy over realized hop lengths.

mod export;
mod points;
mod route;
mod sim;

pub use export::{write_points_csv, write_route_csv};
pub use points::{generate_ppp, generate_uniform_count, Point, PointSet, SectorRegion};
pub use route::{
    route_energy, route_strategy_a, route_strategy_a_anchored, route_strategy_b, Route, RouteNode,
    SectorAnchor, Waypoint,
};
pub use sim::{
    monte_carlo_compare, monte_carlo_sweep, simulate_trial, simulate_trial_sweep, CompareStats,
    EnergyStats, HopSplit, Placement, SimConfig, SweepStats, TrialOutcome,
};
