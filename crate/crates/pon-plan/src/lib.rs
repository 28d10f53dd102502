//! Capacity planning for passive optical access networks.
//!
//! The crate answers one question: given measured per-household traffic and a
//! compound growth rate, how long does each PON standard sustain a given
//! split ratio before its shared upstream runs out? It is organised as a
//! pipeline:
//!
//! * [`forecast`] — converts GB/month consumption into sustained Mb/s and
//!   projects it forward with compound growth and peak factors.
//! * [`zipf`] — builds the skewed (heavy-hitter) user population whose mean
//!   matches the forecast peak demand.
//! * [`sim`] — Monte Carlo estimation of aggregate load percentiles on a
//!   shared splitter, with bootstrap confidence intervals.
//! * [`catalog`] — the PON technology table (builtin or loaded from CSV).
//! * [`planner`] — feasibility verdicts, maximum split ratios, upgrade years
//!   and multi-year schedules derived from the simulated percentiles.
//! * [`report`] / [`svg`] — table, CSV, JSON and chart output.
//!
//! All randomness is driven by explicitly seeded, per-trial stream ciphers,
//! so every result is reproducible bit-for-bit regardless of thread count.
//!
//! # Example
//!
//! ```
//! use pon_plan::forecast::ForecastParams;
//! use pon_plan::sim::{run_scenario, ScenarioConfig};
//!
//! let cfg = ScenarioConfig {
//!     trials: 2_000,
//!     bootstrap_reps: 100,
//!     ..ScenarioConfig::with_split(32)
//! };
//! let summary = run_scenario(&ForecastParams::default(), 2025, &cfg).unwrap();
//! let p99 = summary.estimate_at(0.99).unwrap();
//! assert!(p99.ci_low <= p99.point && p99.point <= p99.ci_high);
//! ```

pub mod catalog;
pub mod cli;
pub mod error;
pub mod forecast;
pub mod planner;
pub mod report;
pub mod sim;
pub mod svg;
pub mod zipf;

pub use catalog::{builtin_catalog, load_catalog, Catalog, PonTechnology};
pub use error::{Error, Result};
pub use forecast::{demand_table, gb_month_to_mbps, project_demand, ForecastParams, TrafficDemand};
pub use planner::{
    build_schedule, check_feasibility, max_split, upgrade_year, FeasibilityVerdict,
    PlanningPolicy, UpgradeSchedule,
};
pub use sim::{
    bootstrap_ci, empirical_percentile, run_scenario, simulate_aggregate, PercentileEstimate,
    ScenarioConfig, SimulationSummary,
};
pub use zipf::{build_population, cdf_points, population_stats, share_of_top, ZipfPopulation};
