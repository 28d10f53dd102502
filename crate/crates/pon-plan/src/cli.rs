//! Command-line interface: argument definitions and dispatch.

use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::catalog::{builtin_catalog, load_catalog, Catalog};
use crate::error::Result;
use crate::forecast::{self, demand_table, ForecastParams};
use crate::planner::{
    self, build_schedule, check_feasibility, max_split, upgrade_year, PlanningPolicy,
};
use crate::report::{
    render_feasibility, render_forecast, render_max_split, render_schedule, render_simulate,
    render_upgrade_year, FeasibilityContext, OutputFormat,
};
use crate::sim::{self, run_scenario, ScenarioConfig, SimulationSummary};
use crate::svg::{boxplot_chart, schedule_chart, CapacityLine};
use crate::zipf;

/// Environment variable that overrides the default random seed; an explicit
/// `--seed` wins over both.
pub const SEED_ENV_VAR: &str = "PON_PLAN_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "pon-plan",
    version,
    about = "Capacity planning for passive optical access networks",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project per-household traffic demand across years
    Forecast(ForecastArgs),
    /// Estimate aggregate load percentiles per split ratio (Monte Carlo)
    Simulate(SimulateArgs),
    /// Decide which split ratios fit which technologies, and until when
    Plan(PlanArgs),
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    /// Years to project (comma separated)
    #[arg(long, value_delimiter = ',', default_values_t = vec![2016, 2020, 2025, 2030, 2035])]
    pub years: Vec<i32>,

    /// Peak-to-average factors; one demand row per (year, factor)
    #[arg(long, value_delimiter = ',', default_values_t = vec![3.0, 5.0])]
    pub peak_factors: Vec<f64>,

    /// Measured base consumption, GB per month per household
    #[arg(long, default_value_t = forecast::DEFAULT_BASE_GB_MONTH)]
    pub base_gb_month: f64,

    /// Year the base consumption was measured in
    #[arg(long, default_value_t = forecast::DEFAULT_BASE_YEAR)]
    pub base_year: i32,

    /// Compound annual growth rate as a fraction (0.25 = 25%/year)
    #[arg(long, default_value_t = forecast::DEFAULT_CAGR, allow_negative_numbers = true)]
    pub cagr: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario year
    #[arg(long, default_value_t = forecast::DEFAULT_BASE_YEAR)]
    pub year: i32,

    /// Split ratio 1:N; repeat for several boxes (default: 4..1024 ladder)
    #[arg(long = "split", action = ArgAction::Append)]
    pub split: Vec<u32>,

    /// Skew of the user population (0 = everyone equal)
    #[arg(long, default_value_t = zipf::DEFAULT_ALPHA)]
    pub alpha: f64,

    /// Number of ranks in the user population
    #[arg(long, default_value_t = zipf::DEFAULT_POPULATION_SIZE)]
    pub pop_size: usize,

    /// Peak-to-average demand factor
    #[arg(long, default_value_t = forecast::DEFAULT_PEAK_FACTOR)]
    pub peak_factor: f64,

    /// Monte Carlo trial count
    #[arg(long, default_value_t = sim::DEFAULT_TRIALS)]
    pub trials: usize,

    /// Bootstrap resample count
    #[arg(long, default_value_t = sim::DEFAULT_BOOTSTRAP_REPS)]
    pub reps: usize,

    /// Random seed (PON_PLAN_SEED overrides this default; --seed wins)
    #[arg(long, env = SEED_ENV_VAR, default_value_t = sim::DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    /// Draw capacity reference lines for these technologies (svg; repeatable)
    #[arg(long = "tech", action = ArgAction::Append)]
    pub tech: Vec<String>,

    /// Catalog CSV file replacing the builtin technologies
    #[arg(long, value_name = "FILE")]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(subcommand)]
    pub action: PlanAction,
}

#[derive(Debug, Subcommand)]
pub enum PlanAction {
    /// Verdict for one (technology, year, split) scenario
    Feasibility {
        /// Technology name from the catalog
        #[arg(long)]
        tech: String,
        #[arg(long)]
        year: i32,
        /// Split ratio 1:N
        #[arg(long)]
        split: u32,
        #[command(flatten)]
        common: PlanCommon,
    },
    /// Largest feasible split for a technology in a year
    MaxSplit {
        #[arg(long)]
        tech: String,
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        common: PlanCommon,
    },
    /// First year a (technology, split) pair stops fitting
    UpgradeYear {
        #[arg(long)]
        tech: String,
        #[arg(long)]
        split: u32,
        /// Last year considered
        #[arg(long, default_value_t = 2050)]
        horizon: i32,
        #[command(flatten)]
        common: PlanCommon,
    },
    /// Max-split grid for every catalog technology over a year range
    Schedule {
        /// Years in the grid (comma separated)
        #[arg(long, value_delimiter = ',', default_values_t = (2016..=2035).collect::<Vec<i32>>())]
        years: Vec<i32>,
        #[command(flatten)]
        common: PlanCommon,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PlanCommon {
    /// Catalog CSV file replacing the builtin technologies
    #[arg(long, value_name = "FILE")]
    pub catalog: Option<PathBuf>,

    /// Usable fraction of upstream capacity
    #[arg(long, default_value_t = planner::DEFAULT_HEADROOM)]
    pub headroom: f64,

    /// Percentile compared against the capacity limit
    #[arg(long, default_value_t = planner::DEFAULT_DECISION_PERCENTILE)]
    pub percentile: f64,

    /// Compare the bootstrap CI upper bound instead of the point estimate
    #[arg(long)]
    pub use_ci_upper: bool,

    /// Consider splits beyond each standard's maximum
    #[arg(long)]
    pub ignore_standard_split: bool,

    /// Peak-to-average demand factor
    #[arg(long, default_value_t = forecast::DEFAULT_PEAK_FACTOR)]
    pub peak_factor: f64,

    /// Skew of the user population
    #[arg(long, default_value_t = zipf::DEFAULT_ALPHA)]
    pub alpha: f64,

    /// Number of ranks in the user population
    #[arg(long, default_value_t = zipf::DEFAULT_POPULATION_SIZE)]
    pub pop_size: usize,

    /// Monte Carlo trial count
    #[arg(long, default_value_t = sim::DEFAULT_TRIALS)]
    pub trials: usize,

    /// Bootstrap resample count
    #[arg(long, default_value_t = sim::DEFAULT_BOOTSTRAP_REPS)]
    pub reps: usize,

    /// Random seed (PON_PLAN_SEED overrides this default; --seed wins)
    #[arg(long, env = SEED_ENV_VAR, default_value_t = sim::DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

fn resolve_catalog(path: &Option<PathBuf>) -> Result<Catalog> {
    match path {
        Some(p) => load_catalog(&std::fs::read_to_string(p)?),
        None => Ok(builtin_catalog()),
    }
}

fn cmd_forecast(args: ForecastArgs) -> Result<String> {
    let params = ForecastParams {
        base_year: args.base_year,
        base_gb_month: args.base_gb_month,
        cagr: args.cagr,
        peak_factor: forecast::DEFAULT_PEAK_FACTOR,
    };
    let rows = demand_table(&params, &args.years, &args.peak_factors)?;
    render_forecast(&rows, args.format)
}

fn cmd_simulate(args: SimulateArgs) -> Result<String> {
    let splits = if args.split.is_empty() {
        planner::DEFAULT_SPLIT_OPTIONS.to_vec()
    } else {
        args.split.clone()
    };
    let params = ForecastParams {
        peak_factor: args.peak_factor,
        ..ForecastParams::default()
    };
    // Resolve capacity-line technologies up front so a bad name fails fast.
    let capacities: Vec<CapacityLine> = if args.tech.is_empty() {
        Vec::new()
    } else {
        let catalog = resolve_catalog(&args.catalog)?;
        args.tech
            .iter()
            .map(|name| {
                catalog.get(name).map(|t| CapacityLine {
                    name: t.name.clone(),
                    capacity_mbps: t.upstream_mbps,
                    limit_mbps: planner::DEFAULT_HEADROOM * t.upstream_mbps,
                })
            })
            .collect::<Result<_>>()?
    };
    let summaries: Vec<SimulationSummary> = splits
        .iter()
        .map(|&split_n| {
            let cfg = ScenarioConfig {
                pop_size: args.pop_size,
                alpha: args.alpha,
                trials: args.trials,
                bootstrap_reps: args.reps,
                seed: args.seed,
                ..ScenarioConfig::with_split(split_n)
            };
            run_scenario(&params, args.year, &cfg)
        })
        .collect::<Result<_>>()?;
    match args.format {
        OutputFormat::Svg => Ok(boxplot_chart(&summaries, &capacities)),
        other => render_simulate(&summaries, other),
    }
}

fn cmd_plan(args: PlanArgs) -> Result<String> {
    let common = match &args.action {
        PlanAction::Feasibility { common, .. }
        | PlanAction::MaxSplit { common, .. }
        | PlanAction::UpgradeYear { common, .. }
        | PlanAction::Schedule { common, .. } => common.clone(),
    };
    let catalog = resolve_catalog(&common.catalog)?;
    let policy = PlanningPolicy {
        headroom: common.headroom,
        decision_percentile: common.percentile,
        use_ci_upper: common.use_ci_upper,
        enforce_standard_split: !common.ignore_standard_split,
        ..PlanningPolicy::default()
    };
    let params = ForecastParams {
        peak_factor: common.peak_factor,
        ..ForecastParams::default()
    };
    let mut percentiles = sim::DEFAULT_PERCENTILES.to_vec();
    if !percentiles.contains(&common.percentile) {
        percentiles.push(common.percentile);
    }
    let base_cfg = ScenarioConfig {
        split_n: 1, // set per scenario below
        pop_size: common.pop_size,
        alpha: common.alpha,
        trials: common.trials,
        bootstrap_reps: common.reps,
        confidence: sim::DEFAULT_CONFIDENCE,
        percentiles,
        seed: common.seed,
    };

    match args.action {
        PlanAction::Feasibility {
            tech, year, split, ..
        } => {
            let tech = catalog.get(&tech)?;
            let cfg = ScenarioConfig {
                split_n: split,
                ..base_cfg
            };
            let summary = run_scenario(&params, year, &cfg)?;
            let verdict = check_feasibility(&summary, tech, &policy)?;
            render_feasibility(
                &FeasibilityContext {
                    tech: &tech.name,
                    year,
                    split,
                    percentile: policy.decision_percentile,
                },
                &verdict,
                common.format,
            )
        }
        PlanAction::MaxSplit { tech, year, .. } => {
            let tech = catalog.get(&tech)?;
            let best = max_split(tech, year, &params, &policy, &base_cfg)?;
            render_max_split(&tech.name, year, best, common.format)
        }
        PlanAction::UpgradeYear {
            tech,
            split,
            horizon,
            ..
        } => {
            let tech = catalog.get(&tech)?;
            let year = upgrade_year(tech, split, &params, &policy, horizon, &base_cfg)?;
            render_upgrade_year(&tech.name, split, year, common.format)
        }
        PlanAction::Schedule { years, .. } => {
            let schedule = build_schedule(&catalog, &years, &params, &policy, &base_cfg)?;
            match common.format {
                OutputFormat::Svg => Ok(schedule_chart(&schedule)),
                other => render_schedule(&schedule, other),
            }
        }
    }
}

/// Executes a parsed command line and returns the rendered output.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Forecast(args) => cmd_forecast(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Plan(args) => cmd_plan(args),
    }
}
