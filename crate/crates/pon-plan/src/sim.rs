//! Monte Carlo estimation of aggregate PON offered load: trial generation,
//! quantile estimation, and bootstrap confidence intervals.
//!
//! Determinism contract: every random quantity is derived from a fixed seed
//! plus a stream index (one stream per Monte Carlo trial, one per bootstrap
//! resample), so results are bit-identical for a given seed regardless of
//! thread count or execution order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forecast::{project_demand, ForecastParams, TrafficDemand};
use crate::zipf::{build_population, ZipfPopulation, DEFAULT_ALPHA, DEFAULT_POPULATION_SIZE};

pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_BOOTSTRAP_REPS: usize = 1_000;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;
pub const DEFAULT_PERCENTILES: [f64; 3] = [0.50, 0.90, 0.99];
pub const DEFAULT_SEED: u64 = 42;

/// Bootstrap resamples draw from a stream space disjoint from trial streams:
/// trial i uses stream i, resample j uses stream (1<<63) | j.
const BOOTSTRAP_STREAM_TAG: u64 = 1 << 63;

/// Everything needed to reproduce one simulated (population, split) scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Users per PON tree: the N in a 1:N split.
    pub split_n: u32,
    /// Number of ranks in the user population.
    pub pop_size: usize,
    /// Skew of the user population (0 = uniform).
    pub alpha: f64,
    /// Monte Carlo trial count.
    pub trials: usize,
    /// Bootstrap resample count.
    pub bootstrap_reps: usize,
    /// Confidence level for bootstrap intervals, in (0, 1).
    pub confidence: f64,
    /// Percentile levels to estimate, each in (0, 1).
    pub percentiles: Vec<f64>,
    /// Seed for all random streams of this scenario.
    pub seed: u64,
}

impl ScenarioConfig {
    /// Defaults for a given split ratio: population 100 at alpha 1.0,
    /// 100,000 trials, 1,000 resamples, 95% confidence, p50/p90/p99.
    pub fn with_split(split_n: u32) -> Self {
        Self {
            split_n,
            pop_size: DEFAULT_POPULATION_SIZE,
            alpha: DEFAULT_ALPHA,
            trials: DEFAULT_TRIALS,
            bootstrap_reps: DEFAULT_BOOTSTRAP_REPS,
            confidence: DEFAULT_CONFIDENCE,
            percentiles: DEFAULT_PERCENTILES.to_vec(),
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.split_n < 1 {
            return Err(Error::InvalidInput("split must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if self.bootstrap_reps < 1 {
            return Err(Error::InvalidInput(
                "bootstrap reps must be at least 1".into(),
            ));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidInput(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        for &p in &self.percentiles {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "percentile must lie in (0, 1), got {p}"
                )));
            }
        }
        Ok(())
    }
}

/// The raw Monte Carlo outcome: one aggregate-load sample per trial, plus the
/// inputs that produced it.
#[derive(Debug, Clone)]
pub struct TrialSet {
    /// Aggregate offered load per trial, Mb/s, in trial order.
    pub samples: Vec<f64>,
    pub population: ZipfPopulation,
    pub split_n: u32,
    pub seed: u64,
}

/// A percentile point estimate with its bootstrap confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PercentileEstimate {
    /// Percentile level in (0, 1).
    pub p: f64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Five-number summary with whiskers at the most extreme samples within
/// 1.5 IQR of the quartiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boxplot {
    pub whisker_low: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_high: f64,
}

/// Full result for one (year, split) scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub year: i32,
    pub split_n: u32,
    pub demand: TrafficDemand,
    pub estimates: Vec<PercentileEstimate>,
    pub boxplot: Boxplot,
}

impl SimulationSummary {
    /// The estimate for percentile level `p` (exact match on the level).
    pub fn estimate_at(&self, p: f64) -> Result<&PercentileEstimate> {
        self.estimates
            .iter()
            .find(|e| e.p == p)
            .ok_or(Error::MissingPercentile(p))
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `trials` aggregate-load samples: each is the sum of `split_n` values
/// picked independently and uniformly (with replacement) from the population.
///
/// Trial i depends only on (seed, i), so the output is bit-identical across
/// thread counts.
pub fn simulate_aggregate(pop: &ZipfPopulation, cfg: &ScenarioConfig) -> Result<TrialSet> {
    cfg.validate()?;
    let values = &pop.values;
    let n = values.len();
    let split = cfg.split_n as usize;
    let seed = cfg.seed;
    let samples: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, trial as u64);
            let mut total = 0.0;
            for _ in 0..split {
                total += values[rng.random_range(0..n)];
            }
            total
        })
        .collect();
    Ok(TrialSet {
        samples,
        population: pop.clone(),
        split_n: cfg.split_n,
        seed,
    })
}

/// Linear-interpolation quantile of a sorted slice: h = 1 + (n-1)p, result
/// interpolates between the floor(h)-th and ceil(h)-th order statistics.
fn sorted_percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = 1.0 + (n as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - h.floor();
    let a = sorted[lo - 1];
    let b = sorted[hi - 1];
    a + frac * (b - a)
}

fn validate_percentile(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!(
            "percentile must lie in (0, 1), got {p}"
        )));
    }
    Ok(())
}

/// Linear-interpolation quantile of an arbitrary sample.
pub fn empirical_percentile(samples: &[f64], p: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidInput(
            "percentile of an empty sample is undefined".into(),
        ));
    }
    validate_percentile(p)?;
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted_percentile(&sorted, p))
}

/// Which order statistics a set of percentile levels needs, so one pass over
/// a resample's counts can serve all levels.
struct RankPlan {
    /// Sorted, deduplicated 1-based ranks.
    ranks: Vec<usize>,
    /// Per level: indices into `ranks` for the low/high order statistics and
    /// the interpolation fraction.
    per_level: Vec<(usize, usize, f64)>,
}

fn rank_plan(n: usize, levels: &[f64]) -> RankPlan {
    let mut ranks: Vec<usize> = Vec::with_capacity(levels.len() * 2);
    let mut raw: Vec<(usize, usize, f64)> = Vec::with_capacity(levels.len());
    for &p in levels {
        let h = 1.0 + (n as f64 - 1.0) * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        raw.push((lo, hi, h - h.floor()));
        ranks.push(lo);
        ranks.push(hi);
    }
    ranks.sort_unstable();
    ranks.dedup();
    let per_level = raw
        .into_iter()
        .map(|(lo, hi, frac)| {
            let li = ranks.binary_search(&lo).unwrap();
            let hi_i = ranks.binary_search(&hi).unwrap();
            (li, hi_i, frac)
        })
        .collect();
    RankPlan { ranks, per_level }
}

/// Extracts the requested order statistics of a with-replacement resample
/// described by per-original-sample `counts`, walking the sorted originals
/// once instead of materializing and sorting the resample.
fn ranked_resample_values(sorted: &[f64], counts: &[u32], ranks: &[usize], out: &mut [f64]) {
    let mut cumulative = 0usize;
    let mut next = 0usize;
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        cumulative += c as usize;
        while next < ranks.len() && ranks[next] <= cumulative {
            out[next] = sorted[i];
            next += 1;
        }
        if next == ranks.len() {
            break;
        }
    }
}

/// Bootstrap confidence intervals for several percentile levels of one trial
/// set, sharing the resamples across levels.
///
/// Point estimates come from the full trial set; interval endpoints are the
/// ((1-confidence)/2, 1-(1-confidence)/2) quantiles of each level's estimate
/// over `reps` with-replacement resamples. Intervals always bracket the
/// point estimate.
pub fn bootstrap_percentiles(
    trials: &TrialSet,
    levels: &[f64],
    reps: usize,
    confidence: f64,
    seed: u64,
) -> Result<Vec<PercentileEstimate>> {
    if trials.samples.is_empty() {
        return Err(Error::InvalidInput("trial set is empty".into()));
    }
    if reps < 1 {
        return Err(Error::InvalidInput(
            "bootstrap reps must be at least 1".into(),
        ));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidInput(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    for &p in levels {
        validate_percentile(p)?;
    }

    let mut sorted = trials.samples.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    let plan = rank_plan(n, levels);

    // reps x levels matrix of resampled percentile estimates.
    let estimates_per_rep: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, BOOTSTRAP_STREAM_TAG | rep as u64);
            let mut counts = vec![0u32; n];
            for _ in 0..n {
                counts[rng.random_range(0..n)] += 1;
            }
            let mut at_ranks = vec![0.0; plan.ranks.len()];
            ranked_resample_values(&sorted, &counts, &plan.ranks, &mut at_ranks);
            plan.per_level
                .iter()
                .map(|&(lo, hi, frac)| {
                    let a = at_ranks[lo];
                    let b = at_ranks[hi];
                    a + frac * (b - a)
                })
                .collect()
        })
        .collect();

    let lower_q = (1.0 - confidence) / 2.0;
    let upper_q = 1.0 - lower_q;
    levels
        .iter()
        .enumerate()
        .map(|(li, &p)| {
            let point = sorted_percentile(&sorted, p);
            let mut reps_at_level: Vec<f64> =
                estimates_per_rep.iter().map(|row| row[li]).collect();
            reps_at_level.sort_unstable_by(f64::total_cmp);
            let ci_low = sorted_percentile(&reps_at_level, lower_q).min(point);
            let ci_high = sorted_percentile(&reps_at_level, upper_q).max(point);
            Ok(PercentileEstimate {
                p,
                point,
                ci_low,
                ci_high,
            })
        })
        .collect()
}

/// Bootstrap confidence interval for a single percentile level.
pub fn bootstrap_ci(
    trials: &TrialSet,
    p: f64,
    reps: usize,
    confidence: f64,
    seed: u64,
) -> Result<PercentileEstimate> {
    Ok(bootstrap_percentiles(trials, &[p], reps, confidence, seed)?[0])
}

fn tukey_boxplot(sorted: &[f64]) -> Boxplot {
    let q1 = sorted_percentile(sorted, 0.25);
    let median = sorted_percentile(sorted, 0.50);
    let q3 = sorted_percentile(sorted, 0.75);
    let reach = 1.5 * (q3 - q1);
    // Most extreme samples still within reach of the quartiles. q1 and q3
    // are themselves within the fences, so both lookups are in range.
    let low_fence = q1 - reach;
    let high_fence = q3 + reach;
    let whisker_low = sorted[sorted.partition_point(|&x| x < low_fence)];
    let whisker_high = sorted[sorted.partition_point(|&x| x <= high_fence) - 1];
    Boxplot {
        whisker_low,
        q1,
        median,
        q3,
        whisker_high,
    }
}

/// Runs one full (year, split) scenario: project demand, build the user
/// population at the busy-hour mean, simulate, and summarize percentiles
/// (with bootstrap intervals) plus a Tukey boxplot.
pub fn run_scenario(
    params: &ForecastParams,
    year: i32,
    cfg: &ScenarioConfig,
) -> Result<SimulationSummary> {
    let demand = project_demand(params, year)?;
    let pop = build_population(cfg.pop_size, cfg.alpha, demand.peak_mbps)?;
    let trials = simulate_aggregate(&pop, cfg)?;
    let estimates = bootstrap_percentiles(
        &trials,
        &cfg.percentiles,
        cfg.bootstrap_reps,
        cfg.confidence,
        cfg.seed,
    )?;
    let mut sorted = trials.samples;
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(SimulationSummary {
        year,
        split_n: cfg.split_n,
        demand,
        estimates,
        boxplot: tukey_boxplot(&sorted),
    })
}
