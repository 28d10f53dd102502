//! Ranked heavy-hitter population: per-user offered bandwidths proportional
//! to k^(-alpha), scaled to a target mean.

use crate::error::{Error, Result};

pub const DEFAULT_POPULATION_SIZE: usize = 100;
pub const DEFAULT_ALPHA: f64 = 1.0;

/// A ranked population of per-user offered bandwidths.
///
/// Rank 1 is the heaviest user. A user's offered bandwidth is the value at a
/// rank drawn uniformly from 1..=size, so the arithmetic mean of `values` is
/// the per-user mean offered load.
#[derive(Debug, Clone, PartialEq)]
pub struct ZipfPopulation {
    pub size: usize,
    pub alpha: f64,
    pub mean_target: f64,
    /// Per-rank bandwidths in Mb/s, descending; `values[0]` is rank 1.
    pub values: Vec<f64>,
}

/// Builds the ranked population v_k = c * k^(-alpha) with c chosen so the
/// arithmetic mean of the values equals `mean_target`.
pub fn build_population(size: usize, alpha: f64, mean_target: f64) -> Result<ZipfPopulation> {
    if size < 1 {
        return Err(Error::InvalidInput(
            "population size must be at least 1".into(),
        ));
    }
    if alpha < 0.0 || alpha.is_nan() {
        return Err(Error::InvalidInput(format!(
            "alpha must be non-negative, got {alpha}"
        )));
    }
    if mean_target <= 0.0 || mean_target.is_nan() {
        return Err(Error::InvalidInput(format!(
            "mean target must be positive, got {mean_target}"
        )));
    }
    let weights: Vec<f64> = (1..=size).map(|k| (k as f64).powf(-alpha)).collect();
    let weight_sum: f64 = weights.iter().sum();
    let c = mean_target * size as f64 / weight_sum;
    let values = weights.iter().map(|w| c * w).collect();
    Ok(ZipfPopulation {
        size,
        alpha,
        mean_target,
        values,
    })
}

/// Fraction of total offered traffic contributed by the heaviest
/// floor(fraction * size) users (at least one user).
pub fn share_of_top(pop: &ZipfPopulation, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let m = ((fraction * pop.size as f64).floor() as usize).clamp(1, pop.size);
    let total: f64 = pop.values.iter().sum();
    let top: f64 = pop.values[..m].iter().sum();
    Ok(top / total)
}

/// Mean and population standard deviation of the rank values under equal
/// rank probability 1/size.
pub fn population_stats(pop: &ZipfPopulation) -> (f64, f64) {
    let n = pop.size as f64;
    let mean = pop.values.iter().sum::<f64>() / n;
    let var = pop
        .values
        .iter()
        .map(|v| {
            let d = v - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    (mean, var.sqrt())
}

/// Cumulative traffic share by cumulative user fraction: `size` points, the
/// k-th being (k/size, share of the top k users). Ends exactly at (1, 1).
pub fn cdf_points(pop: &ZipfPopulation) -> Vec<(f64, f64)> {
    let total: f64 = pop.values.iter().sum();
    let n = pop.size as f64;
    let mut cumulative = 0.0;
    pop.values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            cumulative += v;
            ((i + 1) as f64 / n, cumulative / total)
        })
        .collect()
}
