//! Per-household demand forecasting: monthly-consumption-to-bandwidth
//! conversion and compound annual growth projection.

use serde::Serialize;

use crate::error::{Error, Result};

/// Seconds in the accounting month. The month length is fixed at 365/12 days
/// (2,628,000 s); together with decimal gigabytes this is the convention under
/// which 77.66 GB/month converts to 0.236 Mb/s.
pub const SECONDS_PER_MONTH: f64 = 365.0 / 12.0 * 86_400.0;

pub const DEFAULT_BASE_YEAR: i32 = 2016;
pub const DEFAULT_BASE_GB_MONTH: f64 = 77.66;
pub const DEFAULT_CAGR: f64 = 0.25;
/// Peak-to-average factor used for planning; a milder 3x factor is also
/// conventional for reporting.
pub const DEFAULT_PEAK_FACTOR: f64 = 5.0;

/// Demand-model parameters: measured base consumption plus growth and
/// peak-to-average assumptions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastParams {
    /// Calendar year the base consumption was measured in.
    pub base_year: i32,
    /// Measured consumption per household, in GB per month (decimal GB).
    pub base_gb_month: f64,
    /// Compound annual growth rate as a fraction (0.25 = 25% per year).
    pub cagr: f64,
    /// Busy-hour peak demand as a multiple of the average (>= 1).
    pub peak_factor: f64,
}

impl Default for ForecastParams {
    fn default() -> Self {
        Self {
            base_year: DEFAULT_BASE_YEAR,
            base_gb_month: DEFAULT_BASE_GB_MONTH,
            cagr: DEFAULT_CAGR,
            peak_factor: DEFAULT_PEAK_FACTOR,
        }
    }
}

impl ForecastParams {
    pub fn validate(&self) -> Result<()> {
        if self.base_gb_month <= 0.0 || self.base_gb_month.is_nan() {
            return Err(Error::InvalidInput(format!(
                "base consumption must be positive, got {}",
                self.base_gb_month
            )));
        }
        if self.cagr <= -1.0 || self.cagr.is_nan() {
            return Err(Error::InvalidInput(format!(
                "cagr must be greater than -1, got {}",
                self.cagr
            )));
        }
        if self.peak_factor < 1.0 || self.peak_factor.is_nan() {
            return Err(Error::InvalidInput(format!(
                "peak factor must be at least 1, got {}",
                self.peak_factor
            )));
        }
        Ok(())
    }
}

/// One year's per-household offered bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrafficDemand {
    pub year: i32,
    pub avg_mbps: f64,
    pub peak_mbps: f64,
}

/// One row of a demand table: a (year, peak factor) combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemandRow {
    pub year: i32,
    pub peak_factor: f64,
    pub avg_mbps: f64,
    pub peak_mbps: f64,
}

/// Converts monthly consumption (decimal GB per month) to a sustained rate in
/// Mb/s, using the fixed 365/12-day month.
pub fn gb_month_to_mbps(gb_per_month: f64) -> Result<f64> {
    if gb_per_month < 0.0 || gb_per_month.is_nan() {
        return Err(Error::InvalidInput(format!(
            "consumption must be non-negative, got {gb_per_month}"
        )));
    }
    // GB -> bits, / seconds per month, -> Mb.
    Ok(gb_per_month * 1e9 * 8.0 / SECONDS_PER_MONTH / 1e6)
}

/// Projects per-household demand to `year` under compound growth.
///
/// The projection keeps full floating-point precision; values are rounded
/// only at display time.
pub fn project_demand(params: &ForecastParams, year: i32) -> Result<TrafficDemand> {
    params.validate()?;
    if year < params.base_year {
        return Err(Error::InvalidInput(format!(
            "year {year} precedes base year {}",
            params.base_year
        )));
    }
    let base = gb_month_to_mbps(params.base_gb_month)?;
    let avg_mbps = base * (1.0 + params.cagr).powi(year - params.base_year);
    Ok(TrafficDemand {
        year,
        avg_mbps,
        peak_mbps: params.peak_factor * avg_mbps,
    })
}

/// Produces one `DemandRow` per (year, peak factor) combination, years outer.
pub fn demand_table(
    params: &ForecastParams,
    years: &[i32],
    peak_factors: &[f64],
) -> Result<Vec<DemandRow>> {
    if years.is_empty() {
        return Err(Error::InvalidInput("years list must not be empty".into()));
    }
    if peak_factors.is_empty() {
        return Err(Error::InvalidInput(
            "peak factor list must not be empty".into(),
        ));
    }
    let mut rows = Vec::with_capacity(years.len() * peak_factors.len());
    for &year in years {
        for &factor in peak_factors {
            let p = ForecastParams {
                peak_factor: factor,
                ..*params
            };
            let demand = project_demand(&p, year)?;
            rows.push(DemandRow {
                year,
                peak_factor: factor,
                avg_mbps: demand.avg_mbps,
                peak_mbps: demand.peak_mbps,
            });
        }
    }
    Ok(rows)
}
