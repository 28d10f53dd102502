//! Rendering: 3-significant-figure tables for humans, full-precision CSV and
//! JSON (identical field names) for machines.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forecast::DemandRow;
use crate::planner::{FeasibilityVerdict, UpgradeSchedule};
use crate::sim::SimulationSummary;

/// Version stamped into every CSV/JSON payload; bump on any schema change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
    /// Only `simulate` (boxplots) and `plan schedule` (step chart) render SVG.
    Svg,
}

/// Rounds to 3 significant figures for table display.
///
/// Works on the decimal string from exponential formatting, so the result is
/// exactly the correctly-rounded 3-digit decimal (no float re-multiplication).
pub fn format_sig3(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp_form = format!("{v:.2e}"); // e.g. "2.89e0", "-9.38e2"
    let (mantissa, exp) = exp_form.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    let sign = if v < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    debug_assert_eq!(digits.len(), 3);
    let body = match exp {
        e if e >= 3 => format!("{digits}{}", "0".repeat(e as usize - 2)),
        2 => digits,
        1 => format!("{}.{}", &digits[..2], &digits[2..]),
        0 => format!("{}.{}", &digits[..1], &digits[1..]),
        e => format!("0.{}{digits}", "0".repeat((-e) as usize - 1)),
    };
    format!("{sign}{body}")
}

/// Full-precision decimal (shortest round-trip form, identical to the JSON
/// encoding of the same value).
pub fn format_full(v: f64) -> String {
    format!("{v}")
}

pub fn split_label(split: u32) -> String {
    format!("1:{split}")
}

/// Plain-text table: first column left-aligned, the rest right-aligned.
fn text_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut emit = |cells: Vec<String>| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            if i == 0 {
                out.push_str(&format!("{:<width$}", cell, width = widths[i]));
            } else {
                out.push_str(&format!("{:>width$}", cell, width = widths[i]));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    emit(headers.iter().map(|s| s.to_string()).collect());
    for row in rows {
        debug_assert_eq!(row.len(), cols);
        emit(row.clone());
    }
    out
}

fn csv_text(header: &str, rows: Vec<Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable report");
    out.push('\n');
    out
}

fn svg_unsupported(what: &str) -> Error {
    Error::InvalidInput(format!(
        "svg output is not available for {what}; svg renders only simulate boxplots and plan schedules"
    ))
}

// ---------------------------------------------------------------- forecast

#[derive(Debug, Serialize)]
struct ForecastRowOut {
    schema_version: u32,
    year: i32,
    peak_factor: f64,
    avg_mbps: f64,
    peak_mbps: f64,
}

pub fn render_forecast(rows: &[DemandRow], format: OutputFormat) -> Result<String> {
    const HEADER: &str = "schema_version,year,peak_factor,avg_mbps,peak_mbps";
    match format {
        OutputFormat::Table => Ok(text_table(
            &["year", "peak_factor", "avg_mbps", "peak_mbps"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.year.to_string(),
                        format_full(r.peak_factor),
                        format_sig3(r.avg_mbps),
                        format_sig3(r.peak_mbps),
                    ]
                })
                .collect::<Vec<_>>(),
        )),
        OutputFormat::Csv => Ok(csv_text(
            HEADER,
            rows.iter()
                .map(|r| {
                    vec![
                        SCHEMA_VERSION.to_string(),
                        r.year.to_string(),
                        format_full(r.peak_factor),
                        format_full(r.avg_mbps),
                        format_full(r.peak_mbps),
                    ]
                })
                .collect(),
        )),
        OutputFormat::Json => {
            let out: Vec<ForecastRowOut> = rows
                .iter()
                .map(|r| ForecastRowOut {
                    schema_version: SCHEMA_VERSION,
                    year: r.year,
                    peak_factor: r.peak_factor,
                    avg_mbps: r.avg_mbps,
                    peak_mbps: r.peak_mbps,
                })
                .collect();
            Ok(json_text(&out))
        }
        OutputFormat::Svg => Err(svg_unsupported("forecast tables")),
    }
}

// ---------------------------------------------------------------- simulate

pub const SIMULATE_CSV_HEADER: &str = "schema_version,year,split,demand_avg_mbps,demand_peak_mbps,p50,p50_lo,p50_hi,p90,p90_lo,p90_hi,p99,p99_lo,p99_hi,whisker_low,q1,median,q3,whisker_high";

#[derive(Debug, Serialize)]
struct SimulateRowOut {
    schema_version: u32,
    year: i32,
    split: u32,
    demand_avg_mbps: f64,
    demand_peak_mbps: f64,
    p50: f64,
    p50_lo: f64,
    p50_hi: f64,
    p90: f64,
    p90_lo: f64,
    p90_hi: f64,
    p99: f64,
    p99_lo: f64,
    p99_hi: f64,
    whisker_low: f64,
    q1: f64,
    median: f64,
    q3: f64,
    whisker_high: f64,
}

fn simulate_row(s: &SimulationSummary) -> Result<SimulateRowOut> {
    let p50 = s.estimate_at(0.50)?;
    let p90 = s.estimate_at(0.90)?;
    let p99 = s.estimate_at(0.99)?;
    Ok(SimulateRowOut {
        schema_version: SCHEMA_VERSION,
        year: s.year,
        split: s.split_n,
        demand_avg_mbps: s.demand.avg_mbps,
        demand_peak_mbps: s.demand.peak_mbps,
        p50: p50.point,
        p50_lo: p50.ci_low,
        p50_hi: p50.ci_high,
        p90: p90.point,
        p90_lo: p90.ci_low,
        p90_hi: p90.ci_high,
        p99: p99.point,
        p99_lo: p99.ci_low,
        p99_hi: p99.ci_high,
        whisker_low: s.boxplot.whisker_low,
        q1: s.boxplot.q1,
        median: s.boxplot.median,
        q3: s.boxplot.q3,
        whisker_high: s.boxplot.whisker_high,
    })
}

pub fn render_simulate(summaries: &[SimulationSummary], format: OutputFormat) -> Result<String> {
    let rows: Vec<SimulateRowOut> = summaries.iter().map(simulate_row).collect::<Result<_>>()?;
    match format {
        OutputFormat::Table => {
            let mut out = String::new();
            if let Some(first) = summaries.first() {
                out.push_str(&format!(
                    "year {}  demand avg {} Mb/s  peak {} Mb/s\n\n",
                    first.year,
                    format_sig3(first.demand.avg_mbps),
                    format_sig3(first.demand.peak_mbps),
                ));
            }
            let ci = |point: f64, lo: f64, hi: f64| {
                format!(
                    "{} [{}, {}]",
                    format_sig3(point),
                    format_sig3(lo),
                    format_sig3(hi)
                )
            };
            out.push_str(&text_table(
                &["split", "p50 [CI]", "p90 [CI]", "p99 [CI]"],
                &rows
                    .iter()
                    .map(|r| {
                        vec![
                            split_label(r.split),
                            ci(r.p50, r.p50_lo, r.p50_hi),
                            ci(r.p90, r.p90_lo, r.p90_hi),
                            ci(r.p99, r.p99_lo, r.p99_hi),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ));
            out.push('\n');
            out.push_str(&text_table(
                &["split", "whisker_low", "q1", "median", "q3", "whisker_high"],
                &rows
                    .iter()
                    .map(|r| {
                        vec![
                            split_label(r.split),
                            format_sig3(r.whisker_low),
                            format_sig3(r.q1),
                            format_sig3(r.median),
                            format_sig3(r.q3),
                            format_sig3(r.whisker_high),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ));
            Ok(out)
        }
        OutputFormat::Csv => Ok(csv_text(
            SIMULATE_CSV_HEADER,
            rows.iter()
                .map(|r| {
                    vec![
                        r.schema_version.to_string(),
                        r.year.to_string(),
                        r.split.to_string(),
                        format_full(r.demand_avg_mbps),
                        format_full(r.demand_peak_mbps),
                        format_full(r.p50),
                        format_full(r.p50_lo),
                        format_full(r.p50_hi),
                        format_full(r.p90),
                        format_full(r.p90_lo),
                        format_full(r.p90_hi),
                        format_full(r.p99),
                        format_full(r.p99_lo),
                        format_full(r.p99_hi),
                        format_full(r.whisker_low),
                        format_full(r.q1),
                        format_full(r.median),
                        format_full(r.q3),
                        format_full(r.whisker_high),
                    ]
                })
                .collect(),
        )),
        OutputFormat::Json => Ok(json_text(&rows)),
        OutputFormat::Svg => Err(Error::InvalidInput(
            "simulate svg rendering is routed through the chart module".into(),
        )),
    }
}

// -------------------------------------------------------------- plan output

#[derive(Debug, Serialize)]
struct FeasibilityOut {
    schema_version: u32,
    tech: String,
    year: i32,
    split: u32,
    percentile: f64,
    statistic_mbps: f64,
    limit_mbps: f64,
    margin_mbps: f64,
    feasible: bool,
}

pub struct FeasibilityContext<'a> {
    pub tech: &'a str,
    pub year: i32,
    pub split: u32,
    pub percentile: f64,
}

pub fn render_feasibility(
    ctx: &FeasibilityContext,
    verdict: &FeasibilityVerdict,
    format: OutputFormat,
) -> Result<String> {
    const HEADER: &str =
        "schema_version,tech,year,split,percentile,statistic_mbps,limit_mbps,margin_mbps,feasible";
    let out = FeasibilityOut {
        schema_version: SCHEMA_VERSION,
        tech: ctx.tech.to_string(),
        year: ctx.year,
        split: ctx.split,
        percentile: ctx.percentile,
        statistic_mbps: verdict.statistic_mbps,
        limit_mbps: verdict.limit_mbps,
        margin_mbps: verdict.margin_mbps,
        feasible: verdict.feasible,
    };
    match format {
        OutputFormat::Table => Ok(format!(
            "technology  {}\nyear        {}\nsplit       {}\npercentile  {}\nstatistic   {} Mb/s\nlimit       {} Mb/s\nmargin      {} Mb/s\nverdict     {}\n",
            out.tech,
            out.year,
            split_label(out.split),
            format_full(out.percentile),
            format_sig3(out.statistic_mbps),
            format_sig3(out.limit_mbps),
            format_sig3(out.margin_mbps),
            if out.feasible { "feasible" } else { "infeasible" },
        )),
        OutputFormat::Csv => Ok(csv_text(
            HEADER,
            vec![vec![
                out.schema_version.to_string(),
                out.tech.clone(),
                out.year.to_string(),
                out.split.to_string(),
                format_full(out.percentile),
                format_full(out.statistic_mbps),
                format_full(out.limit_mbps),
                format_full(out.margin_mbps),
                out.feasible.to_string(),
            ]],
        )),
        OutputFormat::Json => Ok(json_text(&out)),
        OutputFormat::Svg => Err(svg_unsupported("feasibility verdicts")),
    }
}

#[derive(Debug, Serialize)]
struct MaxSplitOut {
    schema_version: u32,
    tech: String,
    year: i32,
    max_split: u32,
}

pub fn render_max_split(
    tech: &str,
    year: i32,
    max_split: u32,
    format: OutputFormat,
) -> Result<String> {
    const HEADER: &str = "schema_version,tech,year,max_split";
    let out = MaxSplitOut {
        schema_version: SCHEMA_VERSION,
        tech: tech.to_string(),
        year,
        max_split,
    };
    match format {
        OutputFormat::Table => Ok(format!(
            "technology  {}\nyear        {}\nmax split   {}\n",
            out.tech,
            out.year,
            if out.max_split == 0 {
                "none".to_string()
            } else {
                out.max_split.to_string()
            },
        )),
        OutputFormat::Csv => Ok(csv_text(
            HEADER,
            vec![vec![
                out.schema_version.to_string(),
                out.tech.clone(),
                out.year.to_string(),
                out.max_split.to_string(),
            ]],
        )),
        OutputFormat::Json => Ok(json_text(&out)),
        OutputFormat::Svg => Err(svg_unsupported("max-split lookups")),
    }
}

#[derive(Debug, Serialize)]
struct UpgradeYearOut {
    schema_version: u32,
    tech: String,
    split: u32,
    first_infeasible_year: Option<i32>,
}

pub fn render_upgrade_year(
    tech: &str,
    split: u32,
    year: Option<i32>,
    format: OutputFormat,
) -> Result<String> {
    const HEADER: &str = "schema_version,tech,split,first_infeasible_year";
    let out = UpgradeYearOut {
        schema_version: SCHEMA_VERSION,
        tech: tech.to_string(),
        split,
        first_infeasible_year: year,
    };
    match format {
        OutputFormat::Table => Ok(format!(
            "technology        {}\nsplit             {}\nfirst infeasible  {}\n",
            out.tech,
            split_label(out.split),
            match out.first_infeasible_year {
                Some(y) => y.to_string(),
                None => "none".to_string(),
            },
        )),
        OutputFormat::Csv => Ok(csv_text(
            HEADER,
            vec![vec![
                out.schema_version.to_string(),
                out.tech.clone(),
                out.split.to_string(),
                out.first_infeasible_year
                    .map(|y| y.to_string())
                    .unwrap_or_default(),
            ]],
        )),
        OutputFormat::Json => Ok(json_text(&out)),
        OutputFormat::Svg => Err(svg_unsupported("upgrade-year lookups")),
    }
}

#[derive(Debug, Serialize)]
struct ScheduleOut<'a> {
    schema_version: u32,
    #[serde(flatten)]
    schedule: &'a UpgradeSchedule,
}

pub fn render_schedule(schedule: &UpgradeSchedule, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Table => {
            let mut headers: Vec<String> = vec!["tech".to_string()];
            headers.extend(schedule.years.iter().map(|y| y.to_string()));
            let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
            Ok(text_table(
                &header_refs,
                &schedule
                    .technologies
                    .iter()
                    .map(|row| {
                        let mut cells = vec![row.tech.clone()];
                        cells.extend(row.max_split_by_year.iter().map(u32::to_string));
                        cells
                    })
                    .collect::<Vec<_>>(),
            ))
        }
        OutputFormat::Csv => {
            let mut header = String::from("schema_version,tech");
            for y in &schedule.years {
                header.push(',');
                header.push_str(&y.to_string());
            }
            Ok(csv_text(
                &header,
                schedule
                    .technologies
                    .iter()
                    .map(|row| {
                        let mut cells = vec![SCHEMA_VERSION.to_string(), row.tech.clone()];
                        cells.extend(row.max_split_by_year.iter().map(u32::to_string));
                        cells
                    })
                    .collect(),
            ))
        }
        OutputFormat::Json => Ok(json_text(&ScheduleOut {
            schema_version: SCHEMA_VERSION,
            schedule,
        })),
        OutputFormat::Svg => Err(Error::InvalidInput(
            "schedule svg rendering is routed through the chart module".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecast::{demand_table, ForecastParams};

    #[test]
    fn sig3_reference_values() {
        let cases: [(f64, &str); 18] = [
            (0.236_407_914_764_079_16, "0.236"),
            (0.577_167_760_654_490_2, "0.577"),
            (1.761_376_222_700_470_3, "1.76"),
            (5.375_293_648_377_9, "5.38"),
            (16.404_094_385_918_885, "16.4"),
            (0.709_223_744_292_237_4, "0.709"),
            (1.731_503_281_963_470_4, "1.73"),
            (5.284_128_668_101_411_5, "5.28"),
            (16.125_880_945_133_7, "16.1"),
            (49.212_283_157_756_66, "49.2"),
            (1.182_039_573_820_395_7, "1.18"),
            (2.885_838_803_272_451, "2.89"),
            (8.806_881_113_502_351, "8.81"),
            (26.876_468_241_889_498, "26.9"),
            (82.020_471_929_594_42, "82.0"),
            (1016.8, "1020"),
            (0.000_236, "0.000236"),
            (999.9, "1000"),
        ];
        for (v, want) in cases {
            assert_eq!(format_sig3(v), want, "value {v}");
        }
        assert_eq!(format_sig3(0.0), "0");
        assert_eq!(format_sig3(-79.31), "-79.3");
        assert_eq!(format_sig3(100_000.0), "100000");
        assert_eq!(format_sig3(1.0), "1.00");
    }

    #[test]
    fn forecast_formats_share_values() {
        let rows = demand_table(
            &ForecastParams::default(),
            &[2016, 2030],
            &[3.0, 5.0],
        )
        .unwrap();
        let table = render_forecast(&rows, OutputFormat::Table).unwrap();
        assert!(table.contains("0.236"));
        assert!(table.contains("26.9"));
        let csv = render_forecast(&rows, OutputFormat::Csv).unwrap();
        assert!(csv.starts_with("schema_version,year,peak_factor,avg_mbps,peak_mbps\n"));
        assert!(csv.contains("1,2016,3,"));
        assert!(csv.contains("26.876468241889498"));
        let json = render_forecast(&rows, OutputFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), 4);
        assert!(render_forecast(&rows, OutputFormat::Svg).is_err());
    }

    #[test]
    fn json_fields_mirror_csv_headers() {
        let rows = demand_table(&ForecastParams::default(), &[2016], &[5.0]).unwrap();
        let csv = render_forecast(&rows, OutputFormat::Csv).unwrap();
        let mut header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
        header.sort_unstable();
        let json = render_forecast(&rows, OutputFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        // Value objects iterate keys alphabetically, so compare as sets.
        let keys: Vec<&str> = parsed[0].as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(header, keys);
    }

    #[test]
    fn simulate_json_fields_mirror_csv_headers() {
        use crate::sim::{run_scenario, ScenarioConfig};
        let cfg = ScenarioConfig {
            trials: 400,
            bootstrap_reps: 50,
            ..ScenarioConfig::with_split(8)
        };
        let summary = run_scenario(&ForecastParams::default(), 2016, &cfg).unwrap();
        let csv = render_simulate(std::slice::from_ref(&summary), OutputFormat::Csv).unwrap();
        assert_eq!(csv.lines().next().unwrap(), SIMULATE_CSV_HEADER);
        let mut header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
        header.sort_unstable();
        let json = render_simulate(std::slice::from_ref(&summary), OutputFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        // Value objects iterate keys alphabetically, so compare as sets.
        let keys: Vec<&str> = parsed[0].as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(header, keys);
        // Table mode shows the same statistics rounded.
        let table = render_simulate(std::slice::from_ref(&summary), OutputFormat::Table).unwrap();
        assert!(table.contains("1:8"));
    }

    #[test]
    fn feasibility_rendering() {
        let ctx = FeasibilityContext {
            tech: "GPON",
            year: 2025,
            split: 64,
            percentile: 0.99,
        };
        let verdict = FeasibilityVerdict {
            feasible: false,
            statistic_mbps: 1016.8,
            limit_mbps: 937.5,
            margin_mbps: 937.5 - 1016.8,
        };
        let table = render_feasibility(&ctx, &verdict, OutputFormat::Table).unwrap();
        assert!(table.contains("infeasible"));
        assert!(table.contains("1:64"));
        let csv = render_feasibility(&ctx, &verdict, OutputFormat::Csv).unwrap();
        assert!(csv.contains("937.5"));
        assert!(csv.ends_with("false\n"));
        let json = render_feasibility(&ctx, &verdict, OutputFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["limit_mbps"], 937.5);
        assert_eq!(parsed["feasible"], false);
    }

    #[test]
    fn upgrade_year_rendering_handles_none() {
        let csv = render_upgrade_year("GPON", 64, None, OutputFormat::Csv).unwrap();
        assert!(csv.ends_with("1,GPON,64,\n"));
        let json = render_upgrade_year("GPON", 64, Some(2025), OutputFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["first_infeasible_year"], 2025);
        let table = render_upgrade_year("GPON", 64, None, OutputFormat::Table).unwrap();
        assert!(table.contains("none"));
    }

    #[test]
    fn schedule_csv_is_a_matrix() {
        use crate::planner::{TechSchedule, UpgradeCell};
        let schedule = UpgradeSchedule {
            years: vec![2016, 2017],
            technologies: vec![TechSchedule {
                tech: "GPON".into(),
                max_split_by_year: vec![128, 64],
            }],
            upgrade_years: vec![UpgradeCell {
                tech: "GPON".into(),
                split: 128,
                first_infeasible_year: Some(2017),
            }],
        };
        let csv = render_schedule(&schedule, OutputFormat::Csv).unwrap();
        assert_eq!(csv, "schema_version,tech,2016,2017\n1,GPON,128,64\n");
        let json = render_schedule(&schedule, OutputFormat::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["schema_version"], 1);
        assert_eq!(parsed["technologies"][0]["max_split_by_year"][1], 64);
        assert_eq!(parsed["upgrade_years"][0]["first_infeasible_year"], 2017);
        let table = render_schedule(&schedule, OutputFormat::Table).unwrap();
        assert!(table.starts_with("tech"));
        assert!(table.contains("GPON"));
    }
}
