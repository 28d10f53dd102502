//! Self-contained SVG charts: per-split load boxplots with capacity
//! reference lines, and the max-split-by-year step chart.
//!
//! Charts use a fixed 800x500 viewport and inline styling only, so output is
//! a pure function of the plotted data.

use crate::planner::UpgradeSchedule;
use crate::report::{format_full, format_sig3, split_label};
use crate::sim::SimulationSummary;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// A horizontal capacity reference: name, full capacity, and the usable
/// (headroom-scaled) limit, both in Mb/s.
#[derive(Debug, Clone)]
pub struct CapacityLine {
    pub name: String,
    pub capacity_mbps: f64,
    pub limit_mbps: f64,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt(v: f64) -> String {
    // Two decimals is plenty for pixel coordinates and keeps output compact.
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Largest "nice" (1/2/5 x 10^k) step not smaller than `raw`.
fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn document(title: &str, body: String) -> String {
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\" role=\"img\">\n",
            "<style>\n",
            "text {{ font-family: Helvetica, Arial, sans-serif; font-size: 12px; fill: #333; }}\n",
            ".title {{ font-size: 15px; font-weight: bold; }}\n",
            ".axis line, .axis path {{ stroke: #444; }}\n",
            ".grid {{ stroke: #ddd; }}\n",
            ".box rect {{ fill: #9ecae1; stroke: #2b5d8c; }}\n",
            ".box line {{ stroke: #2b5d8c; }}\n",
            ".box .median {{ stroke: #d62728; stroke-width: 2; }}\n",
            ".capacity .full {{ stroke-width: 1.5; }}\n",
            ".capacity .usable {{ stroke-width: 1.5; stroke-dasharray: 7 4; }}\n",
            ".tech-line {{ fill: none; stroke-width: 2; }}\n",
            "</style>\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n",
            "<text class=\"title\" x=\"{tx}\" y=\"24\" text-anchor=\"middle\">{title}</text>\n",
            "{body}",
            "</svg>\n"
        ),
        w = fmt(WIDTH),
        h = fmt(HEIGHT),
        tx = fmt(WIDTH / 2.0),
        title = esc(title),
        body = body,
    )
}

fn y_axis(ymax: f64, to_y: impl Fn(f64) -> f64, label: &str) -> String {
    let step = nice_step(ymax / 6.0);
    let mut out = String::from("<g class=\"axis\">\n");
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let mut tick = 0.0;
    while tick <= ymax * (1.0 + 1e-9) {
        let y = to_y(tick);
        out.push_str(&format!(
            "<line class=\"grid\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            fmt(x0),
            fmt(y),
            fmt(x1),
            fmt(y)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            fmt(x0 - 6.0),
            fmt(y + 4.0),
            format_full(tick)
        ));
        tick += step;
    }
    out.push_str(&format!(
        "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\"/>\n",
        fmt(MARGIN_TOP),
        fmt(HEIGHT - MARGIN_BOTTOM),
        x = fmt(x0),
    ));
    out.push_str(&format!(
        "<text transform=\"translate(16 {}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
        fmt((MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0),
        esc(label)
    ));
    out.push_str("</g>\n");
    out
}

/// Boxplot chart: one Tukey box per simulated split, plus full and
/// headroom-scaled capacity lines for each requested technology.
pub fn boxplot_chart(summaries: &[SimulationSummary], capacities: &[CapacityLine]) -> String {
    let year = summaries.first().map(|s| s.year).unwrap_or_default();
    let data_max = summaries
        .iter()
        .map(|s| s.boxplot.whisker_high)
        .chain(capacities.iter().map(|c| c.capacity_mbps))
        .fold(0.0f64, f64::max);
    let ymax = if data_max > 0.0 { data_max * 1.06 } else { 1.0 };
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_y = |v: f64| MARGIN_TOP + plot_h * (1.0 - v / ymax);

    let mut body = y_axis(ymax, to_y, "aggregate offered load (Mb/s)");

    let n = summaries.len().max(1) as f64;
    let slot = plot_w / n;
    let box_w = (slot * 0.55).min(46.0);
    for (i, s) in summaries.iter().enumerate() {
        let cx = MARGIN_LEFT + slot * (i as f64 + 0.5);
        let b = s.boxplot;
        let (yl, yq1, ym, yq3, yh) = (
            to_y(b.whisker_low),
            to_y(b.q1),
            to_y(b.median),
            to_y(b.q3),
            to_y(b.whisker_high),
        );
        let half = box_w / 2.0;
        body.push_str(&format!(
            concat!(
                "<g class=\"box\" data-split=\"{split}\">\n",
                "<line x1=\"{cx}\" y1=\"{yl}\" x2=\"{cx}\" y2=\"{yq1}\"/>\n",
                "<line x1=\"{cx}\" y1=\"{yq3}\" x2=\"{cx}\" y2=\"{yh}\"/>\n",
                "<line x1=\"{cl}\" y1=\"{yl}\" x2=\"{cr}\" y2=\"{yl}\"/>\n",
                "<line x1=\"{cl}\" y1=\"{yh}\" x2=\"{cr}\" y2=\"{yh}\"/>\n",
                "<rect x=\"{bx}\" y=\"{by}\" width=\"{bw}\" height=\"{bh}\"/>\n",
                "<line class=\"median\" x1=\"{bx}\" y1=\"{ym}\" x2=\"{bx2}\" y2=\"{ym}\"/>\n",
                "</g>\n"
            ),
            split = s.split_n,
            cx = fmt(cx),
            yl = fmt(yl),
            yq1 = fmt(yq1),
            yq3 = fmt(yq3),
            yh = fmt(yh),
            ym = fmt(ym),
            cl = fmt(cx - half / 2.0),
            cr = fmt(cx + half / 2.0),
            bx = fmt(cx - half),
            bx2 = fmt(cx + half),
            by = fmt(yq3),
            bw = fmt(box_w),
            bh = fmt(yq1 - yq3),
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt(cx),
            fmt(HEIGHT - MARGIN_BOTTOM + 18.0),
            esc(&split_label(s.split_n))
        ));
    }

    for (i, cap) in capacities.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let x0 = MARGIN_LEFT;
        let x1 = WIDTH - MARGIN_RIGHT;
        let y_full = to_y(cap.capacity_mbps);
        let y_use = to_y(cap.limit_mbps);
        body.push_str(&format!(
            concat!(
                "<g class=\"capacity\" data-tech=\"{name}\">\n",
                "<line class=\"full\" stroke=\"{color}\" x1=\"{x0}\" y1=\"{yf}\" x2=\"{x1}\" y2=\"{yf}\"/>\n",
                "<line class=\"usable\" stroke=\"{color}\" x1=\"{x0}\" y1=\"{yu}\" x2=\"{x1}\" y2=\"{yu}\"/>\n",
                "<text x=\"{x1}\" y=\"{tf}\" text-anchor=\"end\" fill=\"{color}\">{name} {cv}</text>\n",
                "<text x=\"{x1}\" y=\"{tu}\" text-anchor=\"end\" fill=\"{color}\">{name} usable {lv}</text>\n",
                "</g>\n"
            ),
            name = esc(&cap.name),
            color = color,
            x0 = fmt(x0),
            x1 = fmt(x1),
            yf = fmt(y_full),
            yu = fmt(y_use),
            tf = fmt(y_full - 5.0),
            tu = fmt(y_use - 5.0),
            cv = format_sig3(cap.capacity_mbps),
            lv = format_sig3(cap.limit_mbps),
        ));
    }

    document(
        &format!("Aggregate offered load per PON, year {year}"),
        body,
    )
}

/// Step chart of the maximum feasible split per year, one line per
/// technology. The split axis is rank-scaled (0, 4, 8, ..., max).
pub fn schedule_chart(schedule: &UpgradeSchedule) -> String {
    // 0 sits at rank 0; split s >= 4 at rank log2(s) - 1.
    let rank = |split: u32| -> f64 {
        if split == 0 {
            0.0
        } else {
            (split as f64).log2() - 1.0
        }
    };
    let max_split = schedule
        .technologies
        .iter()
        .flat_map(|t| t.max_split_by_year.iter().copied())
        .max()
        .unwrap_or(0)
        .max(4);
    let max_rank = rank(max_split);
    let legend_w = 110.0;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT - legend_w;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_y = |r: f64| MARGIN_TOP + plot_h * (1.0 - r / max_rank);
    let years = &schedule.years;
    let span = (years.len().max(2) - 1) as f64;
    let to_x = |i: usize| MARGIN_LEFT + plot_w * (i as f64 / span);

    let mut body = String::from("<g class=\"axis\">\n");
    // Split-rank gridlines and labels.
    let mut split = 0u32;
    loop {
        let r = rank(split);
        if r > max_rank + 1e-9 {
            break;
        }
        let y = to_y(r);
        body.push_str(&format!(
            "<line class=\"grid\" x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>\n",
            fmt(MARGIN_LEFT),
            fmt(MARGIN_LEFT + plot_w),
            y = fmt(y)
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_LEFT - 6.0),
            fmt(y + 4.0),
            split
        ));
        split = if split == 0 { 4 } else { split * 2 };
    }
    // Year labels, thinned to at most ~10.
    let stride = (years.len() / 10).max(1);
    for (i, y) in years.iter().enumerate() {
        if i % stride != 0 && i != years.len() - 1 {
            continue;
        }
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt(to_x(i)),
            fmt(HEIGHT - MARGIN_BOTTOM + 18.0),
            y
        ));
    }
    body.push_str(&format!(
        "<text transform=\"translate(16 {}) rotate(-90)\" text-anchor=\"middle\">maximum feasible split</text>\n",
        fmt((MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0),
    ));
    body.push_str("</g>\n");

    for (ti, tech) in schedule.technologies.iter().enumerate() {
        let color = PALETTE[ti % PALETTE.len()];
        let mut d = String::new();
        for (i, &cell) in tech.max_split_by_year.iter().enumerate() {
            let x = to_x(i);
            let y = to_y(rank(cell));
            if i == 0 {
                d.push_str(&format!("M{} {}", fmt(x), fmt(y)));
            } else {
                // Hold the previous level until this year, then step.
                d.push_str(&format!(" H{} V{}", fmt(x), fmt(y)));
            }
        }
        if years.len() == 1 {
            // Single year: draw a short flat mark instead of a point.
            d.push_str(&format!(" h{}", fmt(plot_w.min(20.0))));
        }
        body.push_str(&format!(
            "<path class=\"tech-line\" data-tech=\"{}\" stroke=\"{}\" d=\"{}\"/>\n",
            esc(&tech.tech),
            color,
            d
        ));
        // Legend entry.
        let ly = MARGIN_TOP + 8.0 + 18.0 * ti as f64;
        let lx = WIDTH - MARGIN_RIGHT - legend_w + 8.0;
        body.push_str(&format!(
            "<line class=\"tech-line\" stroke=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            color,
            fmt(lx),
            fmt(ly),
            fmt(lx + 22.0),
            fmt(ly)
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\">{}</text>\n",
            fmt(lx + 28.0),
            fmt(ly + 4.0),
            esc(&tech.tech)
        ));
    }

    document("Maximum feasible split by year", body)
}
