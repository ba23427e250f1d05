//! CSV tables and hand-written SVG charts for hit curves.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::crossover::{curve_crossover, CrossoverResult};
use super::curves::{AggregateCurve, CurvePoint, Metric, PairCurve};
use crate::dataset::slugify;
use crate::error::{Error, Result};

/// Label used in `crossovers.csv` for the pooled curve.
pub const ALL_PAIRS: &str = "*";

const CURVE_HEADER: [&str; 10] = [
    "cutoff",
    "obj1_top1",
    "obj2_top1",
    "obj1_top5",
    "obj2_top5",
    "n",
    "obj1_top1_pct",
    "obj2_top1_pct",
    "obj1_top5_pct",
    "obj2_top5_pct",
];

/// Top-1 and top-5 crossovers for the pooled curve, then every pair.
pub fn crossovers(pairs: &[PairCurve], aggregate: &AggregateCurve) -> Vec<CrossoverResult> {
    let mut out = Vec::with_capacity(2 * (pairs.len() + 1));
    let entries = std::iter::once((ALL_PAIRS, ALL_PAIRS, &aggregate.points))
        .chain(pairs.iter().map(|p| (p.low_category.as_str(), p.high_category.as_str(), &p.points)));
    for (low, high, points) in entries {
        for metric in [Metric::Top1, Metric::Top5] {
            out.push(CrossoverResult {
                low_category: low.to_string(),
                high_category: high.to_string(),
                metric,
                crossover: curve_crossover(points, metric),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub aggregate_csv: PathBuf,
    pub pair_csvs: Vec<PathBuf>,
    pub aggregate_svg: PathBuf,
    pub grid_svg: PathBuf,
    pub crossovers_csv: PathBuf,
}

fn pct(v: f64) -> String {
    format!("{v:.4}")
}

pub fn write_curve_csv<W: std::io::Write>(points: &[CurvePoint], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for p in points {
        w.write_record([
            p.cutoff.to_string(),
            p.obj1_top1.to_string(),
            p.obj2_top1.to_string(),
            p.obj1_top5.to_string(),
            p.obj2_top5.to_string(),
            p.n.to_string(),
            pct(p.obj1_pct(Metric::Top1)),
            pct(p.obj2_pct(Metric::Top1)),
            pct(p.obj1_pct(Metric::Top5)),
            pct(p.obj2_pct(Metric::Top5)),
        ])?;
    }
    w.flush().map_err(|e| Error::Data(e.to_string()))?;
    Ok(())
}

pub fn write_crossovers_csv<W: std::io::Write>(results: &[CrossoverResult], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record([
        "low_category",
        "high_category",
        "metric",
        "crossover_cutoff",
        "bracket_lo",
        "bracket_hi",
    ])?;
    for r in results {
        let (c, lo, hi) = match r.crossover {
            Some(x) => (x.cutoff.to_string(), x.bracket.0.to_string(), x.bracket.1.to_string()),
            None => Default::default(),
        };
        w.write_record([
            r.low_category.as_str(),
            r.high_category.as_str(),
            r.metric.name(),
            &c,
            &lo,
            &hi,
        ])?;
    }
    w.flush().map_err(|e| Error::Data(e.to_string()))?;
    Ok(())
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `aggregate.csv`, `pairs/<low>__<high>.csv`, `aggregate.svg`,
/// `grid.svg` and `crossovers.csv` under `out_dir`.
pub fn emit_reports(
    pairs: &[PairCurve],
    aggregate: &AggregateCurve,
    crossovers: &[CrossoverResult],
    category_order: &[String],
    out_dir: &Path,
) -> Result<ReportBundle> {
    if pairs.is_empty() {
        return Err(Error::invalid("no pair curves to report"));
    }
    let pairs_dir = out_dir.join("pairs");
    std::fs::create_dir_all(&pairs_dir).map_err(|e| Error::io(&pairs_dir, e))?;

    let aggregate_csv = out_dir.join("aggregate.csv");
    write_curve_csv(&aggregate.points, create(&aggregate_csv)?)?;
    let mut pair_csvs = Vec::with_capacity(pairs.len());
    for p in pairs {
        let path = pairs_dir.join(format!("{}__{}.csv", slugify(&p.low_category), slugify(&p.high_category)));
        write_curve_csv(&p.points, create(&path)?)?;
        pair_csvs.push(path);
    }
    let crossovers_csv = out_dir.join("crossovers.csv");
    write_crossovers_csv(crossovers, create(&crossovers_csv)?)?;

    let aggregate_svg = out_dir.join("aggregate.svg");
    write_text(&aggregate_svg, &aggregate_chart_svg(&aggregate.points))?;
    let grid_svg = out_dir.join("grid.svg");
    write_text(&grid_svg, &grid_svg_document(pairs, category_order))?;

    Ok(ReportBundle {
        aggregate_csv,
        pair_csvs,
        aggregate_svg,
        grid_svg,
        crossovers_csv,
    })
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const OBJ1_COLOR: &str = "#1f77b4";
const OBJ2_COLOR: &str = "#d62728";

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    dashed: bool,
    values: Vec<f64>,
}

/// Plot frame: pixel rectangle mapping cutoff × percentage.
struct Frame {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    lo: f64,
    hi: f64,
}

impl Frame {
    fn px(&self, cutoff: f64) -> f64 {
        if self.hi > self.lo {
            self.x + (cutoff - self.lo) / (self.hi - self.lo) * self.w
        } else {
            self.x + self.w / 2.0
        }
    }

    fn py(&self, pct: f64) -> f64 {
        self.y + self.h - pct.clamp(0.0, 100.0) / 100.0 * self.h
    }

    fn polyline(&self, svg: &mut String, cutoffs: &[f64], s: &Series<'_>, stroke: f64) {
        let pts: Vec<String> = cutoffs
            .iter()
            .zip(&s.values)
            .map(|(&c, &v)| format!("{:.2},{:.2}", self.px(c), self.py(v)))
            .collect();
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="{stroke}"{dash} points="{}"><title>{}</title></polyline>"#,
            s.color,
            pts.join(" "),
            escape(s.label)
        );
    }

    fn axes(&self, svg: &mut String, cutoffs: &[f64], font: f64, ticks: bool) {
        let (x0, y0, x1, y1) = (self.x, self.y, self.x + self.w, self.y + self.h);
        let _ = writeln!(
            svg,
            r##"<path d="M{x0:.2},{y0:.2} L{x0:.2},{y1:.2} L{x1:.2},{y1:.2}" fill="none" stroke="#333" stroke-width="1"/>"##
        );
        if !ticks {
            return;
        }
        for pct in (0..=100).step_by(20) {
            let y = self.py(f64::from(pct));
            let _ = writeln!(
                svg,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#ddd" stroke-width="1"/><text x="{:.2}" y="{:.2}" font-size="{font}" text-anchor="end">{pct}</text>"##,
                x0,
                x0 - 6.0,
                y + font / 3.0
            );
        }
        for &c in cutoffs {
            let x = self.px(c);
            let _ = writeln!(
                svg,
                r##"<text x="{x:.2}" y="{:.2}" font-size="{font}" text-anchor="middle">{c}</text>"##,
                y1 + font + 4.0
            );
        }
    }
}

fn series(points: &[CurvePoint], metrics: &[Metric]) -> Vec<Series<'static>> {
    let mut out = Vec::new();
    for &m in metrics {
        let (l1, l2) = match m {
            Metric::Top1 => ("obj1 top-1", "obj2 top-1"),
            Metric::Top5 => ("obj1 top-5", "obj2 top-5"),
        };
        let dashed = m == Metric::Top5;
        out.push(Series {
            label: l1,
            color: OBJ1_COLOR,
            dashed,
            values: points.iter().map(|p| p.obj1_pct(m)).collect(),
        });
        out.push(Series {
            label: l2,
            color: OBJ2_COLOR,
            dashed,
            values: points.iter().map(|p| p.obj2_pct(m)).collect(),
        });
    }
    out
}

fn cutoff_range(cutoffs: &[f64]) -> (f64, f64) {
    let lo = cutoffs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cutoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// 640×480 line chart of the four pooled series (obj1/obj2 × top-1/top-5).
pub fn aggregate_chart_svg(points: &[CurvePoint]) -> String {
    let cutoffs: Vec<f64> = points.iter().map(|p| p.cutoff).collect();
    let (lo, hi) = cutoff_range(&cutoffs);
    let frame = Frame {
        x: 70.0,
        y: 40.0,
        w: 420.0,
        h: 360.0,
        lo,
        hi,
    };
    let mut svg = String::new();
    svg.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    svg.push('\n');
    svg.push_str(r#"<svg xmlns="http://www.w3.org/2000/svg" width="640" height="480" viewBox="0 0 640 480" font-family="sans-serif">"#);
    svg.push('\n');
    svg.push_str(r#"<rect width="640" height="480" fill="white"/>"#);
    svg.push('\n');
    let _ = writeln!(svg, r#"<text x="280" y="24" font-size="16" text-anchor="middle">Hits per cutoff, all pairs</text>"#);
    frame.axes(&mut svg, &cutoffs, 12.0, true);
    let _ = writeln!(svg, r#"<text x="280" y="450" font-size="13" text-anchor="middle">cutoff (σ, px)</text>"#);
    let _ = writeln!(
        svg,
        r#"<text x="22" y="220" font-size="13" text-anchor="middle" transform="rotate(-90 22 220)">% of hybrids</text>"#
    );
    let all = series(points, &[Metric::Top1, Metric::Top5]);
    for s in &all {
        frame.polyline(&mut svg, &cutoffs, s, 2.0);
    }
    for (i, s) in all.iter().enumerate() {
        let y = 60.0 + i as f64 * 22.0;
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<line x1="505" y1="{y}" x2="535" y2="{y}" stroke="{}" stroke-width="2"{dash}/><text x="542" y="{}" font-size="12">{}</text>"#,
            s.color,
            y + 4.0,
            escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Small multiples of the top-1 curves: one row per low category, one
/// column per other category.
pub fn grid_svg_document(pairs: &[PairCurve], category_order: &[String]) -> String {
    const CELL_W: f64 = 150.0;
    const CELL_H: f64 = 110.0;
    const LEFT: f64 = 110.0;
    const TOP: f64 = 50.0;
    let pos = |name: &str| category_order.iter().position(|c| c == name).unwrap_or(usize::MAX);
    let n = category_order.len().max(2);
    let width = LEFT + CELL_W * (n - 1) as f64 + 10.0;
    let height = TOP + CELL_H * n as f64 + 10.0;

    let mut svg = String::new();
    svg.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    svg.push('\n');
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT}" y="20" font-size="14">Top-1 hits per cutoff (obj1 = low-pass source in {OBJ1_COLOR}, obj2 = high-pass source in {OBJ2_COLOR})</text>"#
    );
    for (i, name) in category_order.iter().enumerate() {
        let y = TOP + CELL_H * (i as f64 + 0.5);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{y:.2}" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            escape(name)
        );
    }
    for pair in pairs {
        let (row, col) = (pos(&pair.low_category), pos(&pair.high_category));
        if row == usize::MAX || col == usize::MAX {
            continue;
        }
        let col = if col > row { col - 1 } else { col };
        let (cx, cy) = (LEFT + CELL_W * col as f64, TOP + CELL_H * row as f64);
        let cutoffs: Vec<f64> = pair.points.iter().map(|p| p.cutoff).collect();
        let (lo, hi) = cutoff_range(&cutoffs);
        let frame = Frame {
            x: cx + 8.0,
            y: cy + 18.0,
            w: CELL_W - 20.0,
            h: CELL_H - 30.0,
            lo,
            hi,
        };
        let _ = writeln!(svg, r#"<g class="cell">"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="10">{} + {}</text>"#,
            cx + 8.0,
            cy + 12.0,
            escape(&pair.low_category),
            escape(&pair.high_category)
        );
        frame.axes(&mut svg, &cutoffs, 8.0, false);
        for s in series(&pair.points, &[Metric::Top1]) {
            frame.polyline(&mut svg, &cutoffs, &s, 1.5);
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}
