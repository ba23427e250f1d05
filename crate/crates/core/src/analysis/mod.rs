//! Hit-count curves over the cutoff sweep, crossover points, and reports.

mod crossover;
mod curves;
mod report;

pub use crossover::{curve_crossover, find_crossover, Crossover, CrossoverResult};
pub use curves::{aggregate, AggregateCurve, CurvePoint, Metric, PairCurve};
pub use report::{
    aggregate_chart_svg, crossovers, emit_reports, grid_svg_document, write_crossovers_csv,
    write_curve_csv, ReportBundle, ALL_PAIRS,
};
