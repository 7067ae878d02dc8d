//! Data ingestion, instance windowing, error-sweep experiment drivers, and
//! report emission for the benchmark protocol.

mod data;
mod report;
mod sweep;

pub use data::{load_prices, make_instances, DatedSeries, InstanceSet};
pub use report::{
    derive_seed, emit_report, emit_report_to_string, format_sig6, parse_report, ReportRow,
    SweepReport, REPORT_HEADER,
};
pub use sweep::{
    baseline, expand_error_grid, sweep_best_price, sweep_query, BestPriceAlgo, ErrorGridPoint,
    QueryAlgo,
};
