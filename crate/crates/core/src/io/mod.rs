//! File formats: CSV tables, SVG plots, JSON configs and run manifests.

mod config;
mod csv;
mod manifest;
mod report;
mod svg;

pub use self::config::{load_config, load_noise, parse_config, save_config};
pub use self::csv::{
    format_value, parse_records, read_csv, records_to_csv, write_csv, table_to_csv, CSV_HEADER,
};
pub use self::manifest::{hash_config, manifest_path, RunManifest};
pub use self::report::comparison_report;
pub use self::svg::{emit_svg_heatmap, emit_svg_lineplot, render_heatmap, render_lineplot, Heatmap, PlotLabels, Series};
