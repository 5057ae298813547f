//! Flat-file output: CSV tables, SVG charts and run manifests.

mod csv_out;
mod manifest;
mod svg;

pub use csv_out::{
    format_real, format_opt_real, parse_opt_real, read_curve_csv, write_curve_csv, write_table,
    CURVE_HEADER,
};
pub use manifest::{manifest_path, RunManifest};
pub use svg::{render_curve_svg, SVG_HEIGHT, SVG_WIDTH};
