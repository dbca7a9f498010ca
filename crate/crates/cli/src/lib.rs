//! Command-line reports for strategic games with influence networks.
//!
//! Every command reads one JSON document and writes JSON, CSV and SVG
//! artifacts plus a `manifest.json` with SHA-256 hashes. Output is a pure
//! function of the configuration and the input bytes.

pub mod config;
pub mod histogram;
pub mod report;
pub mod schema;
pub mod svg;

pub use config::{parse_config, Command, ConfigError, Format, RunConfig};
pub use histogram::{emit_histogram, Histogram};
pub use report::{run, ManifestEntry, Metadata, ReportBundle, RunError};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// 12-significant-digit text for CSV cells.
pub fn num(x: f64) -> String {
    sig12(x).to_string()
}

pub fn sig12_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(sig12).collect()
}
