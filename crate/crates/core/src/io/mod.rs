//! Run and sweep configuration files, CSV tables and JSON output.
//!
//! Every CSV written here starts with its exact header line. Run metadata
//! (config digest, `alpha`, `nu`, ...) follows the rows on one trailing
//! line of the form `# key=value key=value`, which CSV readers treating `#`
//! as a comment marker skip.

mod config;
mod tables;

pub use config::{InitialKind, InitialSpec, RunConfig, SweepSpec};
pub use tables::{
    energy_csv_string, fmt_f64, parse_metadata, read_energy_csv, read_intervals_csv, read_norm_series,
    read_sweep_summary, to_json, write_energy_csv, write_intervals_csv, write_norm_series, write_sweep_summary,
    SweepRow, ENERGY_HEADER, INTERVAL_HEADER, NORM_HEADER, SWEEP_HEADER,
};
