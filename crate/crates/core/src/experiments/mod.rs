//! Phase-diagram sweeps over the block model and their outputs.

mod concentration;
mod config;
mod output;
mod profile;
mod sweep;

pub use concentration::{concentration_check, ConcentrationConfig, ConcentrationRow};
pub use config::{GridRange, MatrixKind, Method, PhaseGridConfig, Preset};
pub use output::{
    emit_csv, emit_heatmap_svg, heatmap_svg, parse_csv, ramp_color, read_csv, to_csv, HeatmapMetric, CSV_HEADER,
};
pub use profile::threshold_profile;
pub use sweep::{embedding, run_phase_sweep, CellDiagnostics, CellRecord, PhaseGridResult};
