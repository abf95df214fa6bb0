//! File ingestion, command pipelines, and report rendering for the `codp`
//! binary.

pub mod commands;
pub mod render;
pub mod scenario;
pub mod table;

pub use commands::{cmd_fit, cmd_locate, cmd_simulate, cmd_sweep, exit_code, load, CliError};
pub use render::OutputMode;
pub use scenario::{FitSettings, Scenario, SimSettings};
pub use table::{read_stage_table, write_stage_table};
