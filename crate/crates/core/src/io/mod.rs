//! Configuration files, CSV output and binary checkpoints.

mod checkpoint;
mod config;
mod table;

pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint, Checkpoint,
    CheckpointHeader, MAGIC, VERSION,
};
pub use config::{parse_config, SimulationConfig};
pub use table::{write_diagnostics_csv, write_twin_csv};
