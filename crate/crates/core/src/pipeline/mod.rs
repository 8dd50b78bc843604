//! Batch driver: analyze every image in a directory against its label
//! file, emit per-image reports and alerts for exceedances.

mod config;
mod run;

pub use config::RunConfig;
pub use run::{
    discover_images, run_pipeline, write_outputs, AlertRecord, ImageRecord, PipelineOutcome,
    RunSummary,
};
