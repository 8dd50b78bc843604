//! Eight-direction filter bank built by rotating 1D prototypes.
//!
//! A prototype `h[0..n]` is laid along a line through the center of an
//! `n × n` grid; each cell gets `h[i]` scaled by the length of the line
//! inside that cell, relative to the length inside the center cell. Angles
//! follow image axes: `x` to the right, `y` down, so a positive angle runs
//! from top-left to bottom-right.

mod bank;
mod block;
mod geometry;
mod prototype;
mod response;

pub use bank::{build_bank, rotate_filter, DirectionalBank, Direction};
pub use block::{
    channel_energies, directional_block_forward, directional_features, export_block_weights,
    import_block_weights, mix_channels, DirectionalBlockParams, WeightFile,
};
pub use geometry::{cell_line_length, line_length_grid};
pub use prototype::{highpass_prototype, lowpass_prototype, Prototype1D, PrototypeKind};
pub use response::{frequency_response, kernel_response_at, prototype_response_at};

pub use crate::imaging::Kernel2D;
