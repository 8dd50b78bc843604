//! Power-line corridor inspection toolkit.
//!
//! The crate is organised by stage of the inspection workflow:
//!
//! - [`imaging`]: raster containers, grayscale, 2D correlation, Canny edges, PNG/JPEG IO.
//! - [`filterbank`]: 1D prototypes rotated into the 8-direction bank and the
//!   directional block forward pass.
//! - [`obbgeom`]: oriented boxes, convex hull, minimum-area rectangle, clipping, rotated IoU.
//! - [`dataset`]: annotation parsing, polygon-to-OBB conversion, tiling, splitting, label files.
//! - [`vegmetric`]: GRVI, perpendicular greenness profiles, GI, TGDI and the encroachment metric.
//! - [`evalkit`]: threshold sweeps, ROC/AUC, severity percentiles, oriented-box AP.
//! - [`pipeline`]: run configuration and the batch analyze/alert driver.
//!
//! Batch entry points take an [`Exec`] to choose between the rayon-backed
//! parallel path (feature `parallel`, on by default) and the sequential one.

pub mod dataset;
pub mod error;
pub mod evalkit;
pub mod exec;
pub mod filterbank;
pub mod imaging;
pub mod obbgeom;
pub mod pipeline;
pub mod synth;
pub mod vegmetric;

pub use error::{Error, Result};
pub use exec::Exec;
