//! Annotation preprocessing: COCO-style polygons → oriented boxes → tiles → splits.

mod coco;
mod labels;
mod split;
mod tiling;

pub use coco::{parse_annotations, parse_annotations_for_class, CABLE_CLASS};
pub use labels::{read_obb_labels, write_label_lines, write_obb_labels, LabelLine};
pub use split::{split_dataset, split_parents, DatasetSplit, SplitManifest};
pub use tiling::{
    candidate_origins, tile_image, write_tiles, TileLabel, TilePolicy, TileRecord,
};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::obbgeom::{convex_hull, min_area_rect, OrientedBox, Polygon};

/// Latitude/longitude in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpsFix {
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub class_name: String,
    pub polygon: Polygon,
}

/// One frame with its retained polygon instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedImage {
    pub id: u64,
    pub image_path: PathBuf,
    pub width: usize,
    pub height: usize,
    pub instances: Vec<Instance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gps: Option<GpsFix>,
}

/// Minimum-area rectangle around the polygon's hull. A zero-area result
/// (collinear or coincident points) marks a degenerate instance.
pub fn polygon_to_obb(p: &Polygon) -> Result<OrientedBox> {
    if p.is_empty() {
        return Err(Error::InvalidArgument("cannot fit a box to an empty polygon".into()));
    }
    min_area_rect(&convex_hull(&p.vertices))
}

/// `<stem>.gps.json` next to an image, holding `{"lat": .., "lon": ..}`.
pub fn gps_sidecar_path(image_path: &Path) -> PathBuf {
    let stem = image_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    image_path.with_file_name(format!("{stem}.gps.json"))
}

/// Reads the GPS sidecar if present.
pub fn read_gps_sidecar(image_path: &Path) -> Result<Option<GpsFix>> {
    let path = gps_sidecar_path(image_path);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Error::malformed(&path, e.to_string()))
}
