use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::Deserialize;

use super::{AnnotatedImage, GpsFix, Instance};
use crate::error::{Error, Result};
use crate::obbgeom::{Point, Polygon};

/// Category name of power-line instances.
pub const CABLE_CLASS: &str = "cable";

#[derive(Deserialize)]
struct CocoFile {
    images: Vec<CocoImage>,
    #[serde(default)]
    annotations: Vec<CocoAnnotation>,
    #[serde(default)]
    categories: Vec<CocoCategory>,
}

#[derive(Deserialize)]
struct CocoImage {
    id: u64,
    file_name: String,
    width: usize,
    height: usize,
    #[serde(default)]
    gps: Option<GpsFix>,
}

#[derive(Deserialize)]
struct CocoAnnotation {
    image_id: u64,
    category_id: u64,
    #[serde(default)]
    segmentation: serde_json::Value,
}

#[derive(Deserialize)]
struct CocoCategory {
    id: u64,
    name: String,
}

/// Parses COCO-style JSON keeping only [`CABLE_CLASS`] instances.
///
/// Expected layout: `images[] {id, file_name, width, height, gps?}`,
/// `annotations[] {image_id, category_id, segmentation}` where
/// `segmentation` is a list of flat `[x0, y0, x1, y1, …]` polygons (each
/// becomes its own instance), and `categories[] {id, name}`. RLE
/// segmentations are ignored. Images without cable instances are kept with
/// an empty instance list. Output is ordered by image id.
pub fn parse_annotations(path: &Path) -> Result<Vec<AnnotatedImage>> {
    parse_annotations_for_class(path, CABLE_CLASS)
}

pub fn parse_annotations_for_class(path: &Path, class_name: &str) -> Result<Vec<AnnotatedImage>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: CocoFile =
        serde_json::from_str(&text).map_err(|e| Error::malformed(path, e.to_string()))?;

    let names: HashMap<u64, &str> = file
        .categories
        .iter()
        .map(|c| (c.id, c.name.as_str()))
        .collect();

    let mut images: BTreeMap<u64, AnnotatedImage> = BTreeMap::new();
    for img in &file.images {
        if img.width == 0 || img.height == 0 {
            return Err(Error::malformed(path, format!("image {} has zero size", img.id)));
        }
        images.insert(
            img.id,
            AnnotatedImage {
                id: img.id,
                image_path: PathBuf::from(&img.file_name),
                width: img.width,
                height: img.height,
                instances: Vec::new(),
                gps: img.gps,
            },
        );
    }

    for (k, ann) in file.annotations.iter().enumerate() {
        if names.get(&ann.category_id).copied() != Some(class_name) {
            continue;
        }
        let Some(image) = images.get_mut(&ann.image_id) else {
            warn!("annotation {k} refers to unknown image {}", ann.image_id);
            continue;
        };
        let Some(parts) = ann.segmentation.as_array() else {
            warn!("annotation {k}: non-polygon segmentation skipped");
            continue;
        };
        for part in parts {
            let coords: Option<Vec<f64>> = part
                .as_array()
                .map(|xs| xs.iter().map(|v| v.as_f64()).collect::<Option<Vec<f64>>>())
                .unwrap_or(None);
            let Some(coords) = coords else {
                warn!("annotation {k}: non-numeric polygon skipped");
                continue;
            };
            if coords.len() % 2 != 0 || coords.len() < 4 {
                warn!(
                    "annotation {k}: malformed polygon with {} coordinates skipped",
                    coords.len()
                );
                continue;
            }
            let (w, h) = (image.width as f64, image.height as f64);
            let polygon = Polygon::new(
                coords
                    .chunks_exact(2)
                    .map(|c| Point::new(c[0].clamp(0.0, w), c[1].clamp(0.0, h)))
                    .collect(),
            );
            image.instances.push(Instance {
                class_name: class_name.to_string(),
                polygon,
            });
        }
    }
    Ok(images.into_values().collect())
}
