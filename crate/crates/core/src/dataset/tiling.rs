use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{labels::write_obb_labels, polygon_to_obb, AnnotatedImage};
use crate::error::{Error, Result};
use crate::imaging::{save_raster, RasterImage};
use crate::obbgeom::{clip_polygon, AxisRect, OrientedBox};

/// Smallest clipped area (px²) that still counts as a label.
const MIN_CLIP_AREA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TileLabel {
    pub class_id: u32,
    pub obb: OrientedBox,
}

/// One tile cut from a parent frame; labels are in tile-local pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileRecord {
    pub parent_id: u64,
    pub parent_path: PathBuf,
    pub origin: (usize, usize),
    pub size: usize,
    pub labels: Vec<TileLabel>,
}

impl TileRecord {
    /// `<parent stem>_<x0>_<y0>`.
    pub fn name(&self) -> String {
        let stem = self
            .parent_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.parent_id.to_string());
        format!("{stem}_{}_{}", self.origin.0, self.origin.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TilePolicy {
    /// Keep tiles that carry no labels.
    pub keep_empty: bool,
}

/// Tile origins along one axis: a regular grid with the last tile anchored
/// at `len − tile`, so it overlaps its neighbour instead of running off
/// the frame. An axis shorter than the tile yields a single padded tile.
pub fn candidate_origins(len: usize, tile: usize) -> Vec<usize> {
    if tile == 0 || len <= tile {
        return vec![0];
    }
    let n = len.div_ceil(tile);
    let mut out: Vec<usize> = (0..n - 1).map(|k| k * tile).collect();
    out.push(len - tile);
    out
}

/// Cuts a frame into `tile × tile` tiles with per-tile boxes fitted to each
/// instance polygon clipped to the tile.
pub fn tile_image(img: &AnnotatedImage, tile: usize, policy: TilePolicy) -> Result<Vec<TileRecord>> {
    if tile == 0 {
        return Err(Error::InvalidArgument("tile size must be positive".into()));
    }
    let xs = candidate_origins(img.width, tile);
    let ys = candidate_origins(img.height, tile);
    let mut out = Vec::new();
    for &y0 in &ys {
        for &x0 in &xs {
            let rect = AxisRect::new(
                x0 as f64,
                y0 as f64,
                (x0 + tile) as f64,
                (y0 + tile) as f64,
            );
            let mut labels = Vec::new();
            for inst in &img.instances {
                let clipped = clip_polygon(&inst.polygon, &rect);
                if !keeps(&inst.polygon.area(), &clipped) {
                    continue;
                }
                let local = clipped.translate(-rect.x0, -rect.y0);
                labels.push(TileLabel {
                    class_id: 0,
                    obb: polygon_to_obb(&local)?,
                });
            }
            if labels.is_empty() && !policy.keep_empty {
                continue;
            }
            out.push(TileRecord {
                parent_id: img.id,
                parent_path: img.image_path.clone(),
                origin: (x0, y0),
                size: tile,
                labels,
            });
        }
    }
    Ok(out)
}

fn keeps(source_area: &f64, clipped: &crate::obbgeom::Polygon) -> bool {
    if clipped.is_empty() {
        return false;
    }
    if *source_area > MIN_CLIP_AREA {
        return clipped.area() > MIN_CLIP_AREA;
    }
    // zero-area source (a polyline): keep if a non-trivial piece survives
    clipped
        .bounds()
        .is_some_and(|(x0, y0, x1, y1)| (x1 - x0).max(y1 - y0) > MIN_CLIP_AREA)
}

/// Writes `images/<name>.png` and `labels/<name>.txt` for every record
/// under `out_dir`, cropping from the parent raster (zero-padded).
pub fn write_tiles(parent: &RasterImage, records: &[TileRecord], out_dir: &Path) -> Result<()> {
    let img_dir = out_dir.join("images");
    let lbl_dir = out_dir.join("labels");
    for d in [&img_dir, &lbl_dir] {
        fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    for rec in records {
        let name = rec.name();
        let crop = parent.crop_padded(rec.origin.0, rec.origin.1, rec.size, rec.size);
        save_raster(&img_dir.join(format!("{name}.png")), &crop)?;
        write_obb_labels(&rec.labels, (rec.size, rec.size), &lbl_dir.join(format!("{name}.txt")))?;
    }
    Ok(())
}
