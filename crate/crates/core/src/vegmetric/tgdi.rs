use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::imaging::{canny_edges, to_grayscale, RasterImage, ScalarField};
use crate::obbgeom::{obb_to_corners, OrientedBox, Point};

/// Lower clamp on the edge fraction so the logarithm stays finite.
pub const EDGE_FRACTION_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TgdiStats {
    /// `log₁₀(T)·B`, in `[−4, 0]`; 0 when the region is empty.
    pub value: f64,
    /// Clamped edge fraction `T`.
    pub edge_fraction: f64,
    /// Mean gray level scaled to `[0, 1]`.
    pub brightness: f64,
    /// Pixel centres inside the region; 0 flags an empty region.
    pub pixels: usize,
}

/// TGDI over `region` (already dilated), running Canny on the whole image
/// so region borders do not create spurious edges.
pub fn tgdi(img: &RasterImage, region: &OrientedBox, low: f64, high: f64) -> Result<TgdiStats> {
    let gray = to_grayscale(img);
    let (edges, _) = canny_edges(&gray, low, high)?;
    Ok(tgdi_from_maps(&gray, &edges, region))
}

/// TGDI from a precomputed gray field (0..255) and edge mask.
pub fn tgdi_from_maps(gray: &ScalarField, edges: &ScalarField, region: &OrientedBox) -> TgdiStats {
    let (w, h) = (gray.width(), gray.height());
    let Some((x0, y0, x1, y1)) = obb_to_corners(region).bounds() else {
        return empty();
    };
    let xa = x0.floor().max(0.0) as usize;
    let ya = y0.floor().max(0.0) as usize;
    let xb = (x1.ceil().max(0.0) as usize).min(w);
    let yb = (y1.ceil().max(0.0) as usize).min(h);

    let (mut n, mut e, mut sum) = (0usize, 0usize, 0.0);
    for y in ya..yb {
        for x in xa..xb {
            if region.contains(Point::new(x as f64 + 0.5, y as f64 + 0.5), 0.0) {
                n += 1;
                if edges.get(x, y) > 0.0 {
                    e += 1;
                }
                sum += gray.get(x, y);
            }
        }
    }
    if n == 0 {
        return empty();
    }
    let t = (e as f64 / n as f64).clamp(EDGE_FRACTION_FLOOR, 1.0);
    let b = sum / n as f64 / 255.0;
    TgdiStats {
        value: t.log10() * b,
        edge_fraction: t,
        brightness: b,
        pixels: n,
    }
}

fn empty() -> TgdiStats {
    TgdiStats {
        value: 0.0,
        edge_fraction: 0.0,
        brightness: 0.0,
        pixels: 0,
    }
}
