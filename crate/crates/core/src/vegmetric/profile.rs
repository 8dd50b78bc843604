use serde::{Deserialize, Serialize};

use super::GaussianKernel1D;
use crate::error::{Error, Result};
use crate::imaging::{RasterImage, ScalarField};
use crate::obbgeom::{OrientedBox, Point};

/// `(G − R) / (G + R)` per pixel, 0 where both are 0.
pub fn grvi(img: &RasterImage) -> Result<ScalarField> {
    if img.channels() != 3 {
        return Err(Error::InvalidArgument(format!(
            "GRVI needs an RGB image, got {} channels",
            img.channels()
        )));
    }
    let data = img
        .data()
        .chunks_exact(3)
        .map(|p| {
            let (r, g) = (f64::from(p[0]), f64::from(p[1]));
            if r + g == 0.0 {
                0.0
            } else {
                (g - r) / (g + r)
            }
        })
        .collect();
    ScalarField::new(img.width(), img.height(), data)
}

/// `m + 1` evenly spaced points on the box centerline, end to end.
pub fn sample_centerline(b: &OrientedBox, m: usize) -> Vec<Point> {
    let m = m.max(1);
    let u = b.axis();
    (0..=m)
        .map(|k| {
            let t = -b.w() / 2.0 + k as f64 * b.w() / m as f64;
            Point::new(b.cx() + t * u.x, b.cy() + t * u.y)
        })
        .collect()
}

/// Bilinear value at continuous image coordinates, where pixel `(x, y)`
/// covers `[x, x+1) × [y, y+1)` and its value sits at the centre. `None`
/// outside `[0, W] × [0, H]`; inside, the nearest border pixels extend to
/// the frame edge.
pub fn bilinear_sample(field: &ScalarField, p: Point) -> Option<f64> {
    let (w, h) = (field.width(), field.height());
    if w == 0 || h == 0 || !(p.x >= 0.0 && p.x <= w as f64 && p.y >= 0.0 && p.y <= h as f64) {
        return None;
    }
    let fx = (p.x - 0.5).clamp(0.0, (w - 1) as f64);
    let fy = (p.y - 0.5).clamp(0.0, (h - 1) as f64);
    let (x0, y0) = (fx.floor() as usize, fy.floor() as usize);
    let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
    let (ax, ay) = (fx - x0 as f64, fy - y0 as f64);
    let top = field.get(x0, y0) * (1.0 - ax) + field.get(x1, y0) * ax;
    let bot = field.get(x0, y1) * (1.0 - ax) + field.get(x1, y1) * ax;
    Some(top * (1.0 - ay) + bot * ay)
}

/// Weighted samples along the centerline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineProfile {
    pub samples: Vec<f64>,
    pub points: Vec<Point>,
    /// Centerline samples whose whole perpendicular segment was off-image;
    /// those read 0.
    pub off_image: usize,
}

/// `W(k) = Σ_g field(p_k + g·n)·G(g)` with `n = (−sinθ, cosθ)`. Taps that
/// fall off the image are dropped and the rest renormalized.
pub fn perpendicular_profile(
    field: &ScalarField,
    b: &OrientedBox,
    kernel: &GaussianKernel1D,
    m: usize,
) -> LineProfile {
    let points = sample_centerline(b, m);
    let u = b.axis();
    let n = Point::new(-u.y, u.x);
    let mut off_image = 0;
    let samples = points
        .iter()
        .map(|p| {
            let (mut acc, mut wsum) = (0.0, 0.0);
            for (g, w) in kernel.taps() {
                if let Some(v) = bilinear_sample(field, Point::new(p.x + g * n.x, p.y + g * n.y)) {
                    acc += v * w;
                    wsum += w;
                }
            }
            if wsum > 0.0 {
                acc / wsum
            } else {
                off_image += 1;
                0.0
            }
        })
        .collect();
    LineProfile {
        samples,
        points,
        off_image,
    }
}

/// `max(W) + mean(W)`; 0 for an empty profile.
pub fn greenness_index(prof: &LineProfile) -> f64 {
    let s = &prof.samples;
    if s.is_empty() {
        return 0.0;
    }
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + s.iter().sum::<f64>() / s.len() as f64
}
