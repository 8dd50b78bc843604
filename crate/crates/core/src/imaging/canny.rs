use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::ScalarField;
use crate::error::{Error, Result};

/// Hysteresis thresholds on the 0–255 gradient-magnitude scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CannyParams {
    pub low: f64,
    pub high: f64,
}

impl Default for CannyParams {
    fn default() -> Self {
        CannyParams {
            low: 50.0,
            high: 150.0,
        }
    }
}

// Gaussian σ = 1, radius 3, fixed-point weights round(1024·exp(-k²/2)).
// Integer weights keep integer-valued inputs exact through smoothing and
// Sobel, which makes the result bit-identical under value inversion.
const GAUSS: [f64; 7] = [11.0, 139.0, 621.0, 1024.0, 621.0, 139.0, 11.0];
const GAUSS_SUM: f64 = 2566.0;

// tan(22.5°), tan(67.5°)
const TAN_22_5: f64 = 0.414_213_562_373_095_03;
const TAN_67_5: f64 = 2.414_213_562_373_095;

/// Canny edge detection with replicate borders.
///
/// Returns a binary mask (1.0 = edge) and the edge fraction
/// `T = edges / pixels`.
pub fn canny_edges(field: &ScalarField, low: f64, high: f64) -> Result<(ScalarField, f64)> {
    if !(low >= 0.0 && low <= high) {
        return Err(Error::InvalidArgument(format!(
            "canny thresholds need 0 <= low <= high, got low={low} high={high}"
        )));
    }
    let (w, h) = (field.width(), field.height());
    if w * h <= 1 {
        return Ok((ScalarField::filled(w, h, 0.0), 0.0));
    }

    let smooth = separable_smooth(field);
    let (gx, gy) = sobel(&smooth, w, h);
    let mag: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).collect();

    // magnitudes carry the GAUSS_SUM² factor of the unnormalised smoothing
    let scale = GAUSS_SUM * GAUSS_SUM;
    let (low, high) = (low * scale, high * scale);

    let thin = non_max_suppression(&mag, &gx, &gy, w, h);
    let mask = hysteresis(&thin, w, h, low, high);

    let edges = mask.iter().filter(|&&v| v).count();
    let data = mask.iter().map(|&v| if v { 1.0 } else { 0.0 }).collect();
    Ok((
        ScalarField::from_vec_unchecked(w, h, data),
        edges as f64 / (w * h) as f64,
    ))
}

#[inline]
fn clamp_idx(v: isize, n: usize) -> usize {
    v.clamp(0, n as isize - 1) as usize
}

fn separable_smooth(field: &ScalarField) -> Vec<f64> {
    let (w, h) = (field.width(), field.height());
    let src = field.data();
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, g) in GAUSS.iter().enumerate() {
                acc += g * src[y * w + clamp_idx(x as isize + k as isize - 3, w)];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, g) in GAUSS.iter().enumerate() {
                acc += g * tmp[clamp_idx(y as isize + k as isize - 3, h) * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

fn sobel(p: &[f64], w: usize, h: usize) -> (Vec<f64>, Vec<f64>) {
    let at = |x: isize, y: isize| p[clamp_idx(y, h) * w + clamp_idx(x, w)];
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            gx[i] = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            gy[i] = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
        }
    }
    (gx, gy)
}

fn non_max_suppression(mag: &[f64], gx: &[f64], gy: &[f64], w: usize, h: usize) -> Vec<f64> {
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            let m = mag[i];
            if m == 0.0 {
                continue;
            }
            let (ax, ay) = (gx[i].abs(), gy[i].abs());
            let (dx, dy) = if ay <= ax * TAN_22_5 {
                (1, 0)
            } else if ay >= ax * TAN_67_5 {
                (0, 1)
            } else if gx[i] * gy[i] > 0.0 {
                (1, 1)
            } else {
                (1, -1)
            };
            let before = mag[clamp_idx(y - dy, h) * w + clamp_idx(x - dx, w)];
            let after = mag[clamp_idx(y + dy, h) * w + clamp_idx(x + dx, w)];
            // asymmetric tie rule keeps exactly one of two equal neighbours
            if m > before && m >= after {
                out[i] = m;
            }
        }
    }
    out
}

fn hysteresis(thin: &[f64], w: usize, h: usize, low: f64, high: f64) -> Vec<bool> {
    let mut mask = vec![false; w * h];
    let mut queue = VecDeque::new();
    for (i, &m) in thin.iter().enumerate() {
        if m > 0.0 && m >= high {
            mask[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if !mask[j] && thin[j] > 0.0 && thin[j] >= low {
                    mask[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    mask
}
