//! Pixel-level primitives shared by every other module.
//!
//! Coordinates: `x` is the column (grows right), `y` is the row (grows
//! down). Continuous geometry treats pixel `(x, y)` as the unit square
//! `[x, x+1) × [y, y+1)`, so its center sits at `(x + 0.5, y + 0.5)`.

mod canny;
mod io;
mod kernel;

pub use canny::{canny_edges, CannyParams};
pub use io::{load_raster, save_raster};
pub use kernel::Kernel2D;

use crate::error::{Error, Result};
use crate::exec::Exec;

/// 8-bit raster, row-major, channels interleaved (R,G,B for 3-channel data).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "raster must be at least 1x1, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidArgument(format!(
                "raster must have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::RasterShape {
                width,
                height,
                channels,
                actual: data.len(),
            });
        }
        Ok(RasterImage {
            width,
            height,
            channels,
            data,
        })
    }

    /// Image with every pixel set to `px` (length 1 or 3).
    pub fn filled(width: usize, height: usize, px: &[u8]) -> Result<Self> {
        let data = px
            .iter()
            .copied()
            .cycle()
            .take(width * height * px.len())
            .collect();
        RasterImage::new(width, height, px.len(), data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, px: &[u8]) {
        let i = (y * self.width + x) * self.channels;
        self.data[i..i + self.channels].copy_from_slice(px);
    }

    /// `w × h` window with top-left corner at `(x0, y0)`; parts outside the
    /// source are zero-filled.
    pub fn crop_padded(&self, x0: usize, y0: usize, w: usize, h: usize) -> RasterImage {
        let c = self.channels;
        let mut data = vec![0u8; w * h * c];
        for y in 0..h {
            let sy = y0 + y;
            if sy >= self.height {
                break;
            }
            let x_end = (x0 + w).min(self.width);
            if x0 >= x_end {
                break;
            }
            let src = &self.data[(sy * self.width + x0) * c..(sy * self.width + x_end) * c];
            data[y * w * c..y * w * c + src.len()].copy_from_slice(src);
        }
        RasterImage {
            width: w,
            height: h,
            channels: c,
            data,
        }
    }
}

/// Real-valued single-channel field, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "field must be at least 1x1, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::RasterShape {
                width,
                height,
                channels: 1,
                actual: data.len(),
            });
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite field value {v}")));
        }
        Ok(ScalarField {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0 && value.is_finite());
        ScalarField {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0);
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        ScalarField {
            width,
            height,
            data,
        }
    }

    pub(crate) fn from_vec_unchecked(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        ScalarField {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn transpose(&self) -> ScalarField {
        ScalarField::from_fn(self.height, self.width, |x, y| self.get(y, x))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

/// ITU-R 601 luma, real valued in `[0, 255]`. Single-channel input passes through.
pub fn to_grayscale(img: &RasterImage) -> ScalarField {
    let data = match img.channels {
        1 => img.data.iter().map(|&v| f64::from(v)).collect(),
        _ => img
            .data
            .chunks_exact(3)
            .map(|p| 0.299 * f64::from(p[0]) + 0.587 * f64::from(p[1]) + 0.114 * f64::from(p[2]))
            .collect(),
    };
    ScalarField::from_vec_unchecked(img.width, img.height, data)
}

/// Same-size 2D correlation (no kernel flip) with zero padding.
pub fn convolve2d(field: &ScalarField, kernel: &Kernel2D) -> ScalarField {
    convolve2d_with(field, kernel, Exec::default())
}

pub fn convolve2d_with(field: &ScalarField, kernel: &Kernel2D, exec: Exec) -> ScalarField {
    let (w, h) = (field.width, field.height);
    let n = kernel.size();
    let r = (n / 2) as isize;
    let kw = kernel.weights();
    let mut out = vec![0.0; w * h];
    exec.for_each_chunk_mut(&mut out, w, |y, row| {
        let y = y as isize;
        for (ky, krow) in kw.chunks_exact(n).enumerate() {
            let sy = y + ky as isize - r;
            if sy < 0 || sy >= h as isize {
                continue;
            }
            let src = &field.data[sy as usize * w..(sy as usize + 1) * w];
            for (kx, &k) in krow.iter().enumerate() {
                if k == 0.0 {
                    continue;
                }
                let dx = kx as isize - r;
                // output x reads src[x + dx]
                let x_lo = (-dx).max(0) as usize;
                let x_hi = (w as isize - dx).min(w as isize).max(0) as usize;
                for x in x_lo..x_hi {
                    row[x] += k * src[(x as isize + dx) as usize];
                }
            }
        }
    });
    ScalarField::from_vec_unchecked(w, h, out)
}
