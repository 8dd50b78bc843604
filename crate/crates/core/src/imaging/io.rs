use std::path::Path;

use image::{DynamicImage, GrayImage, RgbImage};

use super::RasterImage;
use crate::error::{Error, Result};

/// Decodes PNG or JPEG. Color inputs become 3-channel RGB (alpha dropped),
/// grayscale inputs stay single-channel.
pub fn load_raster(path: &Path) -> Result<RasterImage> {
    let img = image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if img.color().has_color() {
        RasterImage::new(w, h, 3, img.into_rgb8().into_raw())
    } else {
        RasterImage::new(w, h, 1, img.into_luma8().into_raw())
    }
}

/// Encodes by file extension (`.png`, `.jpg`/`.jpeg`).
pub fn save_raster(path: &Path, img: &RasterImage) -> Result<()> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let dynamic = match img.channels() {
        1 => GrayImage::from_raw(w, h, img.data().to_vec()).map(DynamicImage::ImageLuma8),
        _ => RgbImage::from_raw(w, h, img.data().to_vec()).map(DynamicImage::ImageRgb8),
    }
    .expect("raster invariants guarantee buffer size");
    dynamic.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}
