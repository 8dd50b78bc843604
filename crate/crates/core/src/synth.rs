//! Synthetic scenes with known geometry, used by tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::imaging::RasterImage;
use crate::obbgeom::{OrientedBox, Point};

/// An RGB image with one power line and its box.
#[derive(Debug, Clone)]
pub struct SynthScene {
    pub image: RasterImage,
    pub line: OrientedBox,
}

const BACKGROUND: [u8; 3] = [128, 128, 128];
const CABLE: [u8; 3] = [45, 45, 45];

/// Paints every pixel whose centre lies inside `b`.
pub fn paint_box(img: &mut RasterImage, b: &OrientedBox, px: &[u8]) {
    paint_where(img, |p| b.contains(p, 0.0), |_| px.to_vec());
}

fn paint_where(img: &mut RasterImage, inside: impl Fn(Point) -> bool, mut color: impl FnMut(Point) -> Vec<u8>) {
    for y in 0..img.height() {
        for x in 0..img.width() {
            let p = Point::new(x as f64 + 0.5, y as f64 + 0.5);
            if inside(p) {
                let c = color(p);
                img.set_pixel(x, y, &c);
            }
        }
    }
}

fn canopy_pixel(rng: &mut ChaCha8Rng) -> Vec<u8> {
    vec![rng.gen_range(30..70), rng.gen_range(110..170), rng.gen_range(25..60)]
}

/// Gray 512² frame with one dark cable at a random position and angle,
/// plus a textured green disc. With `encroached` the disc touches the
/// cable; otherwise the same disc sits 200 px away across the cable.
pub fn paired(seed: u64, encroached: bool) -> SynthScene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 512;
    let mut image = RasterImage::filled(size, size, &BACKGROUND).expect("valid size");
    let cy = rng.gen_range(150.0..362.0);
    let cx = rng.gen_range(200.0..312.0);
    let len = rng.gen_range(140.0..200.0);
    let theta: f64 = rng.gen_range(-0.5..0.5);
    let line = OrientedBox::new(cx, cy, len, 4.0, theta);
    paint_box(&mut image, &OrientedBox::new(cx, cy, len, 3.0, theta), &CABLE);

    let radius: f64 = rng.gen_range(18.0..26.0);
    let t: f64 = rng.gen_range(-len / 4.0..len / 4.0);
    let u = line.axis();
    let n = Point::new(-u.y, u.x);
    // toward the frame centre so the far disc stays in view
    let side = if cy < size as f64 / 2.0 { 1.0 } else { -1.0 };
    let offset = side * if encroached { radius + 1.5 } else { 200.0 };
    let c = Point::new(cx + t * u.x + offset * n.x, cy + t * u.y + offset * n.y);
    let mut tex = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    paint_where(&mut image, |p| p.dist(c) <= radius, |_| canopy_pixel(&mut tex));
    SynthScene { image, line }
}

/// 256² frame of dense crowns (saturated green, shaded disc texture) with a
/// cable running through the middle.
pub fn dense_canopy(seed: u64) -> SynthScene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 256;
    let mut image = RasterImage::filled(size, size, &[20, 200, 35]).expect("valid size");
    for _ in 0..220 {
        let c = Point::new(rng.gen_range(0.0..size as f64), rng.gen_range(0.0..size as f64));
        let r: f64 = rng.gen_range(5.0..12.0);
        let shade: f64 = rng.gen_range(0.55..1.0);
        paint_where(
            &mut image,
            |p| p.dist(c) <= r,
            |p| {
                let k = shade * (1.0 - 0.35 * p.dist(c) / r);
                vec![(10.0 * k) as u8 + 3, (225.0 * k) as u8, (40.0 * k) as u8]
            },
        );
    }
    let theta: f64 = rng.gen_range(-0.3..0.3);
    let line = OrientedBox::new(128.0, 128.0, 180.0, 4.0, theta);
    paint_box(&mut image, &OrientedBox::new(128.0, 128.0, 180.0, 2.0, theta), &CABLE);
    SynthScene { image, line }
}

/// Single bright line of half-width `half_width` on black, through
/// `(cx, cy)` at `theta_deg` (image axes, y down). `length = None` spans
/// the frame.
pub fn line_image(
    size: usize,
    cx: f64,
    cy: f64,
    theta_deg: f64,
    half_width: f64,
    length: Option<f64>,
) -> RasterImage {
    let mut img = RasterImage::filled(size, size, &[0, 0, 0]).expect("valid size");
    let t = theta_deg.to_radians();
    let u = Point::new(t.cos(), t.sin());
    let c = Point::new(cx, cy);
    paint_where(
        &mut img,
        |p| {
            let d = p.sub(c);
            d.cross(u).abs() <= half_width && length.map_or(true, |l| d.dot(u).abs() <= l / 2.0)
        },
        |_| vec![255, 255, 255],
    );
    img
}
