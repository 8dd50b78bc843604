use super::{obb_to_corners, OrientedBox, Point, Polygon};
use crate::exec::Exec;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl AxisRect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        AxisRect { x0, y0, x1, y1 }
    }

    pub fn is_empty(&self) -> bool {
        !(self.x1 > self.x0 && self.y1 > self.y0)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.x >= self.x0 - tol && p.x <= self.x1 + tol && p.y >= self.y0 - tol && p.y <= self.y1 + tol
    }
}

/// One Sutherland–Hodgman pass: keeps the side where `side(p) ≥ 0`.
/// `side` must be affine in `p` so the crossing point interpolates exactly.
fn clip_half_plane(subject: &[Point], side: impl Fn(Point) -> f64) -> Vec<Point> {
    let n = subject.len();
    let mut out = Vec::with_capacity(n + 4);
    for k in 0..n {
        let cur = subject[k];
        let prev = subject[(k + n - 1) % n];
        let (sc, sp) = (side(cur), side(prev));
        if sc >= 0.0 {
            if sp < 0.0 {
                out.push(crossing(prev, cur, sp, sc));
            }
            out.push(cur);
        } else if sp >= 0.0 {
            out.push(crossing(prev, cur, sp, sc));
        }
    }
    out
}

#[inline]
fn crossing(p: Point, q: Point, sp: f64, sq: f64) -> Point {
    let t = sp / (sp - sq);
    Point::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
}

/// Sutherland–Hodgman clip of any simple polygon to an axis-aligned window.
/// May return an empty polygon.
pub fn clip_polygon(subject: &Polygon, window: &AxisRect) -> Polygon {
    let mut v = subject.vertices.clone();
    let w = *window;
    for side in [
        &(move |p: Point| p.x - w.x0) as &dyn Fn(Point) -> f64,
        &(move |p: Point| w.x1 - p.x),
        &(move |p: Point| p.y - w.y0),
        &(move |p: Point| w.y1 - p.y),
    ] {
        if v.is_empty() {
            break;
        }
        v = clip_half_plane(&v, side);
    }
    Polygon::new(v)
}

/// Clip `subject` to a convex `clipper` with positive signed area.
pub fn clip_convex(subject: &Polygon, clipper: &Polygon) -> Polygon {
    let mut v = subject.vertices.clone();
    let c = &clipper.vertices;
    for k in 0..c.len() {
        if v.is_empty() {
            break;
        }
        let (a, b) = (c[k], c[(k + 1) % c.len()]);
        let e = b.sub(a);
        v = clip_half_plane(&v, |p| e.cross(p.sub(a)));
    }
    Polygon::new(v)
}

/// Exact IoU of two rotated rectangles; symmetric bit-for-bit.
pub fn rotated_iou(a: &OrientedBox, b: &OrientedBox) -> f64 {
    let (a, b) = if a.key_cmp(b).is_le() { (a, b) } else { (b, a) };
    let (area_a, area_b) = (a.area(), b.area());
    if area_a <= 0.0 && area_b <= 0.0 {
        return 0.0;
    }
    let inter = clip_convex(&obb_to_corners(a), &obb_to_corners(b)).area();
    let union = area_a + area_b - inter;
    if union <= 0.0 {
        return 0.0;
    }
    (inter / union).clamp(0.0, 1.0)
}

/// `out[i][j] = rotated_iou(a[i], b[j])`.
pub fn iou_matrix(a: &[OrientedBox], b: &[OrientedBox], exec: Exec) -> Vec<Vec<f64>> {
    exec.map(a, |x| b.iter().map(|y| rotated_iou(x, y)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit_square_at(x: f64, y: f64) -> OrientedBox {
        OrientedBox::axis_aligned(x, y, x + 1.0, y + 1.0)
    }

    /// Pixel-center rasterisation of both boxes on a 512×512 grid.
    fn raster_iou(a: &OrientedBox, b: &OrientedBox) -> f64 {
        let (ca, cb) = (obb_to_corners(a), obb_to_corners(b));
        let (ax0, ay0, ax1, ay1) = ca.bounds().unwrap();
        let (bx0, by0, bx1, by1) = cb.bounds().unwrap();
        let (x0, y0) = (ax0.min(bx0), ay0.min(by0));
        let (x1, y1) = (ax1.max(bx1), ay1.max(by1));
        let (sx, sy) = ((x1 - x0) / 512.0, (y1 - y0) / 512.0);
        let (mut inter, mut uni) = (0u64, 0u64);
        for j in 0..512 {
            for i in 0..512 {
                let p = Point::new(x0 + (i as f64 + 0.5) * sx, y0 + (j as f64 + 0.5) * sy);
                let (ia, ib) = (a.contains(p, 0.0), b.contains(p, 0.0));
                inter += (ia && ib) as u64;
                uni += (ia || ib) as u64;
            }
        }
        if uni == 0 { 0.0 } else { inter as f64 / uni as f64 }
    }

    #[test]
    fn analytic_cases() {
        let a = unit_square_at(0.0, 0.0);
        assert_eq!(rotated_iou(&a, &a), 1.0);
        assert_eq!(rotated_iou(&a, &unit_square_at(3.0, 0.0)), 0.0);
        assert_abs_diff_eq!(rotated_iou(&a, &unit_square_at(0.5, 0.0)), 1.0 / 3.0, epsilon = 1e-12);
        let flat = OrientedBox::new(0.0, 0.0, 5.0, 0.0, 0.3);
        assert_eq!(rotated_iou(&flat, &flat), 0.0);
        assert_eq!(rotated_iou(&flat, &a), 0.0);
    }

    #[test]
    fn half_offset_matches_raster() {
        let (a, b) = (unit_square_at(0.0, 0.0), unit_square_at(0.5, 0.0));
        assert!((raster_iou(&a, &b) - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn clip_inside_outside_half() {
        let sq = obb_to_corners(&unit_square_at(0.0, 0.0));
        let inside = clip_polygon(&sq, &AxisRect::new(-1.0, -1.0, 2.0, 2.0));
        assert_eq!(inside, sq);
        let outside = clip_polygon(&sq, &AxisRect::new(5.0, 5.0, 6.0, 6.0));
        assert!(outside.is_empty());
        let half = clip_polygon(&sq, &AxisRect::new(0.5, -1.0, 3.0, 3.0));
        assert_abs_diff_eq!(half.area(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn clip_nonconvex_subject() {
        // L shape, area 3
        let l = Polygon::from_flat(&[0.0, 0.0, 2.0, 0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 0.0, 2.0]).unwrap();
        assert_abs_diff_eq!(l.area(), 3.0);
        let c = clip_polygon(&l, &AxisRect::new(0.0, 0.0, 1.5, 1.5));
        // [0,1.5]×[0,1] plus [0,1]×[1,1.5]
        assert_abs_diff_eq!(c.area(), 1.5 + 0.5, epsilon = 1e-12);
    }

    #[test]
    fn matrix_paths_agree() {
        let boxes: Vec<OrientedBox> = (0..20)
            .map(|k| OrientedBox::new(k as f64 * 0.7, (k % 5) as f64, 3.0, 1.0, k as f64 * 0.3))
            .collect();
        assert_eq!(
            iou_matrix(&boxes, &boxes, Exec::Sequential),
            iou_matrix(&boxes, &boxes, Exec::Parallel)
        );
    }

    fn any_box() -> impl Strategy<Value = OrientedBox> {
        (-5.0f64..5.0, -5.0f64..5.0, 0.5f64..6.0, 0.5f64..6.0, -3.2f64..3.2)
            .prop_map(|(cx, cy, w, h, t)| OrientedBox::new(cx, cy, w, h, t))
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in any_box(), b in any_box()) {
            let ab = rotated_iou(&a, &b);
            prop_assert_eq!(ab, rotated_iou(&b, &a));
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn rigid_motion_invariant(a in any_box(), b in any_box(), rot in -3.0f64..3.0,
                                  dx in -50.0f64..50.0, dy in -50.0f64..50.0) {
            let (s, c) = rot.sin_cos();
            let move_box = |x: &OrientedBox| OrientedBox::new(
                c * x.cx() - s * x.cy() + dx, s * x.cx() + c * x.cy() + dy, x.w(), x.h(), x.theta() + rot);
            let before = rotated_iou(&a, &b);
            let after = rotated_iou(&move_box(&a), &move_box(&b));
            prop_assert!((before - after).abs() < 1e-9);
        }
    }

    #[test]
    fn raster_oracle_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let mut draw = || OrientedBox::new(
                rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0),
                rng.gen_range(1.0..5.0), rng.gen_range(1.0..5.0), rng.gen_range(-3.0..3.0));
            let (a, b) = (draw(), draw());
            assert!((rotated_iou(&a, &b) - raster_iou(&a, &b)).abs() <= 0.01);
        }
    }
}
