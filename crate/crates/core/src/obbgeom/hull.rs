use super::{OrientedBox, Point, Polygon};
use crate::error::{Error, Result};

/// Andrew's monotone chain. Output has positive signed area, starts at the
/// lowest-x (then lowest-y) point and drops collinear points. All-identical
/// input yields a single vertex, collinear input the two extreme points;
/// both report [`Polygon::is_degenerate`].
pub fn convex_hull(points: &[Point]) -> Polygon {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Polygon::new(pts);
    }

    let turn = |o: Point, a: Point, b: Point| a.sub(o).cross(b.sub(o));
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Polygon::new(hull)
}

/// Minimum-area enclosing rectangle by rotating calipers.
///
/// One side of the result is collinear with a hull edge. A two-point hull
/// gives a zero-height box spanning the points; a single point gives a
/// zero-size box at that point.
pub fn min_area_rect(hull: &Polygon) -> Result<OrientedBox> {
    let v = &hull.vertices;
    match v.len() {
        0 => return Err(Error::InvalidArgument("empty hull".into())),
        1 => return Ok(OrientedBox::new(v[0].x, v[0].y, 0.0, 0.0, 0.0)),
        2 => {
            let d = v[1].sub(v[0]);
            return Ok(OrientedBox::new(
                (v[0].x + v[1].x) / 2.0,
                (v[0].y + v[1].y) / 2.0,
                d.x.hypot(d.y),
                0.0,
                d.y.atan2(d.x),
            ));
        }
        _ => {}
    }
    let m = v.len();
    let next = |k: usize| (k + 1) % m;

    let edge_frame = |i: usize| {
        let e = v[next(i)].sub(v[i]);
        let len = e.x.hypot(e.y);
        let u = Point::new(e.x / len, e.y / len);
        // inward normal for positive-area ordering
        (u, Point::new(-u.y, u.x))
    };

    // initial pointers for edge 0 by full scan
    let (u0, n0) = edge_frame(0);
    let argmax = |f: &dyn Fn(Point) -> f64| {
        (0..m)
            .max_by(|&a, &b| f(v[a]).total_cmp(&f(v[b])))
            .unwrap()
    };
    let mut far = argmax(&|p| p.sub(v[0]).dot(n0));
    let mut right = argmax(&|p| p.sub(v[0]).dot(u0));
    let mut left = argmax(&|p| -p.sub(v[0]).dot(u0));

    let mut best: Option<(f64, OrientedBox)> = None;
    for i in 0..m {
        let (u, n) = edge_frame(i);
        let origin = v[i];
        let proj_u = |k: usize| v[k].sub(origin).dot(u);
        let proj_n = |k: usize| v[k].sub(origin).dot(n);

        for _ in 0..m {
            if proj_n(next(far)) >= proj_n(far) && next(far) != i {
                far = next(far);
            } else {
                break;
            }
        }
        for _ in 0..m {
            if proj_u(next(right)) >= proj_u(right) && next(right) != i {
                right = next(right);
            } else {
                break;
            }
        }
        for _ in 0..m {
            if proj_u(next(left)) <= proj_u(left) && next(left) != next(i) {
                left = next(left);
            } else {
                break;
            }
        }

        let (lo, hi) = (proj_u(left).min(0.0), proj_u(right).max(proj_u(next(i))));
        let height = proj_n(far).max(0.0);
        let width = hi - lo;
        let area = width * height;
        if best.as_ref().map_or(true, |(a, _)| area < *a) {
            let mid_u = (lo + hi) / 2.0;
            let c = Point::new(
                origin.x + u.x * mid_u + n.x * height / 2.0,
                origin.y + u.y * mid_u + n.y * height / 2.0,
            );
            best = Some((area, OrientedBox::new(c.x, c.y, width, height, u.y.atan2(u.x))));
        }
    }
    Ok(best.expect("hull has at least 3 edges").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obbgeom::obb_to_corners;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    /// O(n³) oracle: a point is a hull vertex iff it is not inside (or on
    /// the segment between) any triangle / pair of other points.
    fn brute_force_hull_vertices(points: &[Point]) -> Vec<Point> {
        let mut uniq = points.to_vec();
        uniq.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        uniq.dedup();
        let n = uniq.len();
        let mut out = Vec::new();
        for k in 0..n {
            let p = uniq[k];
            // not a hull vertex iff inside some closed non-degenerate triangle of other points
            let mut interior = false;
            'outer: for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if [a, b, c].contains(&k) {
                            continue;
                        }
                        let (pa, pb, pc) = (uniq[a], uniq[b], uniq[c]);
                        if pb.sub(pa).cross(pc.sub(pa)) == 0.0 {
                            continue;
                        }
                        let d1 = pb.sub(pa).cross(p.sub(pa));
                        let d2 = pc.sub(pb).cross(p.sub(pb));
                        let d3 = pa.sub(pc).cross(p.sub(pc));
                        let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
                        let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
                        if !(neg && pos) {
                            interior = true;
                            break 'outer;
                        }
                    }
                }
            }
            if !interior {
                out.push(p);
            }
        }
        out
    }

    /// Oracle: best rectangle over all hull-edge alignments.
    fn brute_force_min_area(hull: &Polygon) -> f64 {
        let v = &hull.vertices;
        let mut best = f64::INFINITY;
        for i in 0..v.len() {
            let e = v[(i + 1) % v.len()].sub(v[i]);
            let u = Point::new(e.x, e.y);
            let len = u.x.hypot(u.y);
            let u = Point::new(u.x / len, u.y / len);
            let n = Point::new(-u.y, u.x);
            let (mut a0, mut a1, mut b0, mut b1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
            for p in v {
                let d = *p;
                a0 = a0.min(d.dot(u));
                a1 = a1.max(d.dot(u));
                b0 = b0.min(d.dot(n));
                b1 = b1.max(d.dot(n));
            }
            best = best.min((a1 - a0) * (b1 - b0));
        }
        best
    }

    #[test]
    fn triangle_unchanged() {
        let h = convex_hull(&pts(&[(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)]));
        assert_eq!(h.len(), 3);
        assert!(h.signed_area() > 0.0);
        assert_abs_diff_eq!(h.area(), 6.0);
    }

    #[test]
    fn square_with_center_and_edge_midpoint() {
        let h = convex_hull(&pts(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.5, 0.5),
            (0.5, 0.0),
        ]));
        assert_eq!(h.vertices, pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
    }

    #[test]
    fn degenerate_inputs_flagged() {
        let h = convex_hull(&pts(&[(2.0, 2.0), (2.0, 2.0)]));
        assert_eq!(h.len(), 1);
        assert!(h.is_degenerate());
        let h = convex_hull(&pts(&[(0.0, 0.0), (1.0, 1.0), (3.0, 3.0), (2.0, 2.0)]));
        assert_eq!(h.vertices, pts(&[(0.0, 0.0), (3.0, 3.0)]));
        assert!(h.is_degenerate());
    }

    #[test]
    fn collinear_hull_gives_flat_box() {
        let b = min_area_rect(&convex_hull(&pts(&[(0.0, 0.0), (3.0, 4.0), (6.0, 8.0)]))).unwrap();
        assert_abs_diff_eq!(b.w(), 10.0, epsilon = 1e-12);
        assert_eq!(b.h(), 0.0);
        assert_abs_diff_eq!(b.theta(), 4f64.atan2(3.0), epsilon = 1e-12);
        assert!(min_area_rect(&Polygon::default()).is_err());
    }

    #[test]
    fn axis_aligned_rectangle_recovered() {
        let b = min_area_rect(&convex_hull(&pts(&[(0.0, 0.0), (4.0, 0.0), (4.0, 2.0), (0.0, 2.0)])))
            .unwrap();
        assert_abs_diff_eq!(b.cx(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.cy(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.w(), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.h(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.theta(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rotated_unit_square_recovered() {
        let t = 30f64.to_radians();
        let sq = OrientedBox::new(10.0, 5.0, 1.0, 1.0, t);
        let b = min_area_rect(&convex_hull(&obb_to_corners(&sq).vertices)).unwrap();
        assert_abs_diff_eq!(b.theta(), t, epsilon = 1e-6);
        assert_abs_diff_eq!(b.area(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(b.cx(), 10.0, epsilon = 1e-9);
    }

    fn cloud() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..100)
            .prop_map(|v| v.into_iter().map(Point::from).collect())
    }

    fn angle_diff_mod_pi(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(PI);
        d.min(PI - d)
    }

    proptest! {
        #[test]
        fn hull_matches_brute_force(points in prop::collection::vec((-20i32..20, -20i32..20), 3..40)) {
            // integer coordinates keep the oracle's orientation tests exact
            let points: Vec<Point> = points.into_iter().map(|(x, y)| Point::new(x as f64, y as f64)).collect();
            let hull = convex_hull(&points);
            prop_assume!(!hull.is_degenerate());
            let mut got = hull.vertices;
            let mut want = brute_force_hull_vertices(&points);
            let key = |a: &Point, b: &Point| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
            got.sort_by(key);
            want.sort_by(key);
            prop_assert_eq!(got, want);
        }

        #[test]
        fn calipers_match_edge_alignment_oracle(points in cloud()) {
            let hull = convex_hull(&points);
            prop_assume!(!hull.is_degenerate());
            let b = min_area_rect(&hull).unwrap();
            let oracle = brute_force_min_area(&hull);
            prop_assert!((b.area() - oracle).abs() <= 1e-6 * oracle.max(1.0));
            prop_assert!(b.area() + 1e-9 >= hull.area());
            for p in &points {
                prop_assert!(b.contains(*p, 1e-6));
            }
        }

        #[test]
        fn corners_round_trip(cx in -100.0f64..100.0, cy in -100.0f64..100.0,
                              w in 0.5f64..50.0, h in 0.5f64..50.0, t in -3.0f64..3.0) {
            prop_assume!((w - h).abs() > 1e-3);
            let b = OrientedBox::new(cx, cy, w, h, t);
            let r = min_area_rect(&convex_hull(&obb_to_corners(&b).vertices)).unwrap();
            prop_assert!((r.cx() - b.cx()).abs() < 1e-6);
            prop_assert!((r.cy() - b.cy()).abs() < 1e-6);
            prop_assert!((r.w() - b.w()).abs() < 1e-6);
            prop_assert!((r.h() - b.h()).abs() < 1e-6);
            prop_assert!(angle_diff_mod_pi(r.theta(), b.theta()) < 1e-6);
        }
    }
}
