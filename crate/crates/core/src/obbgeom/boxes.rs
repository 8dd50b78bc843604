use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::{Point, Polygon};

/// Rotated rectangle `(cx, cy, w, h, θ)`.
///
/// Canonical form: `w ≥ h ≥ 0`, `θ ∈ (−π/2, π/2]` is the direction of the
/// long side. Squares (`w = h`) use `θ ∈ (−π/4, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "BoxRepr")]
pub struct OrientedBox {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    theta: f64,
}

#[derive(Deserialize)]
struct BoxRepr {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    theta: f64,
}

impl From<BoxRepr> for OrientedBox {
    fn from(r: BoxRepr) -> Self {
        OrientedBox::new(r.cx, r.cy, r.w, r.h, r.theta)
    }
}

const SQUARE_REL_TOL: f64 = 1e-9;

impl OrientedBox {
    /// Canonicalises any `(w, h, θ)`; negative extents are taken by magnitude.
    pub fn new(cx: f64, cy: f64, w: f64, h: f64, theta: f64) -> Self {
        let (mut w, mut h, mut theta) = (w.abs(), h.abs(), theta);
        if w < h {
            std::mem::swap(&mut w, &mut h);
            theta += FRAC_PI_2;
        }
        let theta = if (w - h) <= SQUARE_REL_TOL * w.max(1.0) {
            FRAC_PI_4 - (FRAC_PI_4 - theta).rem_euclid(FRAC_PI_2)
        } else {
            FRAC_PI_2 - (FRAC_PI_2 - theta).rem_euclid(PI)
        };
        OrientedBox { cx, cy, w, h, theta }
    }

    pub fn axis_aligned(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        OrientedBox::new((x0 + x1) / 2.0, (y0 + y1) / 2.0, x1 - x0, y1 - y0, 0.0)
    }

    pub fn cx(&self) -> f64 {
        self.cx
    }
    pub fn cy(&self) -> f64 {
        self.cy
    }
    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Same center and angle, each side grown by `2·margin`.
    pub fn expanded(&self, margin: f64) -> OrientedBox {
        OrientedBox::new(
            self.cx,
            self.cy,
            self.w + 2.0 * margin,
            self.h + 2.0 * margin,
            self.theta,
        )
    }

    pub fn translated(&self, dx: f64, dy: f64) -> OrientedBox {
        OrientedBox { cx: self.cx + dx, cy: self.cy + dy, ..*self }
    }

    /// Unit vector along the long side.
    pub fn axis(&self) -> Point {
        Point::new(self.theta.cos(), self.theta.sin())
    }

    /// True if `p` lies inside the box grown by `tol` on every side.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let d = p.sub(self.center());
        let u = self.axis();
        let along = d.dot(u);
        let across = d.cross(u);
        along.abs() <= self.w / 2.0 + tol && across.abs() <= self.h / 2.0 + tol
    }

    /// Total order on the raw fields; used to make symmetric operations
    /// argument-order independent.
    pub(crate) fn key_cmp(&self, o: &OrientedBox) -> std::cmp::Ordering {
        [self.cx, self.cy, self.w, self.h, self.theta]
            .iter()
            .zip([o.cx, o.cy, o.w, o.h, o.theta].iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|c| c.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Four corners with positive signed area; their mean is the box center.
pub fn obb_to_corners(b: &OrientedBox) -> Polygon {
    let (s, c) = b.theta.sin_cos();
    let (hw, hh) = (b.w / 2.0, b.h / 2.0);
    let local = [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)];
    Polygon::new(
        local
            .iter()
            .map(|&(x, y)| Point::new(b.cx + x * c - y * s, b.cy + x * s + y * c))
            .collect(),
    )
}
