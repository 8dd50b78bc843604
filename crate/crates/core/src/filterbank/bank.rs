use serde::{Deserialize, Serialize};

use super::geometry::cell_line_length;
use super::prototype::Prototype1D;
use crate::error::{Error, Result};
use crate::imaging::Kernel2D;

/// The eight bank orientations. Steep/shallow pairs are `atan 2` / `atan ½`
/// (displayed as 63.44° / 26.56°).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Deg0,
    Deg26,
    Deg45,
    Deg63,
    Deg90,
    NegDeg63,
    NegDeg45,
    NegDeg26,
}

impl Direction {
    /// Bank channel order.
    pub const ALL: [Direction; 8] = [
        Direction::Deg0,
        Direction::Deg26,
        Direction::Deg45,
        Direction::Deg63,
        Direction::Deg90,
        Direction::NegDeg63,
        Direction::NegDeg45,
        Direction::NegDeg26,
    ];

    pub fn degrees(self) -> f64 {
        let shallow = 0.5f64.atan().to_degrees();
        let steep = 2f64.atan().to_degrees();
        match self {
            Direction::Deg0 => 0.0,
            Direction::Deg26 => shallow,
            Direction::Deg45 => 45.0,
            Direction::Deg63 => steep,
            Direction::Deg90 => 90.0,
            Direction::NegDeg63 => -steep,
            Direction::NegDeg45 => -45.0,
            Direction::NegDeg26 => -shallow,
        }
    }

    pub fn radians(self) -> f64 {
        self.degrees().to_radians()
    }

    /// Display label, e.g. `"-26.56"`.
    pub fn label(self) -> &'static str {
        match self {
            Direction::Deg0 => "0",
            Direction::Deg26 => "26.56",
            Direction::Deg45 => "45",
            Direction::Deg63 => "63.44",
            Direction::Deg90 => "90",
            Direction::NegDeg63 => "-63.44",
            Direction::NegDeg45 => "-45",
            Direction::NegDeg26 => "-26.56",
        }
    }

    pub fn index(self) -> usize {
        Direction::ALL.iter().position(|&d| d == self).unwrap()
    }

    /// Nearest bank direction to an angle in degrees (modulo 180°).
    pub fn nearest(theta_deg: f64) -> Direction {
        let wrap = |a: f64| {
            let d = (a % 180.0 + 180.0) % 180.0;
            d.min(180.0 - d)
        };
        *Direction::ALL
            .iter()
            .min_by(|a, b| {
                wrap(a.degrees() - theta_deg)
                    .partial_cmp(&wrap(b.degrees() - theta_deg))
                    .unwrap()
            })
            .unwrap()
    }

    /// The bank direction perpendicular to this one.
    pub fn orthogonal(self) -> Direction {
        Direction::nearest(self.degrees() + 90.0)
    }
}

fn shallow_kernel(p: &Prototype1D, theta_deg: f64) -> Kernel2D {
    let n = p.len();
    let c = (n - 1) / 2;
    let center = cell_line_length(n, theta_deg, c, c);
    let mut w = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..n {
            let l = cell_line_length(n, theta_deg, i, j);
            if l > 0.0 {
                w[j * n + i] = p.taps()[i] * l / center;
            }
        }
    }
    Kernel2D::new(n, w, theta_deg).expect("odd n, finite weights")
}

/// Lays the prototype along angle `theta_deg ∈ [−90°, 90°]`.
///
/// `|θ| ≤ 45°` uses the cell-length weighting directly; `θ > 45°` is the
/// transpose of the `90° − θ` kernel; negative angles mirror the positive
/// kernel across the horizontal axis.
pub fn rotate_filter(p: &Prototype1D, theta_deg: f64) -> Result<Kernel2D> {
    if p.len() % 2 == 0 {
        return Err(Error::EvenKernel(p.len()));
    }
    if !theta_deg.is_finite() || theta_deg.abs() > 90.0 + 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "rotation angle must lie in [-90, 90], got {theta_deg}"
        )));
    }
    let a = theta_deg.abs();
    let positive = if a <= 45.0 {
        shallow_kernel(p, a)
    } else {
        shallow_kernel(p, 90.0 - a).transpose()
    };
    let k = if theta_deg < 0.0 {
        positive.flip_vertical()
    } else {
        positive
    };
    Ok(k.with_angle(theta_deg))
}

/// Eight rotated kernels in [`Direction::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionalBank {
    kernels: Vec<Kernel2D>,
}

impl DirectionalBank {
    pub fn from_kernels(kernels: Vec<Kernel2D>) -> Result<Self> {
        if kernels.len() != 8 {
            return Err(Error::InvalidArgument(format!(
                "a directional bank holds exactly 8 kernels, got {}",
                kernels.len()
            )));
        }
        for (k, d) in kernels.iter().zip(Direction::ALL) {
            if (k.angle_deg() - d.degrees()).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "kernel angle {} does not match bank slot {}",
                    k.angle_deg(),
                    d.label()
                )));
            }
        }
        Ok(DirectionalBank { kernels })
    }

    pub fn kernels(&self) -> &[Kernel2D] {
        &self.kernels
    }

    pub fn kernel(&self, d: Direction) -> &Kernel2D {
        &self.kernels[d.index()]
    }
}

pub fn build_bank(p: &Prototype1D) -> DirectionalBank {
    let kernels = Direction::ALL
        .iter()
        .map(|d| rotate_filter(p, d.degrees()).expect("prototype invariants hold"))
        .collect();
    DirectionalBank { kernels }
}
