use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square correlation kernel with odd side length.
///
/// `weights` is row-major: entry `(i, j)` (column `i`, row `j`) lives at
/// `weights[j * n + i]`. `angle_deg` records the orientation the kernel was
/// built for; it does not affect filtering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel2D {
    n: usize,
    weights: Vec<f64>,
    angle_deg: f64,
}

impl Kernel2D {
    pub fn new(n: usize, weights: Vec<f64>, angle_deg: f64) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::EvenKernel(n));
        }
        if weights.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "kernel of side {n} needs {} weights, got {}",
                n * n,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("non-finite kernel weight".into()));
        }
        Ok(Kernel2D {
            n,
            weights,
            angle_deg,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn angle_deg(&self) -> f64 {
        self.angle_deg
    }

    /// Weight at column `i`, row `j`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.weights[j * self.n + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.weights[j * self.n..(j + 1) * self.n]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn with_angle(mut self, angle_deg: f64) -> Self {
        self.angle_deg = angle_deg;
        self
    }

    /// Swap rows and columns.
    pub fn transpose(&self) -> Kernel2D {
        let n = self.n;
        let weights = (0..n * n).map(|k| self.at(k / n, k % n)).collect();
        Kernel2D {
            n,
            weights,
            angle_deg: self.angle_deg,
        }
    }

    /// Mirror across the horizontal axis (row `j` ↔ row `n-1-j`).
    pub fn flip_vertical(&self) -> Kernel2D {
        let n = self.n;
        let weights = (0..n).rev().flat_map(|j| self.row(j).to_vec()).collect();
        Kernel2D {
            n,
            weights,
            angle_deg: self.angle_deg,
        }
    }
}
