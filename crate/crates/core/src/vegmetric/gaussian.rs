use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalized discrete Gaussian over offsets `−(z−1)/2 ..= (z−1)/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel1D {
    sigma: f64,
    weights: Vec<f64>,
}

impl GaussianKernel1D {
    /// `sigma = ∞` gives the flat kernel. Tail weights underflow to 0 once
    /// `(z/2)/σ` exceeds about 38.
    pub fn new(z: usize, sigma: f64) -> Result<Self> {
        if z % 2 == 0 {
            return Err(Error::EvenKernel(z));
        }
        if !(sigma > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be > 0, got {sigma}")));
        }
        let half = (z / 2) as i64;
        // build one side and mirror so G(g) = G(−g) bit-exactly
        let side: Vec<f64> = (0..=half)
            .map(|g| (-0.5 * (g as f64 / sigma).powi(2)).exp())
            .collect();
        let raw: Vec<f64> = (-half..=half).map(|g| side[g.unsigned_abs() as usize]).collect();
        let total: f64 = side[0] + 2.0 * side[1..].iter().sum::<f64>();
        Ok(GaussianKernel1D {
            sigma,
            weights: raw.iter().map(|w| w / total).collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(offset, weight)` pairs from the most negative offset.
    pub fn taps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = (self.weights.len() / 2) as f64;
        self.weights
            .iter()
            .enumerate()
            .map(move |(k, &w)| (k as f64 - half, w))
    }
}
