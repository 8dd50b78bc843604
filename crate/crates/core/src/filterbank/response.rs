use std::f64::consts::PI;

use super::prototype::Prototype1D;
use crate::error::{Error, Result};
use crate::imaging::{Kernel2D, ScalarField};

/// `|Σ h[n] e^{-iω(n-c)}|` with taps centered at `c = (len-1)/2`.
pub fn prototype_response_at(p: &Prototype1D, omega: f64) -> f64 {
    let c = (p.len() as f64 - 1.0) / 2.0;
    let (mut re, mut im) = (0.0, 0.0);
    for (n, &h) in p.taps().iter().enumerate() {
        let phase = omega * (n as f64 - c);
        re += h * phase.cos();
        im -= h * phase.sin();
    }
    re.hypot(im)
}

/// 2D DTFT magnitude at `(ω₁, ω₂)`; `ω₁` pairs with the column index, `ω₂`
/// with the row index.
pub fn kernel_response_at(k: &Kernel2D, w1: f64, w2: f64) -> f64 {
    let n = k.size();
    let c = (n as f64 - 1.0) / 2.0;
    let (mut re, mut im) = (0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            let v = k.at(i, j);
            if v == 0.0 {
                continue;
            }
            let phase = w1 * (i as f64 - c) + w2 * (j as f64 - c);
            re += v * phase.cos();
            im -= v * phase.sin();
        }
    }
    re.hypot(im)
}

/// Magnitude response on a `grid × grid` lattice with
/// `ω = −π + 2πk/grid`, so column/row `grid/2` is the zero frequency.
/// Field `x` indexes `ω₁`, field `y` indexes `ω₂`.
pub fn frequency_response(k: &Kernel2D, grid: usize) -> Result<ScalarField> {
    if grid < 16 {
        return Err(Error::InvalidArgument(format!(
            "response grid must be at least 16, got {grid}"
        )));
    }
    let omega = |idx: usize| -PI + 2.0 * PI * idx as f64 / grid as f64;
    Ok(ScalarField::from_fn(grid, grid, |x, y| {
        kernel_response_at(k, omega(x), omega(y))
    }))
}
