use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrototypeKind {
    Highpass,
    Lowpass,
}

/// Symmetric odd-length 1D filter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prototype1D {
    taps: Vec<f64>,
    kind: PrototypeKind,
}

impl Prototype1D {
    pub fn new(taps: Vec<f64>, kind: PrototypeKind) -> Result<Self> {
        let n = taps.len();
        if n % 2 == 0 {
            return Err(Error::EvenKernel(n));
        }
        if (0..n).any(|i| taps[i] != taps[n - 1 - i]) {
            return Err(Error::InvalidArgument("prototype taps must be symmetric".into()));
        }
        if kind == PrototypeKind::Highpass && taps.iter().sum::<f64>().abs() > 1e-12 {
            return Err(Error::InvalidArgument("highpass taps must sum to zero".into()));
        }
        Ok(Prototype1D { taps, kind })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn kind(&self) -> PrototypeKind {
        self.kind
    }
}

/// 7-tap highpass from the half-band Lagrangian maximally flat lowpass via
/// `H(z) → H(-z)`.
pub fn highpass_prototype() -> Prototype1D {
    Prototype1D {
        taps: vec![
            1.0 / 16.0,
            0.0,
            -9.0 / 16.0,
            1.0,
            -9.0 / 16.0,
            0.0,
            1.0 / 16.0,
        ],
        kind: PrototypeKind::Highpass,
    }
}

/// 7-tap wide-band lowpass, DC gain 2.5.
pub fn lowpass_prototype() -> Prototype1D {
    Prototype1D {
        taps: vec![-0.25, -0.5, 1.0, 2.0, 1.0, -0.5, -0.25],
        kind: PrototypeKind::Lowpass,
    }
}
