use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::bank::{build_bank, DirectionalBank, Direction};
use super::prototype::{highpass_prototype, lowpass_prototype};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::imaging::{convolve2d_with, to_grayscale, Kernel2D, RasterImage, ScalarField};

/// Initial weights of the directional block: 8 highpass kernels, leaky
/// ReLU, 8 lowpass kernels wired per direction, and an 8→3 channel mixer.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalBlockParams {
    pub hp_bank: DirectionalBank,
    pub lp_bank: DirectionalBank,
    pub leaky_slope: f64,
    /// `converter[out][in]`
    pub converter: [[f64; 8]; 3],
}

impl Default for DirectionalBlockParams {
    fn default() -> Self {
        DirectionalBlockParams {
            hp_bank: build_bank(&highpass_prototype()),
            lp_bank: build_bank(&lowpass_prototype()),
            leaky_slope: 0.01,
            converter: [[1.0 / 8.0; 8]; 3],
        }
    }
}

impl DirectionalBlockParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.leaky_slope > 0.0 && self.leaky_slope < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "leaky slope must lie in (0, 1), got {}",
                self.leaky_slope
            )));
        }
        if self.converter.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite converter weight".into()));
        }
        Ok(())
    }

    fn kernel_size(&self) -> usize {
        self.hp_bank.kernels()[0].size()
    }
}

/// Pre-converter features: channel `k` is
/// `lp_k ⋆ leaky(hp_k ⋆ gray)`, in [`Direction::ALL`] order.
pub fn directional_features(
    gray: &ScalarField,
    params: &DirectionalBlockParams,
    exec: Exec,
) -> Vec<ScalarField> {
    let slope = params.leaky_slope;
    exec.map_range(8, |k| {
        let hp = convolve2d_with(gray, &params.hp_bank.kernels()[k], Exec::Sequential);
        let act = hp.map(|v| if v >= 0.0 { v } else { slope * v });
        convolve2d_with(&act, &params.lp_bank.kernels()[k], Exec::Sequential)
    })
}

/// 1×1 mixing of the 8 features into 3 channels (batch norm at its
/// identity initialisation).
pub fn mix_channels(features: &[ScalarField], converter: &[[f64; 8]; 3]) -> [ScalarField; 3] {
    assert_eq!(features.len(), 8);
    let (w, h) = (features[0].width(), features[0].height());
    converter.map(|row| {
        let mut out = vec![0.0; w * h];
        for (f, &c) in features.iter().zip(row.iter()) {
            for (o, v) in out.iter_mut().zip(f.data()) {
                *o += c * v;
            }
        }
        ScalarField::from_vec_unchecked(w, h, out)
    })
}

/// Sum of squares per channel.
pub fn channel_energies(features: &[ScalarField]) -> Vec<f64> {
    features.iter().map(ScalarField::sum_of_squares).collect()
}

/// Full block on an image, rescaled to 8 bits for viewing.
///
/// The affine rescale maps the min/max over interior pixels (those at least
/// `2·(n/2)` from every border, so untouched by zero padding) to `[0, 255]`;
/// other pixels are clamped. A flat interior maps to all zeros.
pub fn directional_block_forward(
    img: &RasterImage,
    params: &DirectionalBlockParams,
) -> Result<RasterImage> {
    params.validate()?;
    let gray = to_grayscale(img);
    let features = directional_features(&gray, params, Exec::default());
    let mixed = mix_channels(&features, &params.converter);
    let (w, h) = (gray.width(), gray.height());

    let margin = 2 * (params.kernel_size() / 2);
    let interior = |x: usize, y: usize| {
        w <= 2 * margin || h <= 2 * margin || (x >= margin && y >= margin && x < w - margin && y < h - margin)
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for ch in &mixed {
        for y in 0..h {
            for x in 0..w {
                if interior(x, y) {
                    let v = ch.get(x, y);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
    }
    let span = hi - lo;
    let mut data = Vec::with_capacity(w * h * 3);
    for i in 0..w * h {
        for ch in &mixed {
            let v = if span > 1e-6 {
                ((ch.data()[i] - lo) / span * 255.0).clamp(0.0, 255.0).round()
            } else {
                0.0
            };
            data.push(v as u8);
        }
    }
    RasterImage::new(w, h, 3, data)
}

/// On-disk layout of [`DirectionalBlockParams`].
///
/// Shapes follow the usual `[out, in, kh, kw]` convolution convention with
/// row-major flattening. The lowpass layer is stored as a full 8→8
/// convolution whose only non-zero blocks are the diagonal ones
/// (`[o][o]` = lowpass kernel at direction `o`), equivalent to a depthwise
/// convolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub format: String,
    pub version: u32,
    pub kernel_size: usize,
    pub angles_deg: Vec<f64>,
    pub leaky_slope: f64,
    pub layers: Vec<WeightLayer>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightLayer {
    pub name: String,
    pub shape: Vec<usize>,
    pub weights: Vec<f64>,
}

const WEIGHT_FORMAT: &str = "linewatch.directional-block";

impl WeightFile {
    pub fn from_params(params: &DirectionalBlockParams) -> WeightFile {
        let n = params.kernel_size();
        let hp: Vec<f64> = params
            .hp_bank
            .kernels()
            .iter()
            .flat_map(|k| k.weights().to_vec())
            .collect();
        let mut lp = vec![0.0; 8 * 8 * n * n];
        for (o, k) in params.lp_bank.kernels().iter().enumerate() {
            let base = (o * 8 + o) * n * n;
            lp[base..base + n * n].copy_from_slice(k.weights());
        }
        let conv: Vec<f64> = params.converter.iter().flatten().copied().collect();
        WeightFile {
            format: WEIGHT_FORMAT.to_string(),
            version: 1,
            kernel_size: n,
            angles_deg: Direction::ALL.iter().map(|d| d.degrees()).collect(),
            leaky_slope: params.leaky_slope,
            layers: vec![
                WeightLayer {
                    name: "hp_conv".into(),
                    shape: vec![8, 1, n, n],
                    weights: hp,
                },
                WeightLayer {
                    name: "lp_conv".into(),
                    shape: vec![8, 8, n, n],
                    weights: lp,
                },
                WeightLayer {
                    name: "converter".into(),
                    shape: vec![3, 8, 1, 1],
                    weights: conv,
                },
            ],
        }
    }

    pub fn to_params(&self) -> Result<DirectionalBlockParams> {
        let bad = |reason: String| Error::InvalidArgument(format!("weight file: {reason}"));
        if self.format != WEIGHT_FORMAT || self.version != 1 {
            return Err(bad(format!("unsupported format {} v{}", self.format, self.version)));
        }
        let n = self.kernel_size;
        if self.angles_deg.len() != 8 {
            return Err(bad(format!("expected 8 angles, got {}", self.angles_deg.len())));
        }
        let layer = |name: &str, shape: &[usize]| -> Result<&WeightLayer> {
            let l = self
                .layers
                .iter()
                .find(|l| l.name == name)
                .ok_or_else(|| bad(format!("missing layer {name}")))?;
            if l.shape != shape || l.weights.len() != shape.iter().product::<usize>() {
                return Err(bad(format!("layer {name} has shape {:?}", l.shape)));
            }
            Ok(l)
        };
        let hp = layer("hp_conv", &[8, 1, n, n])?;
        let lp = layer("lp_conv", &[8, 8, n, n])?;
        let conv = layer("converter", &[3, 8, 1, 1])?;

        let nn = n * n;
        let mut hp_k = Vec::with_capacity(8);
        let mut lp_k = Vec::with_capacity(8);
        for (o, &angle) in self.angles_deg.iter().enumerate() {
            hp_k.push(Kernel2D::new(n, hp.weights[o * nn..(o + 1) * nn].to_vec(), angle)?);
            for i in 0..8 {
                let block = &lp.weights[(o * 8 + i) * nn..(o * 8 + i + 1) * nn];
                if i != o && block.iter().any(|&v| v != 0.0) {
                    return Err(bad(format!("lp_conv block [{o}][{i}] must be zero")));
                }
            }
            let diag = (o * 8 + o) * nn;
            lp_k.push(Kernel2D::new(n, lp.weights[diag..diag + nn].to_vec(), angle)?);
        }
        let mut converter = [[0.0; 8]; 3];
        for (r, row) in converter.iter_mut().enumerate() {
            row.copy_from_slice(&conv.weights[r * 8..(r + 1) * 8]);
        }
        let params = DirectionalBlockParams {
            hp_bank: DirectionalBank::from_kernels(hp_k)?,
            lp_bank: DirectionalBank::from_kernels(lp_k)?,
            leaky_slope: self.leaky_slope,
            converter,
        };
        params.validate()?;
        Ok(params)
    }
}

/// Writes the pretty-printed JSON weight file. Output bytes depend only on
/// the parameters.
pub fn export_block_weights(params: &DirectionalBlockParams, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&WeightFile::from_params(params))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn import_block_weights(path: &Path) -> Result<DirectionalBlockParams> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: WeightFile = serde_json::from_str(&text)?;
    file.to_params()
}
