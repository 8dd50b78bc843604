use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalkit::SeverityTable;
use crate::vegmetric::VegParams;

/// Every tunable of a run. Serialized as flat TOML `key = value` pairs;
/// missing keys take their defaults and unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Gaussian window length `z` (odd).
    pub gaussian_size: usize,
    pub gaussian_sigma: f64,
    /// Centerline intervals `m`; `m + 1` samples per line.
    pub samples: usize,
    pub alpha: f64,
    /// Must be ≤ 0.
    pub beta: f64,
    /// Alert when the image metric is at or above this value.
    pub threshold: f64,
    pub canny_low: f64,
    pub canny_high: f64,
    /// Dilation of each line box for the TGDI region, pixels.
    pub tgdi_margin: f64,
    pub tile_size: usize,
    pub seed: u64,
    /// Fixed 50/75/90th percentile cut points. When absent they are
    /// estimated from the run's own metrics (at least 4 images).
    pub severity_cuts: Option<[f64; 3]>,
    pub images_dir: Option<PathBuf>,
    pub labels_dir: Option<PathBuf>,
    pub reports_file: String,
    pub alerts_file: String,
    pub summary_file: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VegParams::default();
        RunConfig {
            gaussian_size: v.gaussian_size,
            gaussian_sigma: v.gaussian_sigma,
            samples: v.samples,
            alpha: v.alpha,
            beta: v.beta,
            threshold: v.threshold,
            canny_low: v.canny_low,
            canny_high: v.canny_high,
            tgdi_margin: v.tgdi_margin,
            tile_size: 640,
            seed: 0,
            severity_cuts: None,
            images_dir: None,
            labels_dir: None,
            reports_file: "reports.jsonl".into(),
            alerts_file: "alerts.jsonl".into(),
            summary_file: "summary.csv".into(),
        }
    }
}

impl RunConfig {
    pub fn veg_params(&self) -> VegParams {
        VegParams {
            gaussian_size: self.gaussian_size,
            gaussian_sigma: self.gaussian_sigma,
            samples: self.samples,
            alpha: self.alpha,
            beta: self.beta,
            threshold: self.threshold,
            canny_low: self.canny_low,
            canny_high: self.canny_high,
            tgdi_margin: self.tgdi_margin,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.veg_params().validate()?;
        if self.tile_size == 0 {
            return Err(Error::InvalidArgument("tile_size must be positive".into()));
        }
        if let Some(c) = self.severity_cuts {
            SeverityTable::new(c)?;
        }
        for (key, name) in [
            ("reports_file", &self.reports_file),
            ("alerts_file", &self.alerts_file),
            ("summary_file", &self.summary_file),
        ] {
            let p = Path::new(name);
            if name.is_empty() || p.components().count() != 1 || p.is_absolute() {
                return Err(Error::InvalidArgument(format!(
                    "{key} must be a plain file name, got {name:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> std::result::Result<Self, String> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|reason| Error::malformed(path, reason))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml_string()).map_err(|e| Error::io(path, e))
    }
}
