use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeverityLevel {
    Low,
    Moderate,
    Severe,
    Critical,
}

impl fmt::Display for SeverityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeverityLevel::Low => "low",
            SeverityLevel::Moderate => "moderate",
            SeverityLevel::Severe => "severe",
            SeverityLevel::Critical => "critical",
        })
    }
}

/// Metric values at the 50th, 75th and 90th percentiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeverityTable {
    pub cut_points: [f64; 3],
    /// Set when two cut points coincide (e.g. constant data).
    pub degenerate: bool,
}

impl SeverityTable {
    pub fn new(cut_points: [f64; 3]) -> Result<Self> {
        if cut_points.iter().any(|c| !c.is_finite()) || !(cut_points[0] <= cut_points[1] && cut_points[1] <= cut_points[2]) {
            return Err(Error::InvalidArgument(format!(
                "severity cut points must be finite and ascending, got {cut_points:?}"
            )));
        }
        Ok(SeverityTable {
            cut_points,
            degenerate: !(cut_points[0] < cut_points[1] && cut_points[1] < cut_points[2]),
        })
    }

    /// `[−∞, p50)` Low, `[p50, p75)` Moderate, `[p75, p90)` Severe, `[p90, ∞]` Critical.
    pub fn classify(&self, metric: f64) -> SeverityLevel {
        let [p50, p75, p90] = self.cut_points;
        if metric >= p90 {
            SeverityLevel::Critical
        } else if metric >= p75 {
            SeverityLevel::Severe
        } else if metric >= p50 {
            SeverityLevel::Moderate
        } else {
            SeverityLevel::Low
        }
    }
}

/// Linear interpolation between order statistics at rank `(n−1)·p`.
/// `sorted` must be ascending and nonempty.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

pub fn severity_table(metrics: &[f64]) -> Result<SeverityTable> {
    if metrics.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "severity table needs at least 4 values, got {}",
            metrics.len()
        )));
    }
    if metrics.iter().any(|m| !m.is_finite()) {
        return Err(Error::InvalidArgument("non-finite metric value".into()));
    }
    let mut sorted = metrics.to_vec();
    sorted.sort_by(f64::total_cmp);
    SeverityTable::new([0.5, 0.75, 0.9].map(|p| percentile(&sorted, p)))
}
