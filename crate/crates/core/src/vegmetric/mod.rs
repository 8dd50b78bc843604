//! Vegetation-encroachment metric around detected line boxes.
//!
//! Per line: a Gaussian-weighted greenness profile sampled perpendicular to
//! the box centerline gives GI = max + mean; edge density and brightness in
//! a dilated band give TGDI = log₁₀(T)·B; the two combine into
//! M = α·GI + β·TGDI with β ≤ 0.

mod gaussian;
mod profile;
mod tgdi;

pub use gaussian::GaussianKernel1D;
pub use profile::{
    bilinear_sample, greenness_index, grvi, perpendicular_profile, sample_centerline, LineProfile,
};
pub use tgdi::{tgdi, tgdi_from_maps, TgdiStats, EDGE_FRACTION_FLOOR};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalkit::{SeverityLevel, SeverityTable};
use crate::imaging::{canny_edges, to_grayscale, RasterImage};
use crate::obbgeom::OrientedBox;

/// Free parameters of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VegParams {
    pub gaussian_size: usize,
    pub gaussian_sigma: f64,
    pub samples: usize,
    pub alpha: f64,
    pub beta: f64,
    pub threshold: f64,
    pub canny_low: f64,
    pub canny_high: f64,
    pub tgdi_margin: f64,
}

impl Default for VegParams {
    fn default() -> Self {
        VegParams {
            gaussian_size: 41,
            gaussian_sigma: 10.0,
            samples: 100,
            alpha: 0.5,
            beta: -0.05,
            threshold: 0.81,
            canny_low: 50.0,
            canny_high: 150.0,
            tgdi_margin: 32.0,
        }
    }
}

impl VegParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.gaussian_size % 2 == 0 {
            return Err(Error::EvenKernel(self.gaussian_size));
        }
        if !(self.gaussian_sigma > 0.0) {
            return bad(format!("gaussian sigma must be > 0, got {}", self.gaussian_sigma));
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bad(format!("alpha must be finite and >= 0, got {}", self.alpha));
        }
        if !(self.beta.is_finite() && self.beta <= 0.0) {
            return bad(format!("beta must be finite and <= 0, got {}", self.beta));
        }
        if !self.threshold.is_finite() {
            return bad("threshold must be finite".into());
        }
        if !(self.canny_low >= 0.0 && self.canny_low <= self.canny_high && self.canny_high.is_finite()) {
            return bad(format!(
                "canny thresholds need 0 <= low <= high, got {} / {}",
                self.canny_low, self.canny_high
            ));
        }
        if !(self.tgdi_margin.is_finite() && self.tgdi_margin >= 0.0) {
            return bad(format!("tgdi margin must be >= 0, got {}", self.tgdi_margin));
        }
        Ok(())
    }

    pub fn kernel(&self) -> Result<GaussianKernel1D> {
        GaussianKernel1D::new(self.gaussian_size, self.gaussian_sigma)
    }
}

/// `M = α·GI + β·TGDI`; positive β is rejected.
pub fn encroachment_metric(gi: f64, tgdi: f64, alpha: f64, beta: f64) -> Result<f64> {
    if beta > 0.0 {
        return Err(Error::InvalidArgument(format!(
            "beta must be <= 0 so tree-like texture raises the metric, got {beta}"
        )));
    }
    Ok(alpha * gi + beta * tgdi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineReport {
    pub obb: OrientedBox,
    pub gi: f64,
    pub tgdi: f64,
    pub edge_fraction: f64,
    pub brightness: f64,
    pub region_pixels: usize,
    pub metric: f64,
    pub profile: Vec<f64>,
    pub off_image_samples: usize,
}

/// Per-image result. `metric` is the maximum over lines and is `None`
/// without detections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VegReport {
    pub width: usize,
    pub height: usize,
    pub lines: Vec<LineReport>,
    pub metric: Option<f64>,
    pub worst_line: Option<usize>,
    pub alert: bool,
    pub severity: Option<SeverityLevel>,
}

/// Scores every detection in `img` and aggregates to the worst line.
pub fn analyze_image(
    img: &RasterImage,
    detections: &[OrientedBox],
    params: &VegParams,
    severity: Option<&SeverityTable>,
) -> Result<VegReport> {
    params.validate()?;
    let mut report = VegReport {
        width: img.width(),
        height: img.height(),
        lines: Vec::with_capacity(detections.len()),
        metric: None,
        worst_line: None,
        alert: false,
        severity: None,
    };
    if detections.is_empty() {
        return Ok(report);
    }
    let kernel = params.kernel()?;
    let green = grvi(img)?;
    let gray = to_grayscale(img);
    let (edges, _) = canny_edges(&gray, params.canny_low, params.canny_high)?;

    for obb in detections {
        let prof = perpendicular_profile(&green, obb, &kernel, params.samples);
        if prof.off_image > 0 {
            warn!("{} of {} profile samples fell outside the image", prof.off_image, prof.samples.len());
        }
        let gi = greenness_index(&prof);
        let t = tgdi_from_maps(&gray, &edges, &obb.expanded(params.tgdi_margin));
        let metric = encroachment_metric(gi, t.value, params.alpha, params.beta)?;
        report.lines.push(LineReport {
            obb: *obb,
            gi,
            tgdi: t.value,
            edge_fraction: t.edge_fraction,
            brightness: t.brightness,
            region_pixels: t.pixels,
            metric,
            profile: prof.samples,
            off_image_samples: prof.off_image,
        });
    }

    let (worst, m) = report
        .lines
        .iter()
        .enumerate()
        .map(|(k, l)| (k, l.metric))
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("at least one line");
    report.metric = Some(m);
    report.worst_line = Some(worst);
    report.alert = m >= params.threshold;
    report.severity = severity.map(|t| t.classify(m));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth as fixtures;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn metric_cases() {
        assert_eq!(encroachment_metric(1.3, -2.0, 1.0, 0.0).unwrap(), 1.3);
        assert_abs_diff_eq!(encroachment_metric(1.2, -2.0, 0.5, -0.05).unwrap(), 0.7, epsilon = 1e-15);
        assert!(encroachment_metric(1.0, -1.0, 0.5, 0.01).is_err());
    }

    proptest! {
        #[test]
        fn metric_monotone(gi in -2.0f64..2.0, t in -4.0f64..0.0, d in 0.0f64..1.0) {
            let p = VegParams::default();
            let m = encroachment_metric(gi, t, p.alpha, p.beta).unwrap();
            prop_assert!(encroachment_metric(gi + d, t, p.alpha, p.beta).unwrap() >= m);
            prop_assert!(encroachment_metric(gi, t - d, p.alpha, p.beta).unwrap() >= m);
        }
    }

    #[test]
    fn params_validation() {
        assert!(VegParams::default().validate().is_ok());
        assert!(VegParams { gaussian_size: 40, ..Default::default() }.validate().is_err());
        assert!(VegParams { beta: 0.1, ..Default::default() }.validate().is_err());
        assert!(VegParams { gaussian_sigma: 0.0, ..Default::default() }.validate().is_err());
        assert!(VegParams { samples: 0, ..Default::default() }.validate().is_err());
        assert!(VegParams { canny_low: 200.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn zero_detections_no_alert() {
        let img = RasterImage::filled(32, 32, &[0, 255, 0]).unwrap();
        let r = analyze_image(&img, &[], &VegParams::default(), None).unwrap();
        assert_eq!(r.metric, None);
        assert!(!r.alert);
    }

    #[test]
    fn alert_at_exact_threshold() {
        let img = RasterImage::filled(64, 64, &[0, 200, 0]).unwrap();
        let b = OrientedBox::new(32.0, 32.0, 30.0, 4.0, 0.0);
        let probe = analyze_image(&img, &[b], &VegParams::default(), None).unwrap();
        let m = probe.metric.unwrap();
        let p = VegParams { threshold: m, ..Default::default() };
        assert!(analyze_image(&img, &[b], &p, None).unwrap().alert);
        let p = VegParams { threshold: m + 1e-12, ..Default::default() };
        assert!(!analyze_image(&img, &[b], &p, None).unwrap().alert);
    }

    #[test]
    fn image_metric_is_max_over_lines() {
        let f = fixtures::paired(7, true);
        let far = OrientedBox::new(20.0, 20.0, 20.0, 3.0, 0.0);
        let r = analyze_image(&f.image, &[far, f.line], &VegParams::default(), None).unwrap();
        let best = r.lines.iter().map(|l| l.metric).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(r.metric, Some(best));
        assert_eq!(r.worst_line, Some(1));
    }

    #[test]
    fn severity_attached() {
        let img = RasterImage::filled(64, 64, &[0, 200, 0]).unwrap();
        let b = OrientedBox::new(32.0, 32.0, 30.0, 4.0, 0.0);
        let t = SeverityTable::new([0.1, 0.2, 0.3]).unwrap();
        let r = analyze_image(&img, &[b], &VegParams::default(), Some(&t)).unwrap();
        assert_eq!(r.severity, Some(SeverityLevel::Critical));
    }

    #[test]
    fn encroached_beats_control() {
        for seed in 0..20 {
            let enc = fixtures::paired(seed, true);
            let ctl = fixtures::paired(seed, false);
            let p = VegParams::default();
            let me = analyze_image(&enc.image, &[enc.line], &p, None).unwrap().metric.unwrap();
            let mc = analyze_image(&ctl.image, &[ctl.line], &p, None).unwrap().metric.unwrap();
            assert!(me > mc, "seed {seed}: {me} <= {mc}");
        }
    }

    #[test]
    fn dense_canopy_in_observed_range() {
        for seed in 0..10 {
            let f = fixtures::dense_canopy(seed);
            let r = analyze_image(&f.image, &[f.line], &VegParams::default(), None).unwrap();
            let m = r.metric.unwrap();
            assert!((0.79..=0.89).contains(&m), "seed {seed}: M = {m}");
        }
    }

    #[test]
    fn deterministic_report() {
        let f = fixtures::paired(3, true);
        let a = analyze_image(&f.image, &[f.line], &VegParams::default(), None).unwrap();
        let b = analyze_image(&f.image, &[f.line], &VegParams::default(), None).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
