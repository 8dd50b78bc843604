use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use log::warn;
use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::dataset::{read_gps_sidecar, read_obb_labels, GpsFix};
use crate::error::{Error, Result};
use crate::evalkit::{severity_table, SeverityLevel, SeverityTable};
use crate::exec::Exec;
use crate::imaging::load_raster;
use crate::obbgeom::OrientedBox;
use crate::vegmetric::{analyze_image, VegReport};

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

/// One line of the reports stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub image: String,
    #[serde(default)]
    pub gps: Option<GpsFix>,
    #[serde(flatten)]
    pub report: VegReport,
}

/// One line of the alerts stream, written only for alerting images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlertRecord {
    pub image: String,
    pub gps: Option<GpsFix>,
    pub metric: f64,
    pub threshold: f64,
    pub severity: Option<SeverityLevel>,
    pub worst_obb: OrientedBox,
    /// Image modification time, RFC 3339 UTC.
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub images_found: usize,
    pub images_analyzed: usize,
    pub images_skipped: usize,
    pub alerts: usize,
    pub warnings: usize,
    pub severity_cuts: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub records: Vec<ImageRecord>,
    pub alerts: Vec<AlertRecord>,
    pub summary: RunSummary,
}

/// PNG/JPEG files directly inside `dir`, sorted by file name.
pub fn discover_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()));
        if is_image && path.is_file() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

enum Item {
    Done(Box<ImageRecord>, String),
    Skipped,
}

/// Analyzes each image in `images_dir` with boxes from
/// `labels_dir/<stem>.txt` (normalized to the image size). Images without
/// a label file are skipped with a warning.
pub fn run_pipeline(
    images_dir: &Path,
    labels_dir: &Path,
    cfg: &RunConfig,
    exec: Exec,
) -> Result<PipelineOutcome> {
    cfg.validate()?;
    if !labels_dir.is_dir() {
        return Err(Error::io(
            labels_dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "label directory not found"),
        ));
    }
    let images = discover_images(images_dir)?;
    let params = cfg.veg_params();

    let items: Vec<Result<Item>> = exec.map(&images, |path| {
        let stem = path.file_stem().unwrap_or_default().to_string_lossy();
        let label_path = labels_dir.join(format!("{stem}.txt"));
        if !label_path.is_file() {
            warn!("{}: no label file {}, skipped", path.display(), label_path.display());
            return Ok(Item::Skipped);
        }
        let img = load_raster(path)?;
        let boxes: Vec<OrientedBox> = read_obb_labels(&label_path, (img.width(), img.height()))?
            .into_iter()
            .map(|l| l.label.obb)
            .collect();
        let report = analyze_image(&img, &boxes, &params, None)?;
        let record = ImageRecord {
            image: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            gps: read_gps_sidecar(path)?,
            report,
        };
        Ok(Item::Done(Box::new(record), timestamp_of(path)?))
    });

    let mut records = Vec::new();
    let mut stamps = Vec::new();
    let mut skipped = 0;
    for item in items {
        match item? {
            Item::Done(r, t) => {
                records.push(*r);
                stamps.push(t);
            }
            Item::Skipped => skipped += 1,
        }
    }

    let table = severity_for(cfg, &records)?;
    let mut alerts = Vec::new();
    for (rec, stamp) in records.iter_mut().zip(stamps) {
        let Some(m) = rec.report.metric else { continue };
        rec.report.severity = table.map(|t| t.classify(m));
        if rec.report.alert {
            let worst = rec.report.worst_line.expect("metric implies a line");
            alerts.push(AlertRecord {
                image: rec.image.clone(),
                gps: rec.gps,
                metric: m,
                threshold: cfg.threshold,
                severity: rec.report.severity,
                worst_obb: rec.report.lines[worst].obb,
                timestamp: stamp,
            });
        }
    }

    let summary = RunSummary {
        images_found: images.len(),
        images_analyzed: records.len(),
        images_skipped: skipped,
        alerts: alerts.len(),
        warnings: skipped,
        severity_cuts: table.map(|t| t.cut_points),
    };
    Ok(PipelineOutcome {
        records,
        alerts,
        summary,
    })
}

fn severity_for(cfg: &RunConfig, records: &[ImageRecord]) -> Result<Option<SeverityTable>> {
    if let Some(c) = cfg.severity_cuts {
        return SeverityTable::new(c).map(Some);
    }
    let metrics: Vec<f64> = records.iter().filter_map(|r| r.report.metric).collect();
    if metrics.len() < 4 {
        return Ok(None);
    }
    let t = severity_table(&metrics)?;
    if t.degenerate {
        warn!("severity cut points coincide: {:?}", t.cut_points);
    }
    Ok(Some(t))
}

fn timestamp_of(path: &Path) -> Result<String> {
    let modified = fs::metadata(path)
        .and_then(|m| m.modified())
        .map_err(|e| Error::io(path, e))?;
    Ok(DateTime::<Utc>::from(modified).to_rfc3339_opts(SecondsFormat::Secs, true))
}

/// Writes the reports and alerts streams, the per-image CSV summary,
/// `run_summary.json` and the resolved `run_config.toml` into `out_dir`.
pub fn write_outputs(outcome: &PipelineOutcome, cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_jsonl(&out_dir.join(&cfg.reports_file), &outcome.records)?;
    write_jsonl(&out_dir.join(&cfg.alerts_file), &outcome.alerts)?;

    let csv_path = out_dir.join(&cfg.summary_file);
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| Error::malformed(&csv_path, e.to_string()))?;
    let mut row = |fields: [String; 7]| {
        w.write_record(fields)
            .map_err(|e| Error::malformed(&csv_path, e.to_string()))
    };
    row(["image", "lines", "metric", "alert", "severity", "lat", "lon"].map(String::from))?;
    for r in &outcome.records {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        row([
            r.image.clone(),
            r.report.lines.len().to_string(),
            opt(r.report.metric),
            r.report.alert.to_string(),
            r.report.severity.map(|s| s.to_string()).unwrap_or_default(),
            opt(r.gps.map(|g| g.lat)),
            opt(r.gps.map(|g| g.lon)),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let summary_path = out_dir.join("run_summary.json");
    let text = serde_json::to_string_pretty(&outcome.summary)? + "\n";
    fs::write(&summary_path, text).map_err(|e| Error::io(&summary_path, e))?;
    cfg.save(&out_dir.join("run_config.toml"))
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
