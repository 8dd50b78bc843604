use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use linewatch::pipeline::{run_pipeline, write_outputs, AlertRecord, PipelineOutcome, RunConfig};
use linewatch::Exec;
use log::{info, warn};

use crate::common::{usage, CliResult, Globals, EXIT_ALERTS, EXIT_OK};

#[derive(Args)]
pub struct Inputs {
    /// Directory of PNG/JPEG images (defaults to the config's images_dir).
    #[arg(long)]
    images: Option<PathBuf>,
    /// Directory of `<stem>.txt` OBB label or prediction files.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Alarm threshold on the image metric (overrides the config).
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
pub enum VegmetricCmd {
    /// Per-image reports and CSV summary; alerts are flagged, not emitted.
    Analyze(Inputs),
}

#[derive(Subcommand)]
pub enum PipelineCmd {
    /// Analyze, write reports and emit JSON-lines alerts (exit 2 on alerts).
    Run {
        #[command(flatten)]
        inputs: Inputs,
        /// POST every alert record as JSON to this http:// endpoint.
        #[arg(long, value_name = "URL")]
        post: Option<String>,
    },
}

fn resolve(inputs: Inputs, g: &Globals) -> CliResult<(RunConfig, PathBuf, PathBuf)> {
    let mut cfg = g.run_config()?;
    if let Some(t) = inputs.threshold {
        if !t.is_finite() {
            return usage("--threshold must be finite");
        }
        cfg.threshold = t;
    }
    if inputs.images.is_some() {
        cfg.images_dir = inputs.images;
    }
    if inputs.labels.is_some() {
        cfg.labels_dir = inputs.labels;
    }
    let (Some(images), Some(labels)) = (cfg.images_dir.clone(), cfg.labels_dir.clone()) else {
        return usage("--images and --labels are required (or images_dir/labels_dir in --config)");
    };
    Ok((cfg, images, labels))
}

fn analyze(cfg: &RunConfig, images: &Path, labels: &Path, out: &Path, exec: Exec) -> CliResult<PipelineOutcome> {
    let outcome = run_pipeline(images, labels, cfg, exec)?;
    write_outputs(&outcome, cfg, out)?;
    let s = &outcome.summary;
    println!(
        "{} images analyzed, {} skipped, {} alerts, {} warnings -> {}",
        s.images_analyzed,
        s.images_skipped,
        s.alerts,
        s.warnings,
        out.display()
    );
    Ok(outcome)
}

pub fn run_vegmetric(cmd: VegmetricCmd, g: &Globals, exec: Exec) -> CliResult<u8> {
    let VegmetricCmd::Analyze(inputs) = cmd;
    let (cfg, images, labels) = resolve(inputs, g)?;
    analyze(&cfg, &images, &labels, &g.out_or("vegmetric"), exec)?;
    Ok(EXIT_OK)
}

pub fn run_pipeline_cmd(cmd: PipelineCmd, g: &Globals, exec: Exec) -> CliResult<u8> {
    let PipelineCmd::Run { inputs, post } = cmd;
    if let Some(url) = &post {
        if !url.starts_with("http://") {
            return usage(format!("--post supports http:// endpoints only, got {url:?}"));
        }
    }
    let (cfg, images, labels) = resolve(inputs, g)?;
    let outcome = analyze(&cfg, &images, &labels, &g.out_or("pipeline"), exec)?;
    if let Some(url) = &post {
        post_alerts(url, &outcome.alerts);
    }
    Ok(if outcome.alerts.is_empty() { EXIT_OK } else { EXIT_ALERTS })
}

/// Delivery failures are logged; the local alerts file stays authoritative.
fn post_alerts(url: &str, alerts: &[AlertRecord]) {
    let agent = ureq::AgentBuilder::new()
        .timeout(std::time::Duration::from_secs(10))
        .build();
    for a in alerts {
        let body = serde_json::to_string(a).expect("alert serializes");
        match agent
            .post(url)
            .set("Content-Type", "application/json")
            .send_string(&body)
        {
            Ok(r) => info!("posted alert for {} ({})", a.image, r.status()),
            Err(e) => warn!("posting alert for {} failed: {e}", a.image),
        }
    }
}
