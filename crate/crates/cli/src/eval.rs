use std::fs;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use linewatch::dataset::read_obb_labels;
use linewatch::evalkit::{
    curve_svg, detection_ap, optimal_threshold, roc_auc, severity_table, sweep, uniform_grid,
    write_curve_csv, write_roc_csv, ScoredBox, SeverityLevel, AP_IOU_THRESHOLDS,
};
use linewatch::obbgeom::OrientedBox;
use linewatch::Exec;
use serde_json::json;

use crate::common::{
    create_dir, data_err, io_err, parse_f64, read_column, read_scores_labels, usage, write_json,
    CliResult, Globals, EXIT_OK,
};

#[derive(Subcommand)]
pub enum EvalCmd {
    /// Precision/recall/F1 over a threshold grid, optimal threshold, ROC.
    Sweep {
        /// CSV with a `score` column (and optionally `id`, `label`).
        #[arg(long)]
        scores: PathBuf,
        /// CSV with a `label` column (and optionally `id`).
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Number of evenly spaced thresholds.
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        #[arg(long, default_value_t = 1.0)]
        max: f64,
    },
    /// ROC curve and AUC.
    Roc {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// 50/75/90th percentile severity cut points.
    Severity {
        /// CSV with a `metric` column, or a reports .jsonl file.
        #[arg(long)]
        metrics: PathBuf,
    },
    /// Oriented-box AP50 and AP50–95 from label directories.
    Ap {
        /// Prediction label files (10 columns, last is the score).
        #[arg(long)]
        pred: PathBuf,
        /// Ground-truth label files.
        #[arg(long)]
        gt: PathBuf,
        /// Frame width,height used to de-normalize (defaults to the config tile size).
        #[arg(long, value_name = "W,H")]
        frame: Option<String>,
    },
}

pub fn run(cmd: EvalCmd, g: &Globals, exec: Exec) -> CliResult<u8> {
    let cfg = g.run_config()?;
    let out = g.out_or("eval");
    match cmd {
        EvalCmd::Sweep { scores, labels, steps, min, max } => {
            if steps == 0 || !(min.is_finite() && max.is_finite() && max >= min) {
                return usage("need --steps >= 1 and finite --min <= --max");
            }
            let (s, l) = read_scores_labels(&scores, labels.as_deref())?;
            let curve = sweep(&s, &l, &uniform_grid(min, max, steps))?;
            create_dir(&out)?;
            write_curve_csv(&curve, &out.join("sweep.csv"))?;
            write_roc_csv(&curve, &out.join("roc.csv"))?;
            let svg = out.join("curves.svg");
            fs::write(&svg, curve_svg(&curve)).map_err(|e| io_err(&svg, e))?;
            let best = optimal_threshold(&curve);
            write_json(
                &out.join("sweep_summary.json"),
                &json!({ "samples": s.len(), "optimal": best, "auc": curve.auc }),
            )?;
            cfg.save(&out.join("run_config.toml"))?;
            if let Some(b) = best {
                println!(
                    "optimal tau {:.4}: precision {:.4} recall {:.4} F1 {:.4} accuracy {:.4}",
                    b.tau, b.precision, b.recall, b.f1, b.accuracy
                );
            }
            match curve.auc {
                Some(a) => println!("AUC {a:.4}"),
                None => println!("AUC undefined (single class)"),
            }
        }
        EvalCmd::Roc { scores, labels } => {
            let (s, l) = read_scores_labels(&scores, labels.as_deref())?;
            let (points, auc) = roc_auc(&s, &l)?;
            create_dir(&out)?;
            let path = out.join("roc.csv");
            let mut w = csv::Writer::from_path(&path).map_err(data_err)?;
            w.write_record(["fpr", "tpr"]).map_err(data_err)?;
            for (x, y) in &points {
                w.write_record([x.to_string(), y.to_string()]).map_err(data_err)?;
            }
            w.flush().map_err(|e| io_err(&path, e))?;
            write_json(&out.join("auc.json"), &json!({ "auc": auc, "samples": s.len() }))?;
            println!("AUC {auc:.4}");
        }
        EvalCmd::Severity { metrics } => {
            let values = read_metrics(&metrics)?;
            let table = severity_table(&values)?;
            let mut counts = [0usize; 4];
            for v in &values {
                counts[table.classify(*v) as usize] += 1;
            }
            let levels = [SeverityLevel::Low, SeverityLevel::Moderate, SeverityLevel::Severe, SeverityLevel::Critical];
            let count_map: serde_json::Map<String, serde_json::Value> = levels
                .iter()
                .zip(counts)
                .map(|(l, c)| (l.to_string(), json!(c)))
                .collect();
            create_dir(&out)?;
            write_json(
                &out.join("severity.json"),
                &json!({ "table": table, "counts": count_map, "samples": values.len() }),
            )?;
            let [a, b, c] = table.cut_points;
            println!("cuts p50 {a:.4} p75 {b:.4} p90 {c:.4}{}", if table.degenerate { " (degenerate)" } else { "" });
        }
        EvalCmd::Ap { pred, gt, frame } => {
            let dims = match frame {
                Some(f) => parse_frame(&f)?,
                None => (cfg.tile_size, cfg.tile_size),
            };
            let (preds, gts) = load_detections(&pred, &gt, dims)?;
            let report = detection_ap(&preds, &gts, &AP_IOU_THRESHOLDS, exec)?;
            create_dir(&out)?;
            write_json(&out.join("ap.json"), &report)?;
            println!("AP50 {:.4}  AP50-95 {:.4}", report.ap50, report.ap50_95);
        }
    }
    Ok(EXIT_OK)
}

fn read_metrics(path: &Path) -> CliResult<Vec<f64>> {
    if path.extension().is_some_and(|e| e == "jsonl") {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let mut out = Vec::new();
        for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let v: serde_json::Value = serde_json::from_str(line)
                .map_err(|e| data_err(format!("{}:{}: {e}", path.display(), k + 1)))?;
            if let Some(m) = v.get("metric").and_then(serde_json::Value::as_f64) {
                out.push(m);
            }
        }
        Ok(out)
    } else {
        let col = read_column(path, &["metric", "m", "score"])?;
        col.values.iter().map(|v| parse_f64(path, v)).collect()
    }
}

fn parse_frame(s: &str) -> CliResult<(usize, usize)> {
    let parts: Vec<&str> = s.split([',', 'x']).collect();
    match parts.as_slice() {
        [w, h] => match (w.trim().parse::<usize>(), h.trim().parse::<usize>()) {
            (Ok(w), Ok(h)) if w > 0 && h > 0 => Ok((w, h)),
            _ => usage(format!("--frame expects W,H, got {s:?}")),
        },
        _ => usage(format!("--frame expects W,H, got {s:?}")),
    }
}

type Detections = (Vec<Vec<ScoredBox>>, Vec<Vec<OrientedBox>>);

/// Pairs `<stem>.txt` files by name; a ground-truth file without
/// predictions contributes only misses.
fn load_detections(pred_dir: &Path, gt_dir: &Path, dims: (usize, usize)) -> CliResult<Detections> {
    let mut names: Vec<PathBuf> = fs::read_dir(gt_dir)
        .map_err(|e| io_err(gt_dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    names.sort();
    if !pred_dir.is_dir() {
        return Err(data_err(format!("{}: not a directory", pred_dir.display())));
    }
    let (mut preds, mut gts) = (Vec::new(), Vec::new());
    for gt_path in names {
        let gt: Vec<OrientedBox> = read_obb_labels(&gt_path, dims)?.into_iter().map(|l| l.label.obb).collect();
        let pred_path = pred_dir.join(gt_path.file_name().expect("file"));
        let p = if pred_path.is_file() {
            read_obb_labels(&pred_path, dims)?
                .into_iter()
                .map(|l| {
                    l.score
                        .map(|score| ScoredBox { obb: l.label.obb, score })
                        .ok_or_else(|| data_err(format!("{}: prediction without score", pred_path.display())))
                })
                .collect::<CliResult<Vec<_>>>()?
        } else {
            Vec::new()
        };
        preds.push(p);
        gts.push(gt);
    }
    Ok((preds, gts))
}
