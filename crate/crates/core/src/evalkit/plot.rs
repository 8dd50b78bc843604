use std::fmt::Write as _;
use std::path::Path;

use super::BinaryEvalCurve;
use crate::error::{Error, Result};

/// `tau,precision,recall,f1,accuracy,tp,fp,tn,fn`, one row per threshold.
pub fn write_curve_csv(curve: &BinaryEvalCurve, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["tau", "precision", "recall", "f1", "accuracy", "tp", "fp", "tn", "fn"])
        .map_err(|e| csv_err(path, e))?;
    for p in &curve.points {
        let c = p.confusion;
        w.write_record([
            p.tau.to_string(),
            p.precision.to_string(),
            p.recall.to_string(),
            p.f1.to_string(),
            p.accuracy.to_string(),
            c.tp.to_string(),
            c.fp.to_string(),
            c.tn.to_string(),
            c.fn_.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `fpr,tpr` rows.
pub fn write_roc_csv(curve: &BinaryEvalCurve, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["fpr", "tpr"]).map_err(|e| csv_err(path, e))?;
    for (x, y) in &curve.roc_points {
        w.write_record([x.to_string(), y.to_string()])
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::malformed(path, e.to_string())
}

const PANEL: f64 = 320.0;
const PAD: f64 = 40.0;

/// Two panels: precision/recall/F1 against threshold, and the ROC curve.
pub fn curve_svg(curve: &BinaryEvalCurve) -> String {
    let width = 2.0 * PANEL + 3.0 * PAD;
    let height = PANEL + 2.0 * PAD;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    let taus = curve.thresholds();
    let (t0, t1) = match (taus.first(), taus.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        (Some(&a), _) => (a - 0.5, a + 0.5),
        _ => (0.0, 1.0),
    };
    let left = |x: f64, y: f64| (PAD + (x - t0) / (t1 - t0) * PANEL, PAD + (1.0 - y) * PANEL);
    axes(&mut s, PAD, "threshold", &format!("{t0:.3}"), &format!("{t1:.3}"));
    let series: [(&str, &str, fn(&super::OperatingPoint) -> f64); 3] = [
        ("precision", "#1f77b4", |p| p.precision),
        ("recall", "#d62728", |p| p.recall),
        ("F1", "#2ca02c", |p| p.f1),
    ];
    for (k, (name, color, f)) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = curve.points.iter().map(|p| left(p.tau, f(p))).collect();
        polyline(&mut s, &pts, color);
        writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            PAD + 8.0,
            PAD + 14.0 * (k as f64 + 1.0)
        )
        .unwrap();
    }

    let x0 = 2.0 * PAD + PANEL;
    let right = |x: f64, y: f64| (x0 + x * PANEL, PAD + (1.0 - y) * PANEL);
    axes(&mut s, x0, "false positive rate", "0", "1");
    polyline(&mut s, &[right(0.0, 0.0), right(1.0, 1.0)], "#bbbbbb");
    let roc: Vec<(f64, f64)> = curve.roc_points.iter().map(|&(x, y)| right(x, y)).collect();
    polyline(&mut s, &roc, "#ff7f0e");
    let label = match curve.auc {
        Some(a) => format!("AUC = {a:.4}"),
        None => "ROC undefined (single class)".to_string(),
    };
    writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, x0 + 8.0, PAD + 14.0).unwrap();
    s.push_str("</svg>\n");
    s
}

fn axes(s: &mut String, x0: f64, xlabel: &str, lo: &str, hi: &str) {
    let (y0, y1) = (PAD, PAD + PANEL);
    writeln!(
        s,
        r#"<rect x="{x0}" y="{y0}" width="{PANEL}" height="{PANEL}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(s, r#"<text x="{x0}" y="{}">{lo}</text>"#, y1 + 14.0).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{hi}</text>"#, x0 + PANEL, y1 + 14.0).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#,
        x0 + PANEL / 2.0,
        y1 + 28.0
    )
    .unwrap();
}

fn polyline(s: &mut String, pts: &[(f64, f64)], color: &str) {
    if pts.is_empty() {
        return;
    }
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
        coords.join(" ")
    )
    .unwrap();
}
