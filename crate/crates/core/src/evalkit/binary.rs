use std::cmp::Ordering;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.tp + self.fp + self.tn + self.fn_)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn check_lengths(scores: &[f64], labels: &[bool]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    Ok(())
}

/// Counts with "predicted positive ⇔ score ≥ τ".
pub fn confusion_at(scores: &[f64], labels: &[bool], tau: f64) -> Result<Confusion> {
    check_lengths(scores, labels)?;
    let mut c = Confusion::default();
    for (&s, &y) in scores.iter().zip(labels) {
        match (s >= tau, y) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Metrics at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub tau: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub confusion: Confusion,
}

/// Sweep over an ascending threshold grid plus the ROC curve. `roc_points`
/// is empty and `auc` is `None` when only one class is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryEvalCurve {
    pub points: Vec<OperatingPoint>,
    pub roc_points: Vec<(f64, f64)>,
    pub auc: Option<f64>,
}

impl BinaryEvalCurve {
    pub fn thresholds(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.tau).collect()
    }

    pub fn single_class(&self) -> bool {
        self.auc.is_none()
    }
}

/// `n` evenly spaced thresholds over `[lo, hi]`, both ends included.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn sweep(scores: &[f64], labels: &[bool], grid: &[f64]) -> Result<BinaryEvalCurve> {
    check_lengths(scores, labels)?;
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty threshold grid".into()));
    }
    if grid.iter().any(|t| t.is_nan()) {
        return Err(Error::InvalidArgument("NaN threshold in grid".into()));
    }
    let mut taus = grid.to_vec();
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let points = taus
        .iter()
        .map(|&tau| {
            let c = confusion_at(scores, labels, tau)?;
            Ok(OperatingPoint {
                tau,
                precision: c.precision(),
                recall: c.recall(),
                f1: c.f1(),
                accuracy: c.accuracy(),
                confusion: c,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (roc_points, auc) = match roc_auc(scores, labels) {
        Ok((pts, auc)) => (pts, Some(auc)),
        Err(Error::SingleClass(which)) => {
            warn!("labels contain only {which} samples; ROC undefined");
            (Vec::new(), None)
        }
        Err(e) => return Err(e),
    };
    Ok(BinaryEvalCurve {
        points,
        roc_points,
        auc,
    })
}

/// Highest-F1 point; ties go to the larger threshold.
pub fn optimal_threshold(curve: &BinaryEvalCurve) -> Option<OperatingPoint> {
    curve.points.iter().copied().reduce(|best, p| {
        match p.f1.total_cmp(&best.f1) {
            Ordering::Greater => p,
            Ordering::Equal if p.tau > best.tau => p,
            _ => best,
        }
    })
}

/// ROC points from (0,0) to (1,1), one per distinct score, and the
/// trapezoidal area. Tied scores form a single diagonal step, so the area
/// equals `P(s⁺ > s⁻) + ½·P(s⁺ = s⁻)`.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<(Vec<(f64, f64)>, f64)> {
    check_lengths(scores, labels)?;
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidArgument("NaN score".into()));
    }
    let pos = labels.iter().filter(|&&y| y).count();
    let neg = labels.len() - pos;
    if pos == 0 {
        return Err(Error::SingleClass("negative"));
    }
    if neg == 0 {
        return Err(Error::SingleClass("positive"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut k = 0;
    while k < order.len() {
        let s = scores[order[k]];
        let (tp0, fp0) = (tp, fp);
        while k < order.len() && scores[order[k]] == s {
            if labels[order[k]] {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        // trapezoid in count units, normalized once at the end
        auc += (fp - fp0) as f64 * (tp + tp0) as f64 / 2.0;
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    Ok((points, auc / (pos as f64 * neg as f64)))
}
