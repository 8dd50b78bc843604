use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::obbgeom::{iou_matrix, OrientedBox};

/// IoU thresholds 0.50, 0.55, …, 0.95.
pub const AP_IOU_THRESHOLDS: [f64; 10] = [0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredBox {
    pub obb: OrientedBox,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApReport {
    /// `(iou_threshold, ap)` pairs in the order requested.
    pub per_threshold: Vec<(f64, f64)>,
    pub ap50: f64,
    pub ap50_95: f64,
}

/// Average precision per IoU threshold with greedy matching: predictions in
/// descending score order each claim the unmatched ground truth of their
/// image with the highest IoU at or above the threshold. AP is the area
/// under the all-points precision envelope.
pub fn detection_ap(
    preds: &[Vec<ScoredBox>],
    gts: &[Vec<OrientedBox>],
    iou_thresholds: &[f64],
    exec: Exec,
) -> Result<ApReport> {
    if preds.len() != gts.len() {
        return Err(Error::InvalidArgument(format!(
            "{} prediction lists but {} ground-truth lists",
            preds.len(),
            gts.len()
        )));
    }
    let n_gt: usize = gts.iter().map(Vec::len).sum();
    if n_gt == 0 {
        return Err(Error::InvalidArgument("AP undefined without ground truth".into()));
    }
    if preds.iter().flatten().any(|p| p.score.is_nan()) {
        return Err(Error::InvalidArgument("NaN prediction score".into()));
    }

    let ious: Vec<Vec<Vec<f64>>> = preds
        .iter()
        .zip(gts)
        .map(|(p, g)| {
            let pb: Vec<OrientedBox> = p.iter().map(|s| s.obb).collect();
            iou_matrix(&pb, g, exec)
        })
        .collect();

    let mut order: Vec<(usize, usize)> = preds
        .iter()
        .enumerate()
        .flat_map(|(i, p)| (0..p.len()).map(move |k| (i, k)))
        .collect();
    // stable: equal scores keep image/prediction order
    order.sort_by(|a, b| preds[b.0][b.1].score.total_cmp(&preds[a.0][a.1].score));

    let per_threshold: Vec<(f64, f64)> = iou_thresholds
        .iter()
        .map(|&t| (t, ap_at(&order, &ious, gts, n_gt, t)))
        .collect();
    let ap50 = ap_at(&order, &ious, gts, n_gt, 0.5);
    let ap50_95 = AP_IOU_THRESHOLDS
        .iter()
        .map(|&t| ap_at(&order, &ious, gts, n_gt, t))
        .sum::<f64>()
        / AP_IOU_THRESHOLDS.len() as f64;
    Ok(ApReport {
        per_threshold,
        ap50,
        ap50_95,
    })
}

fn ap_at(
    order: &[(usize, usize)],
    ious: &[Vec<Vec<f64>>],
    gts: &[Vec<OrientedBox>],
    n_gt: usize,
    t: f64,
) -> f64 {
    let mut taken: Vec<Vec<bool>> = gts.iter().map(|g| vec![false; g.len()]).collect();
    let mut recall = Vec::with_capacity(order.len());
    let mut precision = Vec::with_capacity(order.len());
    let mut tp = 0usize;
    for (rank, &(img, k)) in order.iter().enumerate() {
        let best = ious[img][k]
            .iter()
            .enumerate()
            .filter(|&(g, &iou)| !taken[img][g] && iou >= t)
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)));
        if let Some((g, _)) = best {
            taken[img][g] = true;
            tp += 1;
        }
        recall.push(tp as f64 / n_gt as f64);
        precision.push(tp as f64 / (rank + 1) as f64);
    }
    for k in (0..precision.len().saturating_sub(1)).rev() {
        precision[k] = precision[k].max(precision[k + 1]);
    }
    let mut ap = 0.0;
    let mut prev_r = 0.0;
    for (r, p) in recall.iter().zip(&precision) {
        ap += (r - prev_r) * p;
        prev_r = *r;
    }
    ap
}
