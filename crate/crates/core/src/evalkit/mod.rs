//! Evaluation: threshold sweeps, ROC/AUC, percentile severity levels and
//! rotated-box detection AP.

mod ap;
mod binary;
mod plot;
mod severity;

pub use ap::{detection_ap, ApReport, ScoredBox, AP_IOU_THRESHOLDS};
pub use binary::{
    confusion_at, optimal_threshold, roc_auc, sweep, uniform_grid, BinaryEvalCurve, Confusion,
    OperatingPoint,
};
pub use plot::{curve_svg, write_curve_csv, write_roc_csv};
pub use severity::{percentile, severity_table, SeverityLevel, SeverityTable};
