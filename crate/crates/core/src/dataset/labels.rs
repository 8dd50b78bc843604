use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use log::warn;

use super::{polygon_to_obb, TileLabel};
use crate::error::{Error, Result};
use crate::obbgeom::{obb_to_corners, Point, Polygon};

/// One parsed label line; `score` is present on detector output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelLine {
    pub label: TileLabel,
    pub score: Option<f64>,
}

/// Writes `class x1 y1 x2 y2 x3 y3 x4 y4` per box with x divided by the
/// frame width and y by its height (`dims = (width, height)`). Values
/// outside `[0, 1]` are clamped with a warning.
pub fn write_obb_labels(labels: &[TileLabel], dims: (usize, usize), path: &Path) -> Result<()> {
    let lines: Vec<LabelLine> = labels.iter().map(|&label| LabelLine { label, score: None }).collect();
    write_label_lines(&lines, dims, path)
}

/// Like [`write_obb_labels`] with an optional trailing score column.
pub fn write_label_lines(lines: &[LabelLine], dims: (usize, usize), path: &Path) -> Result<()> {
    let (sx, sy) = check_dims(dims)?;
    let mut text = String::new();
    for line in lines {
        write!(text, "{}", line.label.class_id).unwrap();
        for v in obb_to_corners(&line.label.obb).vertices {
            for c in [v.x / sx, v.y / sy] {
                write!(text, " {}", clamp_unit(c, path)).unwrap();
            }
        }
        if let Some(score) = line.score {
            write!(text, " {score}").unwrap();
        }
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn check_dims((w, h): (usize, usize)) -> Result<(f64, f64)> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument(format!("label frame must be non-empty, got {w}x{h}")));
    }
    Ok((w as f64, h as f64))
}

fn clamp_unit(v: f64, path: &Path) -> f64 {
    if (0.0..=1.0).contains(&v) {
        return v;
    }
    // corners land a few ulps outside after rotation; only report real excursions
    if !(-1e-9..=1.0 + 1e-9).contains(&v) {
        warn!("{}: normalized coordinate {v} clamped", path.display());
    }
    v.clamp(0.0, 1.0)
}

/// Reads a label file written by [`write_obb_labels`] (or a detector using
/// the same layout), returning boxes in pixels of a `dims = (width, height)`
/// frame.
pub fn read_obb_labels(path: &Path, dims: (usize, usize)) -> Result<Vec<LabelLine>> {
    let (sx, sy) = check_dims(dims)?;
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 9 && fields.len() != 10 {
            return Err(Error::malformed(
                path,
                format!("line {}: expected 9 or 10 fields, found {}", k + 1, fields.len()),
            ));
        }
        let class_id: u32 = fields[0]
            .parse()
            .map_err(|_| Error::malformed(path, format!("line {}: bad class id", k + 1)))?;
        let nums: Vec<f64> = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::malformed(path, format!("line {}: bad number", k + 1)))?;
        let corners: Vec<Point> = nums[..8]
            .chunks_exact(2)
            .map(|c| Point::new(clamp_unit(c[0], path) * sx, clamp_unit(c[1], path) * sy))
            .collect();
        let obb = polygon_to_obb(&Polygon::new(corners))?;
        out.push(LabelLine {
            label: TileLabel { class_id, obb },
            score: nums.get(8).copied(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obbgeom::OrientedBox;
    use approx::assert_abs_diff_eq;

    fn lbl(obb: OrientedBox) -> TileLabel {
        TileLabel { class_id: 0, obb }
    }

    #[test]
    fn center_box_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.txt");
        let b = OrientedBox::new(320.0, 320.0, 100.0, 4.0, 0.0);
        write_obb_labels(&[lbl(b)], (640, 640), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let fields: Vec<f64> = text.split_whitespace().skip(1).map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 8);
        let mut xs: Vec<f64> = fields.iter().step_by(2).copied().collect();
        xs.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(xs[0], 270.0 / 640.0, epsilon = 1e-12);
        assert_abs_diff_eq!(xs[3], 370.0 / 640.0, epsilon = 1e-12);

        let back = read_obb_labels(&path, (640, 640)).unwrap();
        assert_eq!(back.len(), 1);
        let o = back[0].label.obb;
        for (a, b) in [(o.cx(), b.cx()), (o.cy(), b.cy()), (o.w(), b.w()), (o.h(), b.h())] {
            assert!(((a - b) / 640.0).abs() < 1e-6);
        }
        assert_abs_diff_eq!(o.theta(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn rotated_boxes_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.txt");
        let boxes = [
            OrientedBox::new(100.0, 200.0, 80.0, 6.0, 0.3),
            OrientedBox::new(400.0, 50.0, 60.0, 3.0, -1.1),
            OrientedBox::new(320.0, 320.0, 300.0, 10.0, 1.2),
        ];
        let labels: Vec<TileLabel> = boxes.iter().copied().map(lbl).collect();
        write_obb_labels(&labels, (640, 640), &path).unwrap();
        let back = read_obb_labels(&path, (640, 640)).unwrap();
        assert_eq!(back.len(), 3);
        for (b, l) in boxes.iter().zip(&back) {
            let o = l.label.obb;
            assert!((o.cx() - b.cx()).abs() / 640.0 < 1e-6);
            assert!((o.cy() - b.cy()).abs() / 640.0 < 1e-6);
            assert!((o.w() - b.w()).abs() / 640.0 < 1e-6);
            assert!((o.h() - b.h()).abs() / 640.0 < 1e-6);
            assert_abs_diff_eq!(o.theta(), b.theta(), epsilon = 1e-6);
        }
    }

    #[test]
    fn non_square_frame() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        let b = OrientedBox::new(960.0, 270.0, 300.0, 8.0, 0.4);
        write_obb_labels(&[lbl(b)], (1920, 1080), &path).unwrap();
        let o = read_obb_labels(&path, (1920, 1080)).unwrap()[0].label.obb;
        assert_abs_diff_eq!(o.cx(), 960.0, epsilon = 1e-9);
        assert_abs_diff_eq!(o.w(), 300.0, epsilon = 1e-9);
        assert_abs_diff_eq!(o.theta(), 0.4, epsilon = 1e-12);
        assert!(write_obb_labels(&[], (0, 10), &path).is_err());
    }

    #[test]
    fn empty_record_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.txt");
        write_obb_labels(&[], (640, 640), &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "");
        assert!(read_obb_labels(&path, (640, 640)).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_clamped_and_scores_parsed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        fs::write(
            &path,
            "0 -0.1 0 1 0 1 0.5 -0.1 0.5 0.9\n0 0.1 0.1 0.2 0.1 0.2 0.2 0.1 0.2\n# note\n",
        )
        .unwrap();
        let lines = read_obb_labels(&path, (100, 100)).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].score, Some(0.9));
        assert_abs_diff_eq!(lines[0].label.obb.w(), 100.0, epsilon = 1e-9);
        assert_eq!(lines[1].score, None);

        let bad = dir.path().join("bad.txt");
        fs::write(&bad, "0 1 2 3\n").unwrap();
        assert!(matches!(read_obb_labels(&bad, (100, 100)), Err(Error::Malformed { .. })));
    }
}
