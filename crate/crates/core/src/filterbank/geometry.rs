/// Slope for an angle in degrees. The bank's angles (0°, atan ½, 45°) get
/// their exact rational slope so cells the line only touches at a corner
/// come out as exactly zero.
pub(crate) fn exact_slope(theta_deg: f64) -> f64 {
    let half = 0.5f64.atan().to_degrees();
    let a = theta_deg.abs();
    let s = if a < 1e-9 {
        0.0
    } else if (a - half).abs() < 0.01 {
        0.5
    } else if (a - 45.0).abs() < 1e-9 {
        1.0
    } else {
        a.to_radians().tan()
    };
    s.copysign(theta_deg)
}

/// Length of the line `y = (x − n/2)·tanθ + n/2` inside grid cell
/// `[i, i+1] × [j, j+1]`; zero when the line misses the cell.
///
/// Defined for `θ ∈ [−45°, 45°]`. Steeper orientations are produced by
/// transposition in [`rotate_filter`](super::rotate_filter).
pub fn cell_line_length(n: usize, theta_deg: f64, i: usize, j: usize) -> f64 {
    assert!(
        theta_deg.abs() <= 45.0 + 1e-9,
        "cell_line_length expects |θ| <= 45°, got {theta_deg}"
    );
    let c = n as f64 / 2.0;
    let s = exact_slope(theta_deg);
    let (x0, x1) = (i as f64, i as f64 + 1.0);
    let (y0, y1) = (j as f64, j as f64 + 1.0);

    // x interval where the line lies inside the cell's row band
    let (lo, hi) = if s == 0.0 {
        if c < y0 || c > y1 {
            return 0.0;
        }
        (x0, x1)
    } else {
        let xa = (y0 - c) / s + c;
        let xb = (y1 - c) / s + c;
        (x0.max(xa.min(xb)), x1.min(xa.max(xb)))
    };
    if hi <= lo {
        return 0.0;
    }
    (hi - lo) * (1.0 + s * s).sqrt()
}

/// All cell lengths, row-major (`[j * n + i]`).
pub fn line_length_grid(n: usize, theta_deg: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            out.push(cell_line_length(n, theta_deg, i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn horizontal_line_hits_middle_row() {
        for j in 0..7 {
            for i in 0..7 {
                let l = cell_line_length(7, 0.0, i, j);
                assert_eq!(l, if j == 3 { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn diagonal_hits_main_diagonal_only() {
        for j in 0..7 {
            for i in 0..7 {
                let l = cell_line_length(7, 45.0, i, j);
                if i == j {
                    assert_eq!(l, 2f64.sqrt());
                } else {
                    assert_eq!(l, 0.0, "cell ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn center_cell_is_secant() {
        for theta in [0.0, 10.0, 26.56, 30.0, 45.0] {
            let s = exact_slope(theta);
            let expected = (1.0 + s * s).sqrt();
            assert_abs_diff_eq!(cell_line_length(7, theta, 3, 3), expected, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(cell_line_length(7, 26.56, 3, 3), 1.1180, epsilon = 1e-4);
    }

    #[test]
    fn column_totals_equal_secant() {
        for theta in [0.0, 26.56, 45.0, 12.0, -26.56, -45.0] {
            let secant = (1.0 + exact_slope(theta).powi(2)).sqrt();
            for i in 0..7 {
                let col: f64 = (0..7).map(|j| cell_line_length(7, theta, i, j)).sum();
                assert_abs_diff_eq!(col, secant, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn negative_angle_is_vertical_mirror() {
        for theta in [26.56, 45.0, 17.0] {
            for j in 0..7 {
                for i in 0..7 {
                    assert_eq!(
                        cell_line_length(7, -theta, i, j),
                        cell_line_length(7, theta, i, 6 - j)
                    );
                }
            }
        }
    }
}
