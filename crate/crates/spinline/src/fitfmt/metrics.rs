//! Model-free line metrics from |S21|: refined dip center, visibility and
//! half-prominence width.

use super::FitError;

/// Extracted dip metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMetrics {
    pub center_hz: f64,
    pub fwhm_hz: f64,
    pub visibility: f64,
}

/// Quadratic vertex through three points; returns (x*, y*).
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d10 = (y[1] - y[0]) / (x[1] - x[0]);
    let d21 = (y[2] - y[1]) / (x[2] - x[1]);
    let c = (d21 - d10) / (x[2] - x[0]);
    if c.abs() < 1e-300 {
        return (x[1], y[1]);
    }
    let xs = 0.5 * (x[0] + x[1] - d10 / c);
    let ys = y[0] + d10 * (xs - x[0]) + c * (xs - x[0]) * (xs - x[1]);
    (xs, ys)
}

/// Quadratic interpolation of y(x) through three nodes, evaluated where
/// y = target along the branch between x[0] and x[2] (regula through the
/// fitted parabola).
fn parabola_crossing(x: [f64; 3], y: [f64; 3], target: f64) -> f64 {
    let d10 = (y[1] - y[0]) / (x[1] - x[0]);
    let d21 = (y[2] - y[1]) / (x[2] - x[1]);
    let c = (d21 - d10) / (x[2] - x[0]);
    // y(x) = y0 + d10 (x−x0) + c (x−x0)(x−x1); solve for y = target.
    let a = c;
    let b = d10 - c * (x[1] - x[0]);
    let k = y[0] - target;
    if a.abs() < 1e-300 {
        return if b.abs() < 1e-300 { x[1] } else { x[0] - k / b };
    }
    let disc = (b * b - 4.0 * a * k).max(0.0).sqrt();
    let r1 = x[0] + (-b + disc) / (2.0 * a);
    let r2 = x[0] + (-b - disc) / (2.0 * a);
    // Keep the root inside the bracket.
    if (x[0]..=x[2]).contains(&r1) || (x[2]..=x[0]).contains(&r1) {
        r1
    } else {
        r2
    }
}

/// Dip metrics of an |S21| trace.
///
/// The center is the parabola-refined argmin of |S21| (ties break to the
/// lower frequency); the visibility is 1 − min|S21|; the width is the
/// half-prominence width of the power dip 1 − |S21|², which for the ideal
/// collective line is exactly 2(G+Γ). A minimum on the grid boundary is an
/// error.
pub fn extract_line_metrics(freqs: &[f64], abs_s21: &[f64]) -> Result<LineMetrics, FitError> {
    if freqs.len() != abs_s21.len() {
        return Err(FitError::ShapeMismatch("metric input lengths".into()));
    }
    if freqs.len() < 5 {
        return Err(FitError::TooFewPoints(freqs.len(), 5));
    }
    let mut k = 0;
    let mut best = f64::INFINITY;
    for (i, &a) in abs_s21.iter().enumerate() {
        if a < best {
            best = a;
            k = i;
        }
    }
    if k == 0 || k == freqs.len() - 1 {
        return Err(FitError::MinimumOnBoundary);
    }
    let (center, min_val) = parabola_vertex(
        [freqs[k - 1], freqs[k], freqs[k + 1]],
        [abs_s21[k - 1], abs_s21[k], abs_s21[k + 1]],
    );
    let min_val = min_val.clamp(0.0, 1.0);
    let visibility = 1.0 - min_val;

    // Power-dip profile and its half-prominence crossings. Quadratic
    // interpolation of the reciprocal profile is exact for a Lorentzian dip.
    let prof: Vec<f64> = abs_s21.iter().map(|a| 1.0 - a * a).collect();
    let prominence = 1.0 - min_val * min_val;
    let half = prominence / 2.0;
    let mut lo = freqs[0];
    let mut found_lo = false;
    for i in (1..=k).rev() {
        if prof[i - 1] <= half && prof[i] >= half {
            let j = i.saturating_sub(1).max(1);
            lo = parabola_crossing(
                [freqs[j - 1], freqs[j], freqs[j + 1]],
                [prof[j - 1], prof[j], prof[j + 1]],
                half,
            );
            found_lo = true;
            break;
        }
    }
    let mut hi = *freqs.last().unwrap();
    let mut found_hi = false;
    for i in k..freqs.len() - 1 {
        if prof[i] >= half && prof[i + 1] <= half {
            let j = (i + 1).min(freqs.len() - 2);
            hi = parabola_crossing(
                [freqs[j - 1], freqs[j], freqs[j + 1]],
                [prof[j - 1], prof[j], prof[j + 1]],
                half,
            );
            found_hi = true;
            break;
        }
    }
    if !(found_lo && found_hi) {
        return Err(FitError::MinimumOnBoundary);
    }
    Ok(LineMetrics {
        center_hz: center,
        fwhm_hz: hi - lo,
        visibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transmission::paramagnetic_s_params;

    fn grid_around(center: f64, span: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| center - span / 2.0 + span * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn ideal_line_metrics_are_closed_form() {
        let f0 = 3.5e9;
        let (g, gaml) = (12e6, 14e6);
        // Symmetric grid with a node exactly on resonance.
        let grid = grid_around(f0, 8e8, 2001);
        let s = paramagnetic_s_params(&grid, f0, g, gaml).unwrap();
        let m = extract_line_metrics(&grid, &s.abs_s21()).unwrap();
        assert!((m.center_hz - f0).abs() < 1.0, "center {}", m.center_hz);
        assert!(
            (m.visibility - g / (g + gaml)).abs() < 1e-10,
            "visibility {}",
            m.visibility
        );
        assert!(
            (m.fwhm_hz - 2.0 * (g + gaml)).abs() < 1e-6 * 2.0 * (g + gaml),
            "fwhm {} vs {}",
            m.fwhm_hz,
            2.0 * (g + gaml)
        );
    }

    #[test]
    fn two_equal_dips_tie_break_to_lower_frequency() {
        let grid = grid_around(3.5e9, 2e9, 4001);
        let dip = |f: f64, c: f64| 1.0 - 0.3 / (1.0 + ((f - c) / 2e7).powi(2));
        let abs: Vec<f64> = grid
            .iter()
            .map(|&f| dip(f, 3.0e9) * dip(f, 4.0e9))
            .collect();
        let m = extract_line_metrics(&grid, &abs).unwrap();
        assert!(
            (m.center_hz - 3.0e9).abs() < 2e6,
            "tie-break center {}",
            m.center_hz
        );
    }

    #[test]
    fn boundary_minimum_is_error() {
        let grid = grid_around(3.5e9, 1e9, 100);
        let abs: Vec<f64> = grid.iter().map(|&f| 1.0 - f / 1e10).collect();
        assert!(matches!(
            extract_line_metrics(&grid, &abs).unwrap_err(),
            FitError::MinimumOnBoundary
        ));
    }
}
