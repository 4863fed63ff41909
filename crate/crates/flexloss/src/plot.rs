//! File renderings of the level-set curves: a self-contained SVG plot of
//! the `(k, γ)` plane and a CSV table of the traced thresholds.
//!
//! Both emitters are pure functions of their input, format numbers at the
//! crate-wide 12 significant digits ([`crate::fmt`]), and therefore produce
//! byte-identical output for identical inputs — golden-file friendly.

use crate::analysis::{LevelSet, LevelSetCurve};
use crate::fmt::sig12;
use std::fmt::Write as _;

// Fixed canvas geometry: 640x480 with room for axis ticks and titles.
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 16.0;
const MARGIN_BOTTOM: f64 = 48.0;
const PLOT_WIDTH: f64 = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
const PLOT_HEIGHT: f64 = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

/// `k ∈ [0,1]` to pixel x.
fn px(k: f64) -> f64 {
    MARGIN_LEFT + k * PLOT_WIDTH
}

/// `γ ∈ [0,1]` to pixel y (origin bottom-left).
fn py(gamma: f64) -> f64 {
    MARGIN_TOP + (1.0 - gamma) * PLOT_HEIGHT
}

/// Checks the three curves describe one consistent trace and returns them
/// as (green `γ^g`, blue `γ^b`, red `γ^r`).
///
/// # Panics
/// Panics if the curves disagree on `ρ`, the grid, or which level set each
/// one traces — that is a caller bug, not a data condition.
fn split_curves(curves: &[LevelSetCurve; 3]) -> (&LevelSetCurve, &LevelSetCurve, &LevelSetCurve) {
    let find = |which: LevelSet| {
        curves
            .iter()
            .find(|c| c.which == which)
            .unwrap_or_else(|| panic!("missing the {} curve", which.name()))
    };
    let green = find(LevelSet::PartialVsIndependent);
    let blue = find(LevelSet::FullVsIndependent);
    let red = find(LevelSet::FullVsPartial);
    assert!(
        green.rho == blue.rho && blue.rho == red.rho,
        "curves traced at different loads"
    );
    assert!(
        green.points.len() == blue.points.len() && blue.points.len() == red.points.len(),
        "curves traced on different grids"
    );
    assert!(
        !green.points.is_empty(),
        "cannot render an empty trace"
    );
    for i in 0..green.points.len() {
        assert!(
            green.points[i].0 == blue.points[i].0 && blue.points[i].0 == red.points[i].0,
            "curves traced on different grids"
        );
    }
    (green, blue, red)
}

/// CSV table of the traced thresholds: header `k,gamma_g,gamma_b,gamma_r`,
/// one row per grid point, values at 12 significant digits, CRLF line
/// endings per RFC 4180.
pub fn levelset_csv(curves: &[LevelSetCurve; 3]) -> String {
    let (green, blue, red) = split_curves(curves);
    let mut out = String::from("k,gamma_g,gamma_b,gamma_r\r\n");
    for i in 0..green.points.len() {
        let _ = write!(
            out,
            "{},{},{},{}\r\n",
            sig12(green.points[i].0),
            sig12(green.points[i].1),
            sig12(blue.points[i].1),
            sig12(red.points[i].1),
        );
    }
    out
}

/// Linear interpolation of a traced curve at `k`, clamped to the grid ends.
fn interpolate(points: &[(f64, f64)], k: f64) -> f64 {
    if k <= points[0].0 {
        return points[0].1;
    }
    if let Some(last) = points.last() {
        if k >= last.0 {
            return last.1;
        }
    }
    for pair in points.windows(2) {
        let ((k0, g0), (k1, g1)) = (pair[0], pair[1]);
        if k <= k1 {
            let t = (k - k0) / (k1 - k0);
            return g0 + t * (g1 - g0);
        }
    }
    unreachable!("k is inside the grid span");
}

/// Pixel-coordinate pair formatted for an SVG attribute.
fn point_attr(k: f64, gamma: f64) -> String {
    format!("{:.3},{:.3}", px(k), py(gamma))
}

/// Self-contained SVG (1.1) plot of the three level-set curves over the
/// `(k, γ)` unit square: green `γ^g`, blue `γ^b`, red `γ^r`, the horizontal
/// reference line `γ = ρ/(ρ+1)` that all three approach as `k → 1`, and a
/// throughput-ordering label inside each of the four regimes.
pub fn levelset_svg(curves: &[LevelSetCurve; 3]) -> String {
    let (green, blue, red) = split_curves(curves);
    let rho = green.rho;
    let gamma_ref = rho / (rho + 1.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="640" height="480" viewBox="0 0 640 480">"#
    );
    let _ = writeln!(svg, r#"<rect width="640" height="480" fill="white"/>"#);

    // Plot frame and ticks every 0.2 on both axes.
    let _ = writeln!(
        svg,
        r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
        MARGIN_LEFT, MARGIN_TOP, PLOT_WIDTH, PLOT_HEIGHT
    );
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let (x, y) = (px(v), py(v));
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="black"/>"#,
            HEIGHT - MARGIN_BOTTOM,
            HEIGHT - MARGIN_BOTTOM + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="12">{v:.1}</text>"#,
            HEIGHT - MARGIN_BOTTOM + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end" font-family="sans-serif" font-size="12">{v:.1}</text>"#,
            MARGIN_LEFT - 9.0,
            y + 4.0
        );
    }

    // Axis titles.
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="15" font-style="italic">k</text>"#,
        MARGIN_LEFT + PLOT_WIDTH / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="15" font-style="italic">γ</text>"#,
        18.0,
        MARGIN_TOP + PLOT_HEIGHT / 2.0 + 5.0
    );

    // Reference line gamma = rho/(rho+1), the common k -> 1 limit.
    let _ = writeln!(
        svg,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-dasharray="6 4"/>"#,
        MARGIN_LEFT,
        py(gamma_ref),
        MARGIN_LEFT + PLOT_WIDTH,
        py(gamma_ref)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="end" font-family="sans-serif" font-size="12">γ = ρ/(ρ+1) = {}</text>"#,
        MARGIN_LEFT + PLOT_WIDTH - 6.0,
        py(gamma_ref) - 6.0,
        sig12(gamma_ref)
    );

    // The three level-set curves.
    for (curve, color) in [(green, "green"), (blue, "blue"), (red, "red")] {
        let points: Vec<String> = curve
            .points
            .iter()
            .map(|&(k, g)| point_attr(k, g))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
    }

    // One ordering label per regime, positioned from the traced data.
    let k_lo = 0.35;
    let k_hi = 0.65;
    let labels = [
        // above gamma_r: full is best
        (0.5, 0.5 * (gamma_ref + 1.0), "T_is &lt; T_ps &lt; T_fs"),
        // between gamma_b and gamma_r
        (
            k_lo,
            0.5 * (interpolate(&blue.points, k_lo) + interpolate(&red.points, k_lo)),
            "T_is &lt; T_fs &lt; T_ps",
        ),
        // between gamma_g and gamma_b
        (
            k_lo,
            0.5 * (interpolate(&green.points, k_lo) + interpolate(&blue.points, k_lo)),
            "T_fs &lt; T_is &lt; T_ps",
        ),
        // below gamma_g: independent is best
        (
            k_hi,
            0.5 * interpolate(&green.points, k_hi),
            "T_fs &lt; T_ps &lt; T_is",
        ),
    ];
    for (k, gamma, text) in labels {
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="13">{text}</text>"#,
            px(k),
            py(gamma) + 4.0
        );
    }

    svg.push_str("</svg>\n");
    svg
}
