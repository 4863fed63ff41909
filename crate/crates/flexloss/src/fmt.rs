//! Deterministic numeric formatting shared by every emitter (CSV, SVG,
//! JSON, tables): decimal strings at a fixed number of significant digits,
//! so identical inputs always serialize to identical bytes.

/// Formats `x` with `digits` significant digits (12 across this crate's
/// emitters — enough to expose 1e-10-level agreement without trailing
/// noise). Values in `[1e-4, 1e15)` use plain decimal notation; smaller or
/// larger magnitudes use scientific notation; zero prints as a plain
/// decimal zero. Non-finite values print as `inf`/`-inf`/`nan`.
pub fn significant(x: f64, digits: u32) -> String {
    let digits = digits.max(1);
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    if x == 0.0 {
        return format!("{:.*}", digits as usize - 1, 0.0);
    }
    let magnitude = x.abs().log10().floor();
    if (-4.0..15.0).contains(&magnitude) {
        let decimals = (digits as i32 - 1 - magnitude as i32).clamp(0, 30) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits as usize - 1, x)
    }
}

/// [`significant`] at the crate-wide 12 digits.
pub fn sig12(x: f64) -> String {
    significant(x, 12)
}

/// `x` rounded to 12 significant digits, for serializers that emit numbers
/// rather than strings.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig12(x).parse().expect("sig12 always prints a parseable number")
}
