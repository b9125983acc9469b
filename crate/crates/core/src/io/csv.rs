//! CSV conventions: `.` decimal point, `\n` line endings, 17 significant digits.

/// Shortest text that names the same `f64` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn row(values: &[f64]) -> String {
    let mut out = values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",");
    out.push('\n');
    out
}
