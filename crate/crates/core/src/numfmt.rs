/// Fixed six-decimal rendering used by every text and CSV report.
///
/// `{:.6}` formats the exact binary value and rounds exact ties to even.
/// Negative zero prints as `0.000000`; NaN prints as an empty field.
pub fn fixed6(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}
