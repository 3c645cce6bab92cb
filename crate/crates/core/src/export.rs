//! Plain-text output helpers shared by the table writers.

use std::io::Write;

/// Reals as 17 significant digits in scientific notation, `.` decimal point.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}").to_lowercase()
    }
}

/// Writes a header row and one row per record.
pub fn write_csv<R>(
    mut out: impl Write,
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
    mut fields: impl FnMut(&R) -> Vec<String>,
) -> std::io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", fields(&row).join(","))?;
    }
    Ok(())
}
