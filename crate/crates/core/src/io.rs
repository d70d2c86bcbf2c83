//! CSV emission shared by the library types and the CLI.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! that every value round-trips exactly. Files are written to a sibling
//! temporary path and renamed into place, so a failed run leaves no partial
//! output behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// `{:.16e}`: 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders `header` followed by `rows` as CSV text.
pub fn csv_bytes<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        writer.write_record(header)?;
        for row in rows {
            writer.write_record(row.iter().map(|s| s.as_ref()))?;
        }
        writer.flush()?;
    }
    Ok(buf)
}

/// [`csv_bytes`] for all-numeric rows.
pub fn float_csv_bytes(header: &[&str], rows: &[Vec<f64>]) -> Result<Vec<u8>> {
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| format_float(v)).collect())
        .collect();
    csv_bytes(header, &text)
}

/// Writes `header` followed by `rows` to `path` atomically.
pub fn write_csv<S: AsRef<str>>(path: impl AsRef<Path>, header: &[&str], rows: &[Vec<S>]) -> Result<()> {
    write_atomic(path, &csv_bytes(header, rows)?)
}

/// Numeric-only convenience over [`write_csv`].
pub fn write_float_csv(path: impl AsRef<Path>, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    write_atomic(path, &float_csv_bytes(header, rows)?)
}

/// Writes bytes via a temporary sibling file and a rename.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let tmp = temp_sibling(path);
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}
