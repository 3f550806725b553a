//! Deterministic CSV emission: fixed 15-significant-digit scientific
//! notation, '\n' line endings, and buffered whole-file writes so that
//! identical runs produce byte-identical output.

use std::fs;
use std::path::{Path, PathBuf};

use crate::CliError;

/// One number, always 15 significant digits; NaN marks undefined values
/// (a Fano factor at vanishing mean photon number).
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    lines: &[String],
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut text = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum::<usize>() + 64);
    text.push_str(header);
    text.push('\n');
    for line in lines {
        text.push_str(line);
        text.push('\n');
    }
    fs::write(&path, text)?;
    Ok(path)
}
