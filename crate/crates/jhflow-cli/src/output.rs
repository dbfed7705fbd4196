//! Deterministic output: 17-significant-digit CSV and sorted-key JSON,
//! written atomically (write to a temp file, then rename).

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Format a float with 17 significant digits, locale-independent.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Write `content` to `out` (atomically) or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(CliError::Io)?;
            Ok(())
        }
        Some(path) => {
            let tmp = temp_sibling(path);
            let write = || -> std::io::Result<()> {
                let mut f = std::fs::File::create(&tmp)?;
                f.write_all(content.as_bytes())?;
                f.sync_all()?;
                std::fs::rename(&tmp, path)
            };
            write().map_err(|e| {
                let _ = std::fs::remove_file(&tmp);
                CliError::Io(e)
            })
        }
    }
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Assemble the versioned JSON report envelope.
pub fn json_report(
    command: &str,
    inputs: serde_json::Value,
    results: serde_json::Value,
    residuals: serde_json::Value,
) -> String {
    let report = serde_json::json!({
        "command": command,
        "inputs": inputs,
        "results": results,
        "residuals": residuals,
        "version": 1,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report is serializable");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(f64::NAN), "nan");
        assert_eq!(fmt_f64(-0.25), "-2.5000000000000000e-1");
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = std::env::temp_dir().join("jhflow-output-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        emit(Some(&path), "a,b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n");
        assert!(!temp_sibling(&path).exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
