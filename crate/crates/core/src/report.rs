//! Self-describing CSV and JSON artifacts.
//!
//! CSV files start with two comment lines, `# degenwave format_version=..
//! generated=..` and `# config=<json>`, followed by a header row and data.
//! Only the first line varies between reruns with identical input.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Writes rows with the two-line self-describing header to any writer.
pub fn write_csv_to<W: Write, C: Serialize, R: Serialize>(mut out: W, config: &C, rows: &[R]) -> std::io::Result<()> {
    let config = serde_json::to_string(config).map_err(std::io::Error::other)?;
    writeln!(out, "# degenwave format_version={FORMAT_VERSION} generated={}", unix_now())?;
    writeln!(out, "# config={config}")?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(std::io::Error::other)?;
    }
    w.flush()
}

pub fn write_csv<C: Serialize, R: Serialize>(path: &Path, config: &C, rows: &[R]) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    write_csv_to(BufWriter::new(file), config, rows).map_err(|e| io_err(path, e))
}

#[derive(Serialize)]
struct Envelope<'a, C, R> {
    format_version: u32,
    generated: u64,
    config: &'a C,
    report: &'a R,
}

pub fn to_json<C: Serialize, R: Serialize>(config: &C, report: &R) -> Result<String> {
    let env = Envelope { format_version: FORMAT_VERSION, generated: unix_now(), config, report };
    serde_json::to_string_pretty(&env).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_json<C: Serialize, R: Serialize>(path: &Path, config: &C, report: &R) -> Result<()> {
    let text = to_json(config, report)?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        k: usize,
        rho: f64,
    }

    #[test]
    fn csv_body_is_deterministic() {
        let rows = [Row { k: 1, rho: 2.5 }, Row { k: 2, rho: 10.0 }];
        let mut a = Vec::new();
        write_csv_to(&mut a, &serde_json::json!({"alpha": 0.5}), &rows).unwrap();
        let text = String::from_utf8(a).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# degenwave format_version=1 generated="));
        assert_eq!(lines[1], r#"# config={"alpha":0.5}"#);
        assert_eq!(&lines[2..], ["k,rho", "1,2.5", "2,10.0"]);
    }
}
