//! Deterministic output artifacts: CSV, portable graymaps, JSON, and the
//! hashed manifest tying a run to its configuration.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// 17 significant digits, '.' decimal; lossless for f64 regression diffs.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000e0".into();
    }
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub command: String,
    pub config_hash: String,
    pub version: String,
    pub metadata: serde_json::Value,
    pub files: Vec<FileEntry>,
}

/// Writes files under a root directory, recording content hashes as it goes.
pub struct OutputWriter {
    root: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputWriter {
    pub fn new(root: impl Into<PathBuf>) -> std::io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Self { root, files: Vec::new() })
    }

    pub fn root(&self) -> &PathBuf {
        &self.root
    }

    pub fn write_bytes(&mut self, rel: &str, bytes: &[u8]) -> std::io::Result<()> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.files.push(FileEntry {
            path: rel.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    pub fn write_csv(&mut self, rel: &str, header: &[&str], rows: &[Vec<f64>]) -> std::io::Result<()> {
        let mut text = String::new();
        text.push_str(&header.join(","));
        text.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        self.write_bytes(rel, text.as_bytes())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(rel, text.as_bytes())
    }

    /// Binary portable graymap; `rows` are scanlines top to bottom, values in
    /// [0, 1] scaled to [0, 255]. The comment carries the config hash.
    pub fn write_pgm(&mut self, rel: &str, rows: &[Vec<f64>], comment: &str) -> std::io::Result<()> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut buf = Vec::with_capacity(width * height + 64);
        write!(buf, "P5\n# cfg:{comment}\n{width} {height}\n255\n")?;
        for row in rows {
            for v in row {
                buf.push((v.clamp(0.0, 1.0) * 255.0).round() as u8);
            }
        }
        self.write_bytes(rel, &buf)
    }

    /// Emit the manifest and return the bundle.
    pub fn finish(
        mut self,
        command: &str,
        config_hash: &str,
        metadata: serde_json::Value,
    ) -> std::io::Result<ReportBundle> {
        let bundle = ReportBundle {
            command: command.to_string(),
            config_hash: config_hash.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            metadata,
            files: std::mem::take(&mut self.files),
        };
        let mut text = serde_json::to_string_pretty(&bundle)?;
        text.push('\n');
        fs::write(self.root.join("manifest.json"), text)?;
        Ok(bundle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_lossless() {
        for x in [0.1, -3.5e-7, 1.0 / 24.0, 2.0f64.sqrt(), 0.0] {
            let s = format_float(x);
            assert!(s.contains('.') || s == "0");
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn writer_hashes_content() {
        let dir = std::env::temp_dir().join(format!("frontgate-test-{}", std::process::id()));
        let mut w = OutputWriter::new(&dir).unwrap();
        w.write_csv("a.csv", &["x", "y"], &[vec![1.0, 2.0]]).unwrap();
        let bundle = w.finish("test", "deadbeef", serde_json::json!({})).unwrap();
        assert_eq!(bundle.files.len(), 1);
        assert_eq!(bundle.files[0].sha256.len(), 64);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
