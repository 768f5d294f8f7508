use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

/// `#`-prefixed metadata block written above every table and data file.
pub struct Header {
    lines: Vec<String>,
}

impl Header {
    pub fn new(command: &str, config_hash: &str, seed: Option<u64>) -> Self {
        let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        Header {
            lines: vec![
                format!("kdtl {command} {}", env!("CARGO_PKG_VERSION")),
                format!("config_hash: {config_hash}"),
                format!("seed: {seed}"),
            ],
        }
    }

    pub fn line(mut self, text: impl Into<String>) -> Self {
        self.lines.push(text.into());
        self
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|l| format!("# {l}\n")).collect()
    }
}

/// Stable digest of everything that determines a command's output.
pub struct ConfigHash(Sha256);

impl ConfigHash {
    pub fn new(command: &str) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        ConfigHash(h)
    }

    pub fn text(&mut self, label: &str, value: impl std::fmt::Display) {
        self.0.update(format!("\n{label}={value}").as_bytes());
    }

    pub fn file(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.0.update(b"\nfile:");
        self.0.update(&bytes);
        Ok(())
    }

    pub fn finish(self) -> String {
        let digest = self.0.finalize();
        let mut hex = String::from("sha256:");
        for b in digest.iter() {
            write!(hex, "{b:02x}").expect("writing to a string");
        }
        hex
    }
}

pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, header: &Header) -> String {
        let mut s = header.render();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
