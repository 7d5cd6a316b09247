use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

/// Prefix of the only header line allowed to differ between identical runs.
pub const TIMESTAMP_PREFIX: &str = "# generated_unix:";

pub fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `#`-prefixed provenance block in front of every CSV file.
pub struct Header {
    lines: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        let mut h = Header { lines: Vec::new() };
        h.push("casimir", env!("CARGO_PKG_VERSION"));
        h.push("command", command);
        h
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    pub fn write(&self, w: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.lines {
            writeln!(w, "# {k}: {v}")?;
        }
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(w, "{TIMESTAMP_PREFIX} {now}")
    }
}

/// Shortest round-trip representation, so files compare exactly across runs.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
