use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

/// Serialized writer for one output directory.
pub struct Sink {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.text(name, &text)
    }

    pub fn text(&mut self, name: &str, body: &str) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    /// RFC 4180 file with a header row. Floats use the shortest
    /// round-trip representation.
    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let path = self.dir.join(name);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_path(&path)
            .with_context(|| format!("writing {}", path.display()))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        self.written.push(path);
        Ok(())
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Shortest round-trip text, in exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let m = x.abs();
    if m == 0.0 {
        "0".into()
    } else if (1e-4..1e15).contains(&m) || !m.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
