//! Run directories and artifact writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// `<out>/<command>/<label>/`, created on demand.
pub struct RunDir {
    dir: PathBuf,
    json_copy: Option<(PathBuf, String)>,
    written: Vec<PathBuf>,
}

impl RunDir {
    pub fn create(out: &Path, command: &str, label: &str, json_dir: Option<&Path>) -> Result<Self> {
        let dir = out.join(command).join(label);
        fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
        if let Some(j) = json_dir {
            fs::create_dir_all(j).with_context(|| format!("cannot create {}", j.display()))?;
        }
        Ok(Self {
            dir,
            json_copy: json_dir.map(|j| (j.to_path_buf(), format!("{command}.json"))),
            written: Vec::new(),
        })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        let path = self.dir.join(name);
        self.put(&path, text.as_bytes())
    }

    /// The command's main JSON artifact; also copied to `--json DIR`.
    pub fn primary_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.json(name, value)?;
        if let Some((dir, file)) = self.json_copy.clone() {
            let bytes = fs::read(self.dir.join(name))?;
            self.put(&dir.join(file), &bytes)?;
        }
        Ok(())
    }

    pub fn csv<R: AsRef<[String]>>(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[R],
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r.as_ref())?;
        }
        let bytes = w.into_inner().context("flushing CSV buffer")?;
        let path = self.dir.join(name);
        self.put(&path, &bytes)
    }

    pub fn raw(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        self.put(&path, bytes)
    }

    fn put(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let mut f =
            fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        f.write_all(bytes)
            .with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    pub fn report(&self) {
        for p in &self.written {
            println!("wrote {}", p.display());
        }
    }
}

/// Shortest round-trip form, so CSV values parse back exactly.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
