use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use chrono::Utc;
use mzk_core::diagnostics::NormReport;
use mzk_core::spectral::snapshot::write_snapshot;
use mzk_core::spectral::Field;
use serde::Serialize;

use crate::error::Result;

/// `<root>/<name>/<timestamp>/` plus the list of files written into it.
pub struct RunDir {
    pub path: PathBuf,
    pub outputs: Vec<String>,
}

impl RunDir {
    pub fn create(root: &Path, name: &str) -> Result<Self> {
        let stamp = Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string();
        let base = root.join(name);
        fs::create_dir_all(&base)?;
        let mut path = base.join(&stamp);
        let mut k = 1;
        while path.exists() {
            path = base.join(format!("{stamp}-{k}"));
            k += 1;
        }
        fs::create_dir_all(&path)?;
        Ok(RunDir {
            path,
            outputs: Vec::new(),
        })
    }

    fn register(&mut self, rel: &str) -> PathBuf {
        self.outputs.push(rel.to_string());
        self.path.join(rel)
    }

    pub fn write_csv<T: Serialize>(&mut self, rel: &str, rows: &[T]) -> Result<()> {
        let path = self.register(rel);
        write_csv(&path, rows)
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> Result<()> {
        let path = self.register(rel);
        let f = BufWriter::new(fs::File::create(path)?);
        serde_json::to_writer_pretty(f, value)?;
        Ok(())
    }

    pub fn write_snapshot(&mut self, field: &Field) -> Result<()> {
        fs::create_dir_all(self.path.join("snapshots"))?;
        let rel = format!("snapshots/{}", snapshot_name(field.time));
        let path = self.register(&rel);
        let mut w = BufWriter::new(fs::File::create(path)?);
        write_snapshot(&mut w, field)?;
        Ok(())
    }
}

pub fn snapshot_name(t: f64) -> String {
    format!("t{t:09.4}.mzkf")
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn read_norms_csv(path: &Path) -> Result<Vec<NormReport>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}
