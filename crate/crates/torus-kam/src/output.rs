use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{CliError, ResolvedConfig, Summary};

/// Files of one run: `<kind>_summary.json` and `<kind>_<table>.csv`.
pub struct Output {
    dir: PathBuf,
    prefix: &'static str,
    resolved: ResolvedConfig,
    hash: String,
    files: Vec<String>,
}

fn write_err(file: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Write {
        file: file.display().to_string(),
        message: e.to_string(),
    }
}

impl Output {
    pub fn create(dir: &Path, rc: &ResolvedConfig) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            prefix: rc.config.run_kind.name(),
            hash: rc.hash(),
            resolved: rc.clone(),
            files: Vec::new(),
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    fn path(&mut self, name: &str, ext: &str) -> PathBuf {
        let file = format!("{}_{name}.{ext}", self.prefix);
        if !self.files.contains(&file) {
            self.files.push(file.clone());
        }
        self.dir.join(file)
    }

    /// One header row, then one record per row; `config_hash` is appended
    /// as the last column.
    pub fn write_csv<R: Serialize + Default>(&mut self, name: &str, rows: &[R]) -> Result<(), CliError> {
        let path = self.path(name, "csv");
        let mut buf = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let mut header_done = false;
        let blank = [R::default()];
        let (rows, header_only) = if rows.is_empty() { (&blank[..], true) } else { (rows, false) };
        for r in rows {
            let mut rec = csv::WriterBuilder::new().from_writer(Vec::new());
            rec.serialize(r).map_err(|e| write_err(&path, e))?;
            let bytes = rec.into_inner().map_err(|e| write_err(&path, e))?;
            let mut rd = csv::ReaderBuilder::new().from_reader(&bytes[..]);
            if !header_done {
                let mut h = rd.headers().map_err(|e| write_err(&path, e))?.clone();
                h.push_field("config_hash");
                buf.write_record(&h).map_err(|e| write_err(&path, e))?;
                header_done = true;
            }
            if header_only {
                break;
            }
            for row in rd.records() {
                let mut row = row.map_err(|e| write_err(&path, e))?;
                row.push_field(&self.hash);
                buf.write_record(&row).map_err(|e| write_err(&path, e))?;
            }
        }
        let bytes = buf.into_inner().map_err(|e| write_err(&path, e))?;
        std::fs::write(&path, bytes).map_err(|e| write_err(&path, e))
    }

    pub fn write_text(&mut self, name: &str, ext: &str, text: &[u8]) -> Result<(), CliError> {
        let path = self.path(name, ext);
        std::fs::write(&path, text).map_err(|e| write_err(&path, e))
    }

    fn summary(
        &mut self,
        error: Option<String>,
        checks: BTreeMap<String, bool>,
        results: impl Serialize,
    ) -> Result<Summary, CliError> {
        let path = self.path("summary", "json");
        let results = serde_json::to_value(results).map_err(|e| write_err(&path, e))?;
        let s = Summary {
            run_kind: self.resolved.config.run_kind,
            config_hash: self.hash.clone(),
            config: self.resolved.clone(),
            status: if error.is_some() { "failed" } else { "ok" }.into(),
            error,
            checks,
            results,
            files: self.files.clone(),
        };
        let mut w = BufWriter::new(File::create(&path).map_err(|e| write_err(&path, e))?);
        serde_json::to_writer_pretty(&mut w, &s).map_err(|e| write_err(&path, e))?;
        w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| write_err(&path, e))?;
        Ok(s)
    }

    pub fn finish(&mut self, checks: BTreeMap<String, bool>, results: impl Serialize) -> Result<Summary, CliError> {
        self.summary(None, checks, results)
    }

    /// Flushes what was computed before `err`, then returns `err`.
    pub fn fail<T>(&mut self, err: CliError, partial: impl Serialize) -> Result<T, CliError> {
        self.summary(Some(err.to_string()), BTreeMap::new(), partial)?;
        Err(err)
    }
}
