use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gromov_lab::io::GraphDocument;
use gromov_lab::report::{Provenance, Table};
use gromov_lab::{Status, VerificationReport};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::CliError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(contents.as_bytes()).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

/// Input graph files, remembered with their hashes for provenance.
#[derive(Default)]
pub struct Inputs {
    hashes: Vec<String>,
}

impl Inputs {
    pub fn graph(&mut self, path: &Path) -> Result<GraphDocument, CliError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        self.hashes.push(hex::encode(Sha256::digest(text.as_bytes())));
        GraphDocument::from_json(&text).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn provenance(&self, cfg: &Config) -> Provenance {
        Provenance {
            config_hash: cfg.hash(),
            input_hashes: self.hashes.clone(),
            seed: cfg.seed,
        }
    }
}

/// Attaches provenance, writes the report (stdout when no path is given) and
/// its tables as CSV, and returns its overall status.
pub fn emit_report(
    mut report: VerificationReport,
    out: Option<&Path>,
    csv_dir: Option<&Path>,
    provenance: Provenance,
) -> Result<Status, CliError> {
    report.provenance = Some(provenance);
    let json = report.to_json()?;
    match out {
        Some(path) => write_atomic(path, &json)?,
        None => print!("{json}"),
    }
    if let Some(dir) = csv_dir {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        for (name, table) in table_files(&report) {
            write_atomic(&dir.join(name), &table.to_csv()?)?;
        }
    }
    Ok(report.overall())
}

/// `<check>-<table>.csv`, numbered when names repeat.
fn table_files(report: &VerificationReport) -> Vec<(PathBuf, &Table)> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    report
        .all_tables()
        .into_iter()
        .map(|t| {
            let stem = format!("{}-{}", report.check, t.name);
            let n = seen.entry(stem.clone()).or_insert(0);
            *n += 1;
            let name = if *n == 1 { format!("{stem}.csv") } else { format!("{stem}-{n}.csv") };
            (PathBuf::from(name), t)
        })
        .collect()
}

/// `vertex,value` rows.
pub fn function_csv(values: &[f64]) -> Result<String, CliError> {
    let mut t = Table::new("function", &["vertex", "value"]);
    for (v, &x) in values.iter().enumerate() {
        t.push(&[v as f64, x]);
    }
    Ok(t.to_csv()?)
}
