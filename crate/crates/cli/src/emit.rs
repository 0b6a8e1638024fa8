//! Delimited tables and the metadata sidecar written for every experiment.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{CliError, Result};
use crate::spec::ExperimentSpec;

/// Version string recorded in every metadata file.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const METADATA_FILE: &str = "metadata.jsonl";
pub const SPEC_FILE: &str = "spec.conf";

/// Sixteen significant digits in scientific notation; negative zero is
/// written as zero.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.15e}")
}

/// A table of preformatted cells with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Appends a row of numbers.
    pub fn push(&mut self, row: &[f64]) {
        self.push_cells(row.iter().map(|&x| num(x)).collect());
    }

    pub fn push_cells(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, delimiter: char) -> String {
        let sep = delimiter.to_string();
        let mut out = self.columns.join(&sep);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(&sep));
            out.push('\n');
        }
        out
    }
}

/// Everything a command produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub tables: Vec<Table>,
    /// Derived scalars recorded in the metadata sidecar.
    pub result: serde_json::Value,
    /// Short human-readable lines printed after the run.
    pub notes: Vec<String>,
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes the tables, `metadata.jsonl` and `spec.conf` into the spec's
/// output directory and returns the paths written.
pub fn emit(outputs: &Outputs, spec: &ExperimentSpec) -> Result<Vec<PathBuf>> {
    let dir = &spec.output;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let ext = spec.format.name();
    let mut written = Vec::new();
    let mut meta = vec![json!({
        "record": "spec",
        "version": ARTIFACT_VERSION,
        "command": spec.command.name(),
        "format": ext,
        "parameters": spec.parameters_json(),
    })
    .to_string()];
    meta.push(json!({ "record": "result", "values": outputs.result }).to_string());
    for table in &outputs.tables {
        let file = format!("{}.{ext}", table.name);
        let path = dir.join(&file);
        write(&path, &table.render(spec.format.delimiter()))?;
        meta.push(
            json!({
                "record": "table",
                "file": file,
                "columns": table.columns,
                "rows": table.rows.len(),
            })
            .to_string(),
        );
        written.push(path);
    }
    let path = dir.join(METADATA_FILE);
    write(&path, &(meta.join("\n") + "\n"))?;
    written.push(path);
    let path = dir.join(SPEC_FILE);
    write(&path, &spec.to_config())?;
    written.push(path);
    Ok(written)
}
