//! Run reports: scalar results, pass/fail flags and tabular plot data,
//! emitted as CSV files plus a TOML summary. Everything written is a
//! pure function of (config, seed), so re-runs are byte-identical.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct Table {
    /// File stem; written as `<name>.csv`.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub scalars: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
    pub tables: Vec<Table>,
}

impl ExperimentOutput {
    pub fn scalar(&mut self, key: &str, value: f64) {
        self.scalars.insert(key.to_string(), value);
    }

    pub fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.to_string(), ok);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub experiment: String,
    pub output: ExperimentOutput,
    pub files: Vec<PathBuf>,
}

fn fmt_float(v: f64) -> String {
    // full round-trip precision, locale-independent
    format!("{v:?}")
}

/// Write CSV tables and the structured summary into `dir`.
pub fn emit_report(
    config: &RunConfig,
    output: &ExperimentOutput,
    dir: &Path,
) -> Result<RunReport, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    let mut files = Vec::new();

    for table in &output.tables {
        let path = dir.join(format!("{}.csv", table.name));
        let mut text = String::new();
        text.push_str(&table.columns.join(","));
        text.push('\n');
        for row in &table.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        write_file(&path, &text)?;
        files.push(path);
    }

    let summary_path = dir.join("summary.toml");
    let summary = render_summary(config, output, &files)?;
    write_file(&summary_path, &summary)?;
    files.push(summary_path);

    Ok(RunReport {
        experiment: config.experiment.clone(),
        output: output.clone(),
        files,
    })
}

fn render_summary(
    config: &RunConfig,
    output: &ExperimentOutput,
    files: &[PathBuf],
) -> Result<String, CliError> {
    let mut doc = toml::Table::new();
    doc.insert("experiment".into(), toml::Value::String(config.experiment.clone()));
    doc.insert("seed".into(), toml::Value::Integer(config.seed as i64));

    let config_echo = toml::Table::try_from(config)
        .map_err(|e| CliError::Config(format!("config echo failed: {e}")))?;
    doc.insert("config".into(), toml::Value::Table(config_echo));

    let mut scalars = toml::Table::new();
    for (k, &v) in &output.scalars {
        scalars.insert(k.clone(), toml::Value::Float(v));
    }
    doc.insert("results".into(), toml::Value::Table(scalars));

    let mut checks = toml::Table::new();
    for (k, &v) in &output.checks {
        checks.insert(k.clone(), toml::Value::Boolean(v));
    }
    doc.insert("checks".into(), toml::Value::Table(checks));
    doc.insert(
        "passed".into(),
        toml::Value::Boolean(output.all_passed()),
    );

    let manifest: Vec<toml::Value> = files
        .iter()
        .filter_map(|p| p.file_name())
        .map(|n| toml::Value::String(n.to_string_lossy().into_owned()))
        .collect();
    doc.insert("files".into(), toml::Value::Array(manifest));

    toml::to_string_pretty(&doc).map_err(|e| CliError::Config(format!("summary render: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}
