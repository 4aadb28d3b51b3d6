use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::args::{Common, Format};
use crate::CliError;

/// Run metadata written into every output file.
pub struct Provenance {
    pub command_line: String,
    pub seed: Option<u64>,
    pub tol: f64,
    pub tol_c: f64,
}

impl Provenance {
    fn header(&self) -> String {
        let seed = self
            .seed
            .map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "# entopo {}\n# command: {}\n# seed: {seed}\n# tolerances: positivity={:e} concurrence={:e}\n",
            env!("CARGO_PKG_VERSION"),
            self.command_line,
            self.tol,
            self.tol_c
        )
    }

    fn json(&self) -> Value {
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command_line,
            "seed": self.seed,
            "tolerances": { "positivity": self.tol, "concurrence": self.tol_c },
        })
    }
}

/// Floats are written with 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, prov: &Provenance) -> Result<Vec<u8>, CliError> {
        let mut buf = prov.header().into_bytes();
        {
            let mut w = csv::WriterBuilder::new()
                .flexible(false)
                .from_writer(&mut buf);
            w.write_record(&self.columns)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            for r in &self.rows {
                w.write_record(r)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
        }
        Ok(buf)
    }
}

fn render_json(mut body: Value, prov: &Provenance) -> Result<Vec<u8>, CliError> {
    if let Value::Object(m) = &mut body {
        m.insert("provenance".into(), prov.json());
    }
    let mut s =
        serde_json::to_string_pretty(&body).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn with_ext(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Write a command's outputs: both files under --out, otherwise the one
/// selected by --format to stdout.
pub fn emit(
    common: &Common,
    prov: &Provenance,
    table: Option<&Table>,
    summary: Option<Value>,
) -> Result<(), CliError> {
    match &common.out {
        Some(base) => {
            if let Some(t) = table {
                write_file(&with_ext(base, "csv"), &t.render(prov)?)?;
            }
            if let Some(s) = summary {
                write_file(&with_ext(base, "json"), &render_json(s, prov)?)?;
            }
        }
        None => {
            let bytes = match (common.format.unwrap_or_default(), table, summary) {
                (Format::Csv, Some(t), _) => t.render(prov)?,
                (_, _, Some(s)) => render_json(s, prov)?,
                (Format::Json, Some(_), None) => {
                    return Err(CliError::Usage(
                        "this command has no JSON output; use --format csv".into(),
                    ))
                }
                (_, None, None) => Vec::new(),
            };
            std::io::stdout()
                .lock()
                .write_all(&bytes)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}
