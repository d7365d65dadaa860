//! Input parsing and result emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tomosym::io::{format_float, MatrixDoc, TomogramDoc};
use tomosym::{CMatrix, Tomogram};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rendered result plus human-readable lines describing it.
pub struct Report {
    pub body: String,
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(body: String) -> Self {
        Report { body, summary: Vec::new() }
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.summary.push(s.into());
        self
    }
}

/// Sends the body to `out` (atomically) or stdout; the summary goes to
/// stdout when a file is written and to stderr otherwise.
pub fn emit(report: &Report, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            write_atomic(path, report.body.as_bytes())?;
            for l in &report.summary {
                println!("{l}");
            }
        }
        None => {
            print!("{}", report.body);
            for l in &report.summary {
                eprintln!("{l}");
            }
        }
    }
    Ok(())
}

/// Writes through a temporary file in the target directory, so a failed run
/// never leaves a truncated file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let err = |source| CliError::Output { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let input = |e: tomosym::Error| CliError::Input { path: path.to_path_buf(), source: e };
    let text = fs::read_to_string(path).map_err(|e| input(e.into()))?;
    serde_json::from_str(&text).map_err(|e| input(e.into()))
}

/// Applies a validating conversion to a parsed document, blaming the file.
pub fn from_file<D: DeserializeOwned, T>(
    path: &Path,
    convert: impl FnOnce(D) -> tomosym::Result<T>,
) -> CliResult<T> {
    convert(read_json(path)?).map_err(|e| CliError::Input { path: PathBuf::from(path), source: e })
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(tomosym::Error::from)?;
    s.push('\n');
    Ok(s)
}

pub fn tomogram_body(t: &Tomogram, format: Format) -> CliResult<String> {
    match format {
        Format::Json => to_json(&TomogramDoc::from_tomogram(t)),
        Format::Csv => {
            // Imaginary columns only for symbols of non-Hermitian operators.
            let doc = TomogramDoc::from_tomogram(t);
            let has_im = doc.values_im.is_some();
            let mut s = String::from("frame");
            for o in &doc.outcomes {
                s.push_str(&format!(",w_{o}"));
            }
            if has_im {
                for o in &doc.outcomes {
                    s.push_str(&format!(",im_{o}"));
                }
            }
            s.push('\n');
            for f in 0..t.n_frames() {
                s.push_str(&f.to_string());
                let parts: &[fn(&tomosym::C64) -> f64] = if has_im { &[|z| z.re, |z| z.im] } else { &[|z| z.re] };
                for part in parts {
                    for o in 0..t.n_outcomes() {
                        s.push(',');
                        s.push_str(&format_float(part(&t.observable_symbol(o, f))));
                    }
                }
                s.push('\n');
            }
            Ok(s)
        }
    }
}

pub fn matrix_body(m: &CMatrix, dims: Option<Vec<usize>>, format: Format) -> CliResult<String> {
    match format {
        Format::Json => to_json(&MatrixDoc::from_matrix(m, dims)),
        Format::Csv => {
            let mut s = String::from("row,col,re,im\n");
            for r in 0..m.rows() {
                for (c, z) in m.row(r).iter().enumerate() {
                    s.push_str(&format!("{r},{c},{},{}\n", format_float(z.re), format_float(z.im)));
                }
            }
            Ok(s)
        }
    }
}

/// CSV with a header and already formatted cells.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}
