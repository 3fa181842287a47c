//! Reading inputs, writing outputs, and mapping failures to exit codes.

use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context as _};
use apg_core::format::{read_graph, read_morphism_maps, schema_from_json};
use apg_core::migrate::{read_mapping, SchemaMapping};
use apg_core::morphism::check_morphism;
use apg_core::{validate_graph, Graph, Morphism, Schema, ValidationReport};
use serde_json::Value as Json;

/// A failed command: its exit code and what went wrong.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub const INVALID: u8 = 1;
pub const USAGE: u8 = 2;

impl Failure {
    pub fn invalid(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: INVALID,
            error: error.into(),
        }
    }

    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: USAGE,
            error: error.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

/// Turns I/O and parse errors into usage failures with some context.
pub trait OrUsage<T> {
    fn or_usage(self, context: impl Display) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> OrUsage<T> for Result<T, E> {
    fn or_usage(self, context: impl Display) -> Outcome<T> {
        self.map_err(|e| Failure::usage(e.into().context(context.to_string())))
    }
}

pub fn name(path: &Path) -> String {
    if is_stdio(path) {
        "<stdin>".into()
    } else {
        path.display().to_string()
    }
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

pub fn read_text(path: &Path) -> Outcome<String> {
    let mut text = String::new();
    if is_stdio(path) {
        std::io::stdin()
            .read_to_string(&mut text)
            .or_usage("cannot read standard input")?;
    } else {
        text = std::fs::read_to_string(path).or_usage(format!("cannot read {}", path.display()))?;
    }
    Ok(text)
}

pub fn write_text(path: &Path, text: &str) -> Outcome {
    if is_stdio(path) {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .or_usage("cannot write standard output")
    } else {
        std::fs::write(path, text).or_usage(format!("cannot write {}", path.display()))
    }
}

/// Prints the findings to the error stream and fails with the validation
/// exit code.
pub fn reject(what: impl Display, report: &ValidationReport) -> Failure {
    for finding in &report.findings {
        eprintln!("{what}: {finding}");
    }
    let n = report.len();
    Failure::invalid(anyhow!(
        "{what} is invalid ({n} finding{})",
        if n == 1 { "" } else { "s" }
    ))
}

/// Input handling shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct Inputs {
    pub validate: bool,
}

impl Inputs {
    pub fn graph(&self, path: &Path) -> Outcome<Arc<Graph>> {
        let g =
            read_graph(&read_text(path)?).or_usage(format!("cannot parse graph {}", name(path)))?;
        if self.validate {
            let report = validate_graph(&g);
            if !report.is_empty() {
                return Err(reject(name(path), &report));
            }
        }
        Ok(Arc::new(g))
    }

    /// A morphism file read against explicit source and target graphs.
    pub fn morphism(
        &self,
        path: &Path,
        source: &Arc<Graph>,
        target: &Arc<Graph>,
    ) -> Outcome<Morphism> {
        let maps = read_morphism_maps(&read_text(path)?)
            .or_usage(format!("cannot parse morphism {}", name(path)))?;
        let m = Morphism::from_maps(source.clone(), target.clone(), maps);
        if self.validate {
            let report = check_morphism(&m);
            if !report.is_empty() {
                return Err(reject(name(path), &report));
            }
        }
        Ok(m)
    }

    pub fn mapping(&self, path: &Path) -> Outcome<SchemaMapping> {
        read_mapping(&read_text(path)?).or_usage(format!("cannot parse mapping {}", name(path)))
    }
}

/// The schema of a graph document, or a schema document on its own.
pub fn read_schema(path: &Path) -> Outcome<Schema> {
    let text = read_text(path)?;
    let context = || format!("cannot parse schema {}", name(path));
    let j: Json = serde_json::from_str(&text).or_usage(context())?;
    if j.get("elements").is_some() {
        return Ok(read_graph(&text).or_usage(context())?.schema().clone());
    }
    schema_from_json(&j).or_usage(context())
}

pub fn output_path(output: &Option<PathBuf>) -> PathBuf {
    output.clone().unwrap_or_else(|| PathBuf::from("-"))
}

pub fn ensure_dir(dir: &Path) -> Outcome {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create {}", dir.display()))
        .map_err(Failure::usage)
}
