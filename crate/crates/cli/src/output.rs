use std::fs;
use std::io::Write;

use serde_json::{json, Value};
use thiserror::Error;

use crate::{Common, Format};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<cvgauss::Error> for Failure {
    fn from(err: cvgauss::Error) -> Self {
        use cvgauss::Error as E;
        match err {
            E::InvalidState(_) | E::LuboCondition { .. } | E::Numerical(_) => Failure::Compute(err.to_string()),
            E::InvalidArgument(_)
            | E::DimensionMismatch { .. }
            | E::ModeOutOfRange { .. }
            | E::Parse { .. }
            | E::NonGaussianGate(_)
            | E::UnsupportedGate { .. } => Failure::Usage(err.to_string()),
        }
    }
}

/// Rows for CSV output, with a fixed header per command.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| v.to_string()).collect());
    }

    pub fn push_text(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything a command produces; which part is written depends on
/// `--format`.
#[derive(Debug)]
pub struct Document {
    pub json: Value,
    pub table: Option<Table>,
}

pub fn envelope(command: &str, common: &Common, params: Value, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "seed": common.seed,
        "params": params,
        "result": result,
    })
}

pub fn emit(common: &Common, doc: &Document) -> Result<(), Failure> {
    let bytes = match common.format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&doc.json).expect("JSON values serialise");
            text.push('\n');
            text.into_bytes()
        }
        Format::Csv => {
            let table = doc
                .table
                .as_ref()
                .ok_or_else(|| Failure::Usage("this command has no CSV form".into()))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::Compute(e.to_string());
            w.write_record(&table.header).map_err(io)?;
            for row in &table.rows {
                w.write_record(row).map_err(io)?;
            }
            w.into_inner().map_err(|e| Failure::Compute(e.to_string()))?
        }
    };
    match &common.out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure::Compute(e.to_string())),
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// `name:lo:hi:steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn parse(spec: &str) -> Result<Self, Failure> {
        let bad = || Failure::Usage(format!("sweep `{spec}` is not of the form name:lo:hi:steps"));
        let parts: Vec<&str> = spec.split(':').collect();
        let [param, lo, hi, steps] = parts[..] else {
            return Err(bad());
        };
        let lo: f64 = lo.parse().map_err(|_| bad())?;
        let hi: f64 = hi.parse().map_err(|_| bad())?;
        let steps: usize = steps.parse().map_err(|_| bad())?;
        if steps == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        let values = if steps == 1 {
            vec![lo]
        } else {
            (0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect()
        };
        Ok(Self {
            param: param.to_string(),
            values,
        })
    }

    /// Parses `--sweep` if given and checks it targets one of `allowed`.
    pub fn from_common(common: &Common, allowed: &[&str]) -> Result<Option<Self>, Failure> {
        let Some(spec) = &common.sweep else {
            return Ok(None);
        };
        let sweep = Self::parse(spec)?;
        if !allowed.contains(&sweep.param.as_str()) {
            return Err(Failure::Usage(format!(
                "cannot sweep `{}` here; sweepable: {}",
                sweep.param,
                allowed.join(", ")
            )));
        }
        Ok(Some(sweep))
    }
}
