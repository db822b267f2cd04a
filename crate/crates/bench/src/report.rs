//! Experiment result tables and their CSV / JSON encodings.
//!
//! CSV layout: metadata lines `# key: value` (experiment, seed, timestamp,
//! then one `# param.<name>: <value>` per parameter), a header row whose
//! first cell is the sweep column name, then one line per row. Floats are
//! written with 17 significant digits so every value reads back exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(BenchError::Usage(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    #[serde(with = "lossless")]
    pub sweep: f64,
    #[serde(with = "lossless_vec")]
    pub values: Vec<f64>,
}

/// One experiment's output table.
///
/// Every row carries one value per entry of `columns`. Columns whose names
/// end in `seconds` hold wall-clock timings and are the only fields allowed
/// to differ between two runs with the same configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub timestamp: String,
    pub parameters: BTreeMap<String, String>,
    pub sweep_name: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64, sweep_name: &str, columns: &[&str]) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            parameters: BTreeMap::new(),
            sweep_name: sweep_name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push_row(&mut self, sweep: f64, values: Vec<f64>) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(BenchError::Data(format!(
                "row has {} values for {} columns",
                values.len(),
                self.columns.len()
            )));
        }
        self.rows.push(ReportRow { sweep, values });
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[j]).collect())
    }

    pub fn sweep_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.sweep).collect()
    }

    pub fn is_timing_column(name: &str) -> bool {
        name.ends_with("seconds")
    }

    /// Rows with timing columns removed, as raw bit patterns.
    pub fn deterministic_content(&self) -> Vec<Vec<u64>> {
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&j| !Self::is_timing_column(&self.columns[j]))
            .collect();
        self.rows
            .iter()
            .map(|r| {
                std::iter::once(r.sweep.to_bits())
                    .chain(keep.iter().map(|&j| r.values[j].to_bits()))
                    .collect()
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("# experiment: {}\n", self.experiment));
        out.push_str(&format!("# seed: {}\n", self.seed));
        out.push_str(&format!("# timestamp: {}\n", self.timestamp));
        for (k, v) in &self.parameters {
            if k.contains(':') || k.contains('\n') || v.contains('\n') {
                return Err(BenchError::Data(format!("parameter '{k}' cannot be stored in a CSV header")));
            }
            out.push_str(&format!("# param.{k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let header = std::iter::once(self.sweep_name.as_str()).chain(self.columns.iter().map(String::as_str));
        w.write_record(header).map_err(csv_error)?;
        for row in &self.rows {
            let cells = std::iter::once(row.sweep).chain(row.values.iter().copied()).map(format_float);
            w.write_record(cells).map_err(csv_error)?;
        }
        let body = w.into_inner().map_err(|e| BenchError::Data(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| BenchError::Data(e.to_string()))?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut meta = BTreeMap::new();
        let mut parameters = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim_start();
            let (k, v) = body
                .split_once(": ")
                .or_else(|| body.split_once(':'))
                .ok_or_else(|| BenchError::Data(format!("malformed metadata line '{line}'")))?;
            match k.strip_prefix("param.") {
                Some(p) => parameters.insert(p.to_string(), v.to_string()),
                None => meta.insert(k.to_string(), v.to_string()),
            };
        }
        let need = |k: &str| {
            meta.get(k)
                .cloned()
                .ok_or_else(|| BenchError::Data(format!("report is missing '# {k}:'")))
        };
        let experiment = need("experiment")?;
        let seed = need("seed")?
            .parse()
            .map_err(|e| BenchError::Data(format!("bad seed: {e}")))?;
        let timestamp = need("timestamp")?;

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(csv_error)?.clone();
        let mut names = header.iter();
        let sweep_name = names
            .next()
            .ok_or_else(|| BenchError::Data("report has no header row".into()))?
            .to_string();
        let columns: Vec<String> = names.map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line());
            let mut cells = record.iter().map(|c| {
                c.parse::<f64>()
                    .map_err(|_| BenchError::Data(format!("line {line}: bad number '{c}'")))
            });
            let sweep = cells.next().transpose()?.unwrap_or(f64::NAN);
            let values = cells.collect::<Result<Vec<f64>>>()?;
            if values.len() != columns.len() {
                return Err(BenchError::Data(format!("line {line}: wrong number of cells")));
            }
            rows.push(ReportRow { sweep, values });
        }
        Ok(Self {
            experiment,
            seed,
            timestamp,
            parameters,
            sweep_name,
            columns,
            rows,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| BenchError::Data(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| BenchError::Data(format!("invalid report JSON: {e}")))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json().map(|mut s| {
                s.push('\n');
                s
            }),
        }
    }
}

fn csv_error(e: csv::Error) -> BenchError {
    BenchError::Data(e.to_string())
}

/// 17 significant digits; `inf`, `-inf` and `NaN` for non-finite values.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn save_report(report: &ExperimentReport, path: &Path, format: Format) -> Result<()> {
    fs::write(path, report.render(format)?).map_err(|e| BenchError::io(path, e))
}

/// Loads a report written by [`save_report`]; the format is taken from the
/// file extension (`.json`, anything else is CSV).
pub fn load_report(path: &Path) -> Result<ExperimentReport> {
    let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => ExperimentReport::from_json(&text),
        _ => ExperimentReport::from_csv(&text),
    }
}

/// JSON has no literal for non-finite numbers; they are stored as strings.
mod lossless {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(super) enum Repr {
        Number(f64),
        Text(String),
    }

    pub(super) fn encode(v: f64) -> Repr {
        if v.is_finite() {
            Repr::Number(v)
        } else {
            Repr::Text(v.to_string())
        }
    }

    pub(super) fn decode<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Number(v) => Ok(v),
            Repr::Text(s) => s.parse().map_err(|_| E::custom(format!("bad number '{s}'"))),
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        encode(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        decode(Repr::deserialize(d)?)
    }
}

mod lossless_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::lossless::{decode, encode, Repr};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| encode(*x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(decode).collect()
    }
}
