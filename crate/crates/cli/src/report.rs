//! Machine-readable reports and their json/csv/plain renderings.

use std::collections::{BTreeMap, BTreeSet};

use lucaslp_core::lp::GridSummary;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("report cannot be flattened to csv: {0}")]
    CsvUnrepresentable(String),
    #[error("csv writer: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// One predicted-vs-oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementGroup {
    pub label: String,
    pub checked: u64,
    pub vacuous: u64,
    pub vacuous_mismatches: u64,
    pub disagreements: Vec<Value>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl From<&GridSummary> for AgreementGroup {
    fn from(s: &GridSummary) -> Self {
        AgreementGroup {
            label: s.label.clone(),
            checked: s.cells,
            vacuous: s.vacuous,
            vacuous_mismatches: s.vacuous_mismatches,
            disagreements: s.disagreements.iter().map(to_value).collect(),
            extra: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agreement {
    pub groups: Vec<AgreementGroup>,
    pub total_disagreements: u64,
}

impl Agreement {
    pub fn new(groups: Vec<AgreementGroup>) -> Self {
        let total_disagreements = groups.iter().map(|g| g.disagreements.len() as u64).sum();
        Agreement { groups, total_disagreements }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub verdicts: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<Agreement>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdicts: Vec::new(),
            agreement: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), to_value(&value));
        self
    }

    pub fn push(&mut self, verdict: impl Serialize) {
        self.verdicts.push(to_value(&verdict));
    }
}

pub fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

pub fn format_report(report: &Report, format: Format) -> Result<String, ReportError> {
    match format {
        Format::Json => Ok(to_json(report)),
        Format::Csv => to_csv(report),
        Format::Plain => Ok(to_plain(report)),
    }
}

/// Key-sorted, pretty-printed document terminated by a newline.
fn to_json(report: &Report) -> String {
    // serde_json's default map is ordered, so going through Value sorts every key.
    let value = to_value(report);
    let mut out = serde_json::to_string_pretty(&value).expect("json");
    out.push('\n');
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flattens a verdict into dotted columns. Lists of scalars join with `;`;
/// anything deeper is rejected in strict mode and rendered as compact json
/// otherwise.
fn flatten(prefix: &str, v: &Value, strict: bool, out: &mut BTreeMap<String, String>) -> Result<(), ReportError> {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&key(k), inner, strict, out)?;
            }
        }
        Value::Array(items) => {
            if items.iter().any(|x| x.is_object() || x.is_array()) {
                if strict {
                    return Err(ReportError::CsvUnrepresentable(format!(
                        "field {prefix:?} holds nested records"
                    )));
                }
                out.insert(prefix.to_string(), v.to_string());
            } else {
                let joined: Vec<String> = items.iter().map(scalar_text).collect();
                out.insert(prefix.to_string(), joined.join(";"));
            }
        }
        scalar => {
            let name = if prefix.is_empty() { "value".to_string() } else { prefix.to_string() };
            out.insert(name, scalar_text(scalar));
        }
    }
    Ok(())
}

fn rows(report: &Report, strict: bool) -> Result<(Vec<String>, Vec<BTreeMap<String, String>>), ReportError> {
    let mut flat = Vec::with_capacity(report.verdicts.len());
    for v in &report.verdicts {
        let mut row = BTreeMap::new();
        flatten("", v, strict, &mut row)?;
        flat.push(row);
    }
    let columns: BTreeSet<String> = flat.iter().flat_map(|r| r.keys().cloned()).collect();
    Ok((columns.into_iter().collect(), flat))
}

/// One row per verdict; the agreement summary is not part of the csv.
fn to_csv(report: &Report) -> Result<String, ReportError> {
    let (columns, flat) = rows(report, true)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns)?;
    for row in &flat {
        w.write_record(columns.iter().map(|c| row.get(c).map(String::as_str).unwrap_or("")))?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn table(columns: &[String], rows: &[BTreeMap<String, String>]) -> String {
    let cell = |r: &BTreeMap<String, String>, c: &String| r.get(c).cloned().unwrap_or_else(|| "-".into());
    let widths: Vec<usize> = columns
        .iter()
        .map(|c| rows.iter().map(|r| cell(r, c).chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(columns.to_vec());
    for r in rows {
        out.push_str(&line(columns.iter().map(|c| cell(r, c)).collect()));
    }
    out
}

fn to_plain(report: &Report) -> String {
    let mut out = format!("command: {}\n", report.command);
    if !report.inputs.is_empty() {
        out.push_str("inputs:\n");
        for (k, v) in &report.inputs {
            out.push_str(&format!("  {k} = {}\n", scalar_text(v)));
        }
    }
    let (columns, flat) = rows(report, false).expect("lenient flattening never fails");
    out.push_str(&format!("verdicts ({}):\n", flat.len()));
    if !flat.is_empty() {
        out.push_str(&table(&columns, &flat));
    }
    if let Some(agreement) = &report.agreement {
        out.push_str(&format!(
            "agreement: {} disagreement(s)\n",
            agreement.total_disagreements
        ));
        for g in &agreement.groups {
            out.push_str(&format!(
                "  {}: checked={} vacuous={} vacuous_mismatches={} disagreements={}",
                g.label,
                g.checked,
                g.vacuous,
                g.vacuous_mismatches,
                g.disagreements.len()
            ));
            for (k, v) in &g.extra {
                out.push_str(&format!(" {k}={v}"));
            }
            out.push('\n');
            for d in &g.disagreements {
                out.push_str(&format!("    {d}\n"));
            }
        }
    }
    out
}

/// `Value::Object` builder for ad-hoc verdict rows.
pub fn record<const N: usize>(fields: [(&str, Value); N]) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
