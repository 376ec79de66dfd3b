//! CSV matrices and JSON spectrum documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chains::TransitionMatrix;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::numerics::{format_rational, parse_rational, Rational, Scalar};

/// Textual form of one matrix entry.
pub trait Cell: Scalar {
    fn format_cell(&self) -> String;
    fn parse_cell(s: &str) -> Result<Self>;
}

impl Cell for Rational {
    fn format_cell(&self) -> String {
        format_rational(self)
    }

    fn parse_cell(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl Cell for f64 {
    /// shortest decimal that reads back to the same bits
    fn format_cell(&self) -> String {
        format!("{self:?}")
    }

    fn parse_cell(s: &str) -> Result<Self> {
        s.trim().parse().map_err(|_| Error::Parse(format!("not a float: {s:?}")))
    }
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Rows are x, columns are y; the header carries the y indices.
pub fn matrix_to_csv<S: Cell>(m: &TransitionMatrix<S>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["x\\y".to_string()];
    header.extend((0..m.dim()).map(|y| y.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for x in 0..m.dim() {
        let mut row = vec![x.to_string()];
        row.extend((0..m.dim()).map(|y| m.get(x, y).format_cell()));
        w.write_record(&row).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

pub fn matrix_from_csv<S: Cell>(text: &str) -> Result<TransitionMatrix<S>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?.clone();
    let dim = header.len().saturating_sub(1);
    for (i, h) in header.iter().skip(1).enumerate() {
        if h != i.to_string() {
            return Err(Error::Parse(format!("header column {i} is {h:?}")));
        }
    }
    let mut rows = Vec::with_capacity(dim);
    for (x, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.get(0) != Some(x.to_string().as_str()) || rec.len() != dim + 1 {
            return Err(Error::Parse(format!("malformed row {x}")));
        }
        rows.push(rec.iter().skip(1).map(S::parse_cell).collect::<Result<Vec<S>>>()?);
    }
    TransitionMatrix::from_rows(&rows)
}

/// Two columns, x and value.
pub fn vector_to_csv<S: Cell>(v: &[S]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "value"]).map_err(csv_err)?;
    for (x, p) in v.iter().enumerate() {
        w.write_record([x.to_string(), p.format_cell()]).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

pub fn vector_from_csv<S: Cell>(text: &str) -> Result<Vec<S>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .enumerate()
        .map(|(x, rec)| {
            let rec = rec.map_err(csv_err)?;
            match (rec.get(0), rec.get(1)) {
                (Some(i), Some(v)) if i == x.to_string() => S::parse_cell(v),
                _ => Err(Error::Parse(format!("malformed row {x}"))),
            }
        })
        .collect()
}

/// One named check with its outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaDoc {
    pub family: String,
    pub params: BTreeMap<String, String>,
}

impl LambdaDoc {
    pub fn from_family<S: Cell>(f: &Family<S>) -> Self {
        LambdaDoc {
            family: f.id().name().to_string(),
            params: f.params().into_iter().map(|(k, v)| (k.to_string(), v.format_cell())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDoc {
    pub case: String,
    pub params: BTreeMap<String, String>,
    pub lambda: LambdaDoc,
    pub kappa: Vec<String>,
    pub provenance: String,
    pub checks: Vec<Check>,
}

impl SpectrumDoc {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn kappa_values<S: Cell>(&self) -> Result<Vec<S>> {
        self.kappa.iter().map(|k| S::parse_cell(k)).collect()
    }
}
