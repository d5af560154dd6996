//! Schema-versioned verification reports with stable field order.
//!
//! Maps are ordered (`BTreeMap`) and floats use shortest round-trip decimal
//! encoding, so serializing a report twice yields identical bytes. Non-finite
//! values are encoded as the strings `"inf"`, `"-inf"` and `"nan"`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;

pub const SCHEMA: &str = "gromov-lab/1";

/// A real number that survives JSON round trips even when infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            s.serialize_f64(x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RealVisitor;
        impl Visitor<'_> for RealVisitor {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                match v {
                    "inf" => Ok(Real(f64::INFINITY)),
                    "-inf" => Ok(Real(f64::NEG_INFINITY)),
                    "nan" => Ok(Real(f64::NAN)),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }
        d.deserialize_any(RealVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Combination for composite reports: any failure fails, otherwise any
    /// inconclusive part makes the whole inconclusive.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub vertices: Vec<usize>,
    pub values: Vec<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Real>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().copied().map(Real).collect());
    }

    /// CSV rendering with a header row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| render_cell(x.0)).collect();
            w.write_record(&cells).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::LabError::Data(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn render_cell(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        serde_json::to_value(Real(x))
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }
}

fn csv_err(e: csv::Error) -> crate::LabError {
    crate::LabError::Data(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub config_hash: String,
    pub input_hashes: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub schema: String,
    pub check: String,
    /// Names the statement being checked.
    pub anchor: String,
    pub status: Status,
    pub measured: BTreeMap<String, Real>,
    pub predicted: BTreeMap<String, Real>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
    pub sections: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provenance: Option<Provenance>,
}

impl VerificationReport {
    pub fn new(check: &str, anchor: &str, status: Status) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            check: check.to_string(),
            anchor: anchor.to_string(),
            status,
            measured: BTreeMap::new(),
            predicted: BTreeMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            tables: Vec::new(),
            sections: Vec::new(),
            provenance: None,
        }
    }

    /// Composite report whose status combines its sections.
    pub fn composite(check: &str, anchor: &str, sections: Vec<VerificationReport>) -> Self {
        let status = sections
            .iter()
            .fold(Status::Pass, |acc, s| acc.combine(s.status));
        let mut r = Self::new(check, anchor, status);
        r.sections = sections;
        r
    }

    pub fn measure(mut self, key: &str, value: f64) -> Self {
        self.measured.insert(key.to_string(), Real(value));
        self
    }

    pub fn predict(mut self, key: &str, value: f64) -> Self {
        self.predicted.insert(key.to_string(), Real(value));
        self
    }

    pub fn witness(mut self, label: &str, vertices: Vec<usize>, values: Vec<f64>) -> Self {
        self.witnesses.push(Witness {
            label: label.to_string(),
            vertices,
            values: values.into_iter().map(Real).collect(),
        });
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.tables.push(table);
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn measured(&self, key: &str) -> Option<f64> {
        self.measured.get(key).map(|r| r.0)
    }

    pub fn predicted(&self, key: &str) -> Option<f64> {
        self.predicted.get(key).map(|r| r.0)
    }

    /// Status of this report and every nested section.
    pub fn overall(&self) -> Status {
        self.sections
            .iter()
            .fold(self.status, |acc, s| acc.combine(s.overall()))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// All tables of this report and its sections, depth first.
    pub fn all_tables(&self) -> Vec<&Table> {
        let mut out: Vec<&Table> = self.tables.iter().collect();
        for s in &self.sections {
            out.extend(s.all_tables());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut t = Table::new("perScale", &["radius", "center", "ratio"]);
        t.push(&[0.5, 3.0, 2.25]);
        t.push(&[1.0, 1.0, f64::INFINITY]);
        VerificationReport::new("doubling", "doubling/definition", Status::Pass)
            .measure("Cd", 0.1 + 0.2)
            .measure("unbounded", f64::INFINITY)
            .predict("bound", 1e300)
            .witness("worst", vec![1, 2], vec![1.5])
            .note("exhaustive radii")
            .table(t)
    }

    #[test]
    fn serialization_is_byte_stable() {
        let r = sample();
        let a = r.to_json().unwrap();
        let back = VerificationReport::from_json(&a).unwrap();
        assert_eq!(a, back.to_json().unwrap());
        assert!(a.contains("\"schema\": \"gromov-lab/1\""));
        assert_eq!(back.measured("Cd"), Some(0.1 + 0.2));
        assert_eq!(back.measured("unbounded"), Some(f64::INFINITY));
    }

    #[test]
    fn csv_row_count_matches_table() {
        let r = sample();
        let csv = r.tables[0].to_csv().unwrap();
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(rd.records().count(), r.tables[0].rows.len());
        assert!(csv.contains("inf"));
    }

    #[test]
    fn composite_status() {
        let pass = VerificationReport::new("a", "x", Status::Pass);
        let fail = VerificationReport::new("b", "y", Status::Fail);
        let c = VerificationReport::composite("c", "z", vec![pass.clone(), fail]);
        assert_eq!(c.status, Status::Fail);
        assert_eq!(VerificationReport::composite("c", "z", vec![pass]).status, Status::Pass);
    }
}
