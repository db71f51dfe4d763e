//! Output records and their JSON-lines / CSV rendering.

use std::collections::BTreeMap;
use std::io::Write;

use qcayley_core::scalar::{fmt_decimal, fmt_rational, Interval, Rational};
use serde::Serialize;

use crate::config::Format;

/// Exact values whose numerator and denominator fit in this many digits are
/// printed as fractions; larger ones as directed decimals.
const EXACT_DIGITS: usize = 30;
const DECIMAL_DIGITS: u32 = 20;

pub const RECORD_HEADER: [&str; 8] = ["cmd", "spec", "params", "quantity", "value_lo", "value_hi", "tail", "anchor"];

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub cmd: String,
    pub spec: String,
    pub params: BTreeMap<String, String>,
    pub quantity: String,
    pub value_lo: String,
    pub value_hi: String,
    pub tail: Option<String>,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

impl Record {
    pub fn new(cmd: &str, spec: &str, quantity: &str, anchor: &str) -> Record {
        Record {
            cmd: cmd.into(),
            spec: spec.into(),
            params: BTreeMap::new(),
            quantity: quantity.into(),
            value_lo: String::new(),
            value_hi: String::new(),
            tail: None,
            anchor: anchor.into(),
            status: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Record {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn exact(mut self, q: &Rational) -> Record {
        self.value_lo = fmt_lo(q);
        self.value_hi = fmt_hi(q);
        self
    }

    pub fn interval(mut self, iv: &Interval) -> Record {
        self.value_lo = fmt_lo(iv.lo());
        self.value_hi = fmt_hi(iv.hi());
        self
    }

    pub fn float(mut self, x: f64) -> Record {
        self.value_lo = format!("{x:.17e}");
        self.value_hi = self.value_lo.clone();
        self
    }

    pub fn text(mut self, v: impl ToString) -> Record {
        self.value_lo = v.to_string();
        self.value_hi = self.value_lo.clone();
        self
    }

    pub fn tail(mut self, t: &Rational) -> Record {
        self.tail = Some(fmt_hi(t));
        self
    }

    pub fn status(mut self, passed: bool) -> Record {
        self.status = Some(if passed { "pass" } else { "fail" }.into());
        self
    }

    fn params_cell(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

fn small(q: &Rational) -> bool {
    q.numer().to_string().len() <= EXACT_DIGITS && q.denom().to_string().len() <= EXACT_DIGITS
}

/// Lower end: exact when short, else rounded down.
pub fn fmt_lo(q: &Rational) -> String {
    if small(q) {
        fmt_rational(q)
    } else {
        fmt_decimal(q, DECIMAL_DIGITS, false)
    }
}

/// Upper end: exact when short, else rounded up.
pub fn fmt_hi(q: &Rational) -> String {
    if small(q) {
        fmt_rational(q)
    } else {
        fmt_decimal(q, DECIMAL_DIGITS, true)
    }
}

/// What a command hands back: either generic records or a command-specific
/// table with its own fixed header.
pub enum Output {
    Records(Vec<Record>),
    /// JSON objects, one per line; CSV `header` + `rows`.
    Table {
        json: Vec<serde_json::Value>,
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

pub fn emit(out: &mut dyn Write, format: Format, output: &Output) -> std::io::Result<()> {
    match (format, output) {
        (Format::Json, Output::Records(records)) => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r).expect("records serialize"))?;
            }
        }
        (Format::Json, Output::Table { json, .. }) => {
            for v in json {
                writeln!(out, "{v}")?;
            }
        }
        (Format::Csv, Output::Records(records)) => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(RECORD_HEADER)?;
            for r in records {
                w.write_record([
                    r.cmd.as_str(),
                    &r.spec,
                    &r.params_cell(),
                    &r.quantity,
                    &r.value_lo,
                    &r.value_hi,
                    r.tail.as_deref().unwrap_or(""),
                    &r.anchor,
                ])?;
            }
            w.flush()?;
        }
        (Format::Csv, Output::Table { header, rows, .. }) => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
