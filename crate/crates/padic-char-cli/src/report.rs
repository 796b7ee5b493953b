//! Tabular reports and their three renderings.
//!
//! Every subcommand produces a [`Report`]: a fixed header, rows of already
//! formatted cells (rationals as `num/den`, magnitudes as `p^q`), and a list of
//! identity failures. Rendering is deterministic; row order is the order in
//! which the rows were produced, which every command keeps sorted by its
//! grid key.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

/// Output format selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// One asserted identity that did not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// When set, the table rendering prints only this cell.
    pub scalar: Option<String>,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Report::default()
        }
    }

    /// A one-row report whose table form is just `value`.
    pub fn scalar(command: &str, columns: &[&str], row: Vec<String>, value: String) -> Self {
        let mut r = Report::new(command, columns);
        r.rows.push(row);
        r.scalar = Some(value);
        r
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Records the comparison `expected == got` for `case`.
    pub fn check(&mut self, case: impl Into<String>, expected: &str, got: &str) -> bool {
        let ok = expected == got;
        if !ok {
            self.failures.push(Failure {
                case: case.into(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
        ok
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Table => self.render_table(out),
            Format::Csv => self.render_csv(out),
            Format::Json => self.render_json(out),
        }
    }

    fn render_table(&self, out: &mut impl Write) -> io::Result<()> {
        if let Some(v) = &self.scalar {
            writeln!(out, "{v}")?;
        } else {
            let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
            for row in &self.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(&self.columns))?;
            for row in &self.rows {
                writeln!(out, "{}", line(row))?;
            }
        }
        for f in &self.failures {
            writeln!(
                out,
                "FAIL {}: expected {}, got {}",
                f.case, f.expected, f.got
            )?;
        }
        Ok(())
    }

    fn render_csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    fn render_json(&self, out: &mut impl Write) -> io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    m.insert(c.clone(), Value::String(v.clone()));
                }
                Value::Object(m)
            })
            .collect();
        let failures: Vec<Value> = self
            .failures
            .iter()
            .map(|f| json!({"case": f.case, "expected": f.expected, "got": f.got}))
            .collect();
        let mut doc = json!({
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
            "ok": self.ok(),
            "failures": failures,
        });
        if let Some(v) = &self.scalar {
            doc["value"] = Value::String(v.clone());
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)
    }
}

/// Concatenates reports (used by `verify all`); columns must agree.
pub fn concat(command: &str, parts: Vec<Report>) -> Report {
    let mut out = Report {
        command: command.to_string(),
        ..Report::default()
    };
    for part in parts {
        if out.columns.is_empty() {
            out.columns = part.columns.clone();
        }
        out.rows.extend(part.rows);
        out.failures.extend(part.failures);
    }
    out
}
