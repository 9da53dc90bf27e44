//! Result tables and their CSV, markdown and JSON renderings.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};

/// Significant digits for every printed real number.
pub const SIG_DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Real(f64),
    /// Mean and sample standard deviation; NaN when there are no samples.
    MeanStd(f64, f64),
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Text(t) => s.serialize_str(t),
            Cell::Int(i) => s.serialize_u64(*i),
            Cell::Real(x) => serialize_real(s, *x),
            Cell::MeanStd(m, d) => {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("mean", &Real(*m))?;
                map.serialize_entry("std", &Real(*d))?;
                map.end()
            }
        }
    }
}

struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_real(s, self.0)
    }
}

fn serialize_real<S: Serializer>(s: S, x: f64) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(x)
    } else {
        s.serialize_none()
    }
}

/// Formats `x` with [`SIG_DIGITS`] significant digits; `NA` for NaN.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "NA".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = SIG_DIGITS as i32 - 1 - exp;
    if (0..=12).contains(&decimals) {
        let s = format!("{:.*}", decimals as usize, x);
        // rounding can carry into a new leading digit (9.999995 -> 10.00000)
        let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
        let significant = digits.trim_start_matches('0').len();
        if significant > SIG_DIGITS && decimals > 0 {
            format!("{:.*}", decimals as usize - 1, x)
        } else {
            s
        }
    } else {
        format!("{:.*e}", SIG_DIGITS - 1, x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, title: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn is_mean_std(&self, col: usize) -> bool {
        self.rows
            .first()
            .is_some_and(|r| matches!(r[col], Cell::MeanStd(..)))
    }

    /// CSV header: a leading `table` column, then one column per cell with
    /// mean/std cells split into `<name>` and `<name>_std`.
    pub fn csv_header(&self) -> Vec<String> {
        let mut out = vec!["table".to_string()];
        for (i, h) in self.header.iter().enumerate() {
            out.push(h.clone());
            if self.is_mean_std(i) {
                out.push(format!("{h}_std"));
            }
        }
        out
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Input(format!("csv output: {e}"));
        wr.write_record(self.csv_header()).map_err(io)?;
        for row in &self.rows {
            let mut rec = vec![self.name.clone()];
            for cell in row {
                match cell {
                    Cell::Text(t) => rec.push(t.clone()),
                    Cell::Int(i) => rec.push(i.to_string()),
                    Cell::Real(x) => rec.push(fmt_sig(*x)),
                    Cell::MeanStd(m, d) => {
                        rec.push(fmt_sig(*m));
                        rec.push(fmt_sig(*d));
                    }
                }
            }
            wr.write_record(&rec).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Input(format!("csv output: {e}")))?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("### {}\n\n", self.title);
        s.push_str(&format!("| {} |\n", self.header.join(" | ")));
        s.push_str(&format!("|{}\n", "---|".repeat(self.header.len())));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(t) => t.clone(),
                    Cell::Int(i) => i.to_string(),
                    Cell::Real(x) => fmt_sig(*x),
                    Cell::MeanStd(m, d) => format!("{} ({})", fmt_sig(*m), fmt_sig(*d)),
                })
                .collect();
            s.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        s
    }
}

/// Tables of one run; CSV output separates tables by a blank line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub example: String,
    pub trials: usize,
    pub seed: u64,
    /// Oracle containment checks performed and passed.
    pub checks: u64,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn to_csv(&self) -> String {
        self.tables
            .iter()
            .map(Table::to_csv)
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "## {} ({} trials, seed {}, {} oracle checks passed)\n\n",
            self.example, self.trials, self.seed, self.checks
        );
        for t in &self.tables {
            s.push_str(&t.to_markdown());
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}
