//! Tabular output: CSV with a fixed header, or one JSON object per row.
//!
//! Floats are printed in scientific notation with 9 significant digits so
//! that golden files stay stable.

use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// `{:.8e}`, with non-finite values spelled `inf`, `-inf`, `nan`.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.8e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Summary `(key, value)` pairs emitted after the rows.
    pub footer: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Numeric values of one column; non-numeric cells become `None`.
    pub fn numbers(&self, name: &str) -> Vec<Option<f64>> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Num(v) => Some(v),
                Cell::Int(v) => Some(v as f64),
                _ => None,
            })
            .collect()
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::JsonLines => self.write_jsonl(out),
        }
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        for (key, value) in &self.footer {
            writeln!(out, "# {key}: {}", plain(value))?;
        }
        Ok(())
    }

    pub fn write_jsonl(&self, out: &mut dyn Write) -> io::Result<()> {
        for row in &self.rows {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| format!("{}:{}", json_string(k), json_cell(v)))
                .collect();
            writeln!(out, "{{{}}}", fields.join(","))?;
        }
        if !self.footer.is_empty() {
            let fields: Vec<String> = self
                .footer
                .iter()
                .map(|(k, v)| format!("{}:{}", json_string(k), json_cell(v)))
                .collect();
            writeln!(out, "{{\"footer\":{{{}}}}}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_string(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("table output is UTF-8")
    }
}

fn plain(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => format_sig9(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn csv_cell(cell: &Cell) -> String {
    let s = plain(cell);
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn json_string(s: &str) -> String {
    serde_json::Value::from(s).to_string()
}

fn json_cell(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) if v.is_finite() => format_sig9(*v),
        // JSON has no infinities.
        Cell::Num(v) => json_string(&format_sig9(*v)),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(s) => json_string(s),
        Cell::Empty => "null".to_string(),
    }
}
