use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

/// Tabular part of a report, used for csv and table output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

/// A command result: an ordered JSON object plus an optional table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

impl Report {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }
}

/// 17 significant digits for floats; integers, booleans and strings verbatim.
pub fn csv_cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(f)) => format_f64(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn scalar_fields(fields: &Map<String, Value>) -> (Vec<String>, Vec<Value>) {
    fields
        .iter()
        .filter(|(_, v)| !v.is_array() && !v.is_object())
        .map(|(k, v)| (k.clone(), v.clone()))
        .unzip()
}

fn write_csv_rows(out: &mut dyn Write, header: &[String], rows: &[Vec<Value>]) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn write_aligned(out: &mut dyn Write, header: &[String], rows: &[Vec<Value>]) -> io::Result<()> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| row.iter().map(table_cell).collect())
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|j| {
            cells
                .iter()
                .map(|row| row.get(j).map_or(0, String::len))
                .chain([header[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| {
        items
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header))?;
    for row in &cells {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}

fn table_cell(value: &Value) -> String {
    match value {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit(report: &Report, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", Value::Object(report.fields.clone())),
        Format::Csv => match &report.table {
            Some(table) => write_csv_rows(out, &table.header, &table.rows),
            None => {
                let (header, row) = scalar_fields(&report.fields);
                write_csv_rows(out, &header, &[row])
            }
        },
        Format::Table => {
            let (keys, values) = scalar_fields(&report.fields);
            let width = keys.iter().map(String::len).max().unwrap_or(0);
            for (k, v) in keys.iter().zip(&values) {
                writeln!(out, "{k:<width$}  {}", table_cell(v))?;
            }
            if let Some(table) = &report.table {
                if !keys.is_empty() {
                    writeln!(out)?;
                }
                write_aligned(out, &table.header, &table.rows)?;
            }
            Ok(())
        }
    }
}
