use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

/// Rows with a fixed header; every cell is a JSON value so the three
/// renderers agree on content.
pub struct Report {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Report { headers, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(flat))?;
                }
                w.flush()
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let m: Map<String, Value> =
                            self.headers.iter().map(|h| h.to_string()).zip(row.iter().cloned()).collect();
                        Value::Object(m)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &objects)?;
                writeln!(out)
            }
            Format::Table => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(flat).collect()).collect();
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for row in &cells {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |out: &mut dyn Write, items: &mut dyn Iterator<Item = &str>| -> io::Result<()> {
                    let padded: Vec<String> = items
                        .zip(&widths)
                        .map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
                        .collect();
                    writeln!(out, "{}", padded.join("  ").trim_end())
                };
                line(out, &mut self.headers.iter().copied())?;
                for row in &cells {
                    line(out, &mut row.iter().map(String::as_str))?;
                }
                Ok(())
            }
        }
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "n/a".into(),
        Value::Array(items) => items.iter().map(flat).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn render(r: &Report, f: Format) -> String {
        let mut buf = Vec::new();
        r.write(f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn formats_agree() {
        let mut r = Report::new(vec!["k", "value", "list"]);
        r.push(vec![json!(2), json!("12345678901234567890"), json!([3, 4])]);
        r.push(vec![json!(3), Value::Null, json!([])]);
        assert_eq!(render(&r, Format::Csv), "k,value,list\n2,12345678901234567890,3 4\n3,n/a,\n");
        let j: Value = serde_json::from_str(&render(&r, Format::Json)).unwrap();
        assert_eq!(j[0]["value"], "12345678901234567890");
        assert_eq!(j[1]["value"], Value::Null);
        let t = render(&r, Format::Table);
        assert!(t.starts_with("k  value"));
        assert_eq!(t.lines().count(), 3);
    }
}
