//! Tabular output as CSV (with `#` comment header) or JSON `{"meta", "rows"}`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Shortest round-trip text for numbers.
    fn csv_text(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, meta: Vec<(String, String)>, columns: Vec<&'static str>) -> Self {
        let mut all = vec![
            ("command".to_string(), command.to_string()),
            ("version".to_string(), format!("zvar {}", env!("CARGO_PKG_VERSION"))),
        ];
        all.extend(meta);
        Self { command, meta: all, columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => {
                let mut out = Vec::new();
                for (k, v) in &self.meta {
                    writeln!(out, "# {k} = {v}").expect("write to memory");
                }
                let mut w = csv::Writer::from_writer(out);
                let io = |e: csv::Error| CliError::Data(format!("csv: {e}"));
                w.write_record(&self.columns).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv_text)).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Data(format!("csv: {e}")))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
            Format::Json => {
                let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect())
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "rows": rows }))
                    .map_err(|e| CliError::Data(format!("json: {e}")))?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    /// Writes to `<dir>/<command>.<ext>` when a directory is given, else stdout.
    pub fn emit(&self, format: Format, dir: Option<&PathBuf>) -> Result<(), CliError> {
        let text = self.render(format)?;
        match dir {
            Some(d) => {
                fs::create_dir_all(d).map_err(|e| CliError::Data(format!("cannot create {}: {e}", d.display())))?;
                let ext = if format == Format::Csv { "csv" } else { "json" };
                let path = d.join(format!("{}.{ext}", self.command));
                fs::write(&path, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            }
            None => {
                std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Data(format!("stdout: {e}")))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("test", vec![("a".into(), "1".into())], vec!["x", "label"]);
        r.push(vec![Cell::Num(0.1), "plain".into()]);
        r.push(vec![Cell::Num(1e-300), "has,comma".into()]);
        r.push(vec![Cell::Empty, "say \"hi\"".into()]);
        r
    }

    #[test]
    fn csv_layout() {
        let s = sample().render(Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# command = test");
        assert!(lines[1].starts_with("# version = zvar "));
        assert_eq!(lines[2], "# a = 1");
        assert_eq!(lines[3], "x,label");
        assert_eq!(lines[4], "0.1,plain");
        assert_eq!(lines[5], "1e-300,\"has,comma\"");
        assert_eq!(lines[6], ",\"say \"\"hi\"\"\"");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["meta"]["a"], "1");
        assert_eq!(v["rows"][0]["x"], 0.1);
        assert!(v["rows"][2]["x"].is_null());
    }
}
