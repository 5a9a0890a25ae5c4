//! Self-describing output files.
//!
//! CSV tables start with `#` comment lines carrying the tool name, version,
//! command and the full configuration echo; JSON reports embed the same
//! metadata object. Numbers are printed in shortest round-trip form, so
//! re-parsing reproduces every value bit for bit.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
}

impl RunMetadata {
    pub fn new(command: &str, config: impl Serialize) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config: serde_json::to_value(config).expect("configs serialise to JSON"),
        }
    }

    pub fn header_lines(&self) -> Vec<String> {
        vec![
            format!("tool: {} {}", self.tool, self.version),
            format!("command: {}", self.command),
            format!("config: {}", self.config),
        ]
    }
}

/// A numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, meta: &RunMetadata, mut out: W) -> Result<()> {
        for line in meta.header_lines() {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self, meta: &RunMetadata) -> Value {
        serde_json::json!({ "metadata": meta, "columns": self.columns, "rows": self.rows })
    }

    /// Parses the CSV layout produced by [`Table::write_csv`]; comment lines
    /// are returned without their `# ` prefix.
    pub fn parse_csv(text: &str) -> Result<(Vec<String>, Table)> {
        let mut comments = Vec::new();
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            if let Some(c) = l.strip_prefix('#') {
                comments.push(c.trim_start().to_string());
                false
            } else {
                !l.trim().is_empty()
            }
        });
        let parse_err = |line: usize, content: &str| Error::Parse {
            path: "<csv>".into(),
            line,
            content: content.to_string(),
        };
        let (_, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, line) in lines {
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| parse_err(i + 1, line)))
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != columns.len() {
                return Err(parse_err(i + 1, line));
            }
            rows.push(row);
        }
        Ok((comments, Table { columns, rows }))
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write>(value: &Value, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["r", "K"]);
        t.push(vec![0.0, 1.0]);
        t.push(vec![0.1, 0.983_631_643_083_466_5]);
        let meta = RunMetadata::new("kernel", serde_json::json!({"nu": 0.5}));
        let mut buf = Vec::new();
        t.write_csv(&meta, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# tool: fermikernel "));
        assert_eq!(lines.next().unwrap(), "# command: kernel");
        assert_eq!(lines.next().unwrap(), r#"# config: {"nu":0.5}"#);
        assert_eq!(lines.next().unwrap(), "r,K");
        assert_eq!(lines.next().unwrap(), "0,1");
        let (comments, parsed) = Table::parse_csv(&text).unwrap();
        assert_eq!(comments.len(), 3);
        assert_eq!(parsed, t);
    }

    #[test]
    fn csv_parse_errors() {
        assert!(Table::parse_csv("# only comments\n").is_err());
        assert!(Table::parse_csv("a,b\n1,x\n").is_err());
        assert!(Table::parse_csv("a,b\n1\n").is_err());
    }
}
