//! Command results and their JSON, CSV and text renderings.

use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// Everything a command prints. `settings` holds every effective input,
/// defaults included.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub settings: Map<String, Value>,
    pub summary: Map<String, Value>,
    pub table: Option<Table>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            settings: Map::new(),
            summary: Map::new(),
            table: None,
        }
    }

    pub fn setting(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.settings.insert(key.to_owned(), value.into());
        self
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_owned(), value.into());
        self
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }

    fn json(&self) -> Result<String, CliError> {
        let mut root = Map::new();
        root.insert("command".into(), self.command.into());
        root.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        root.insert("settings".into(), Value::Object(self.settings.clone()));
        root.insert("summary".into(), Value::Object(self.summary.clone()));
        if let Some(t) = &self.table {
            let mut table = Map::new();
            table.insert("columns".into(), t.columns.clone().into());
            table.insert("rows".into(), Value::Array(t.rows.iter().cloned().map(Value::Array).collect()));
            root.insert("table".into(), Value::Object(table));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root))
            .map_err(|e| CliError::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Header lines start with `#`; the table (or the summary as key,value
    /// rows) follows as plain CSV.
    fn csv(&self) -> Result<String, CliError> {
        let mut out = format!("# command: {}\n# version: {}\n", self.command, env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.settings {
            out.push_str(&format!("# setting {k}: {}\n", cell(v)));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                for (k, v) in &self.summary {
                    out.push_str(&format!("# {k}: {}\n", cell(v)));
                }
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(cell))?;
                }
            }
            None => {
                w.write_record(["key", "value"])?;
                for (k, v) in &self.summary {
                    w.write_record([k.clone(), cell(v)])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        out.push_str(&String::from_utf8_lossy(&bytes));
        Ok(out)
    }

    fn text(&self) -> String {
        let mut out = format!("{} (weierdim {})\n", self.command, env!("CARGO_PKG_VERSION"));
        out.push_str("settings:\n");
        for (k, v) in &self.settings {
            out.push_str(&format!("  {k} = {}\n", cell(v)));
        }
        if !self.summary.is_empty() {
            out.push_str("summary:\n");
            for (k, v) in &self.summary {
                out.push_str(&format!("  {k} = {}\n", cell(v)));
            }
        }
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r.get(c).map_or(0, String::len))
                        .chain([t.columns[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |items: Vec<&str>| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_owned()
            };
            out.push_str(&line(t.columns.clone()));
            out.push('\n');
            for r in &cells {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
                out.push('\n');
            }
        }
        out
    }
}
