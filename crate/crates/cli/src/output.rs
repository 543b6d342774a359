use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows for the CSV form of an artifact.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Everything a subcommand produces.
pub struct Artifact {
    /// One-line description of the computed quantity, used as the CSV comment.
    pub quantity: &'static str,
    pub result: Value,
    pub table: Table,
    /// Hard assertions that failed; the run exits with status 1 if any.
    pub failures: Vec<String>,
}

impl Artifact {
    pub fn new(quantity: &'static str, result: impl Serialize, table: Table) -> Self {
        Artifact {
            quantity,
            result: serde_json::to_value(result).expect("results serialize"),
            table,
            failures: Vec::new(),
        }
    }
}

pub fn render(artifact: &Artifact, config: &Value, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let doc = json!({
                "tool": "sigma-equid",
                "version": VERSION,
                "quantity": artifact.quantity,
                "config": config,
                "result": artifact.result,
            });
            let mut out = serde_json::to_vec_pretty(&doc).expect("json");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut out = format!("# sigma-equid {VERSION}: {}\n", artifact.quantity).into_bytes();
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&artifact.table.header).expect("csv");
            for row in &artifact.table.rows {
                w.write_record(row).expect("csv");
            }
            w.flush().expect("csv");
            drop(w);
            out
        }
    }
}

pub fn write_to(path: Option<&std::path::Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

pub fn num(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_comment_then_header() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        let a = Artifact::new("test quantity", json!({}), t);
        let text = String::from_utf8(render(&a, &json!({}), Format::Csv)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# sigma-equid {VERSION}: test quantity"));
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1,\"x,y\"");
    }

    #[test]
    fn json_echoes_config_and_version() {
        let a = Artifact::new("q", json!({"k": 1}), Table::default());
        let v: Value = serde_json::from_slice(&render(&a, &json!({"x": 5}), Format::Json)).unwrap();
        assert_eq!(v["version"], VERSION);
        assert_eq!(v["config"]["x"], 5);
        assert_eq!(v["result"]["k"], 1);
    }
}
