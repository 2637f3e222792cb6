//! Deterministic table emission. Every CSV carries a comment header with
//! the tool version, the command, a hash of the resolved configuration and
//! the configuration itself; floats are printed with 17 significant digits
//! so values round-trip exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One cell of a table row.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Flag(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => float_repr(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(x) if x.is_finite() => serde_json::json!(x),
            Cell::Float(x) => serde_json::json!(format!("{x}")),
            Cell::Int(n) => serde_json::json!(n),
            Cell::Text(s) => serde_json::json!(s),
            Cell::Flag(b) => serde_json::json!(b),
        }
    }
}

/// Full-precision decimal representation (17 significant digits).
pub fn float_repr(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// FNV-1a hash of the resolved configuration lines.
pub fn config_hash(echo: &BTreeMap<String, String>) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for (key, value) in echo {
        feed(key.as_bytes());
        feed(b"=");
        feed(value.as_bytes());
        feed(b"\n");
    }
    hash
}

/// A named table with homogeneous rows.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A command's complete output: tables plus scalar summary values.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub echo: BTreeMap<String, String>,
    pub summary: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str, echo: BTreeMap<String, String>) -> Report {
        Report {
            command: command.to_string(),
            echo,
            summary: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn add_summary(&mut self, key: &str, value: Cell) {
        self.summary.push((key.to_string(), value));
    }

    pub fn add_table(&mut self, table: Table) {
        self.tables.push(table);
    }

    fn header_lines(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# quasispec v{VERSION}");
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# config-hash: {:016x}", config_hash(&self.echo));
        for (key, value) in &self.echo {
            let _ = writeln!(out, "# {key} = {value}");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header_lines();
        for (key, value) in &self.summary {
            let _ = writeln!(out, "# {key}: {}", value.csv());
        }
        for table in &self.tables {
            if self.tables.len() > 1 {
                let _ = writeln!(out, "# table: {}", table.name);
            }
            let _ = writeln!(out, "{}", table.columns.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut tables = serde_json::Map::new();
        for table in &self.tables {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut object = serde_json::Map::new();
                    for (col, cell) in table.columns.iter().zip(row) {
                        object.insert(col.clone(), cell.json());
                    }
                    serde_json::Value::Object(object)
                })
                .collect();
            tables.insert(table.name.clone(), serde_json::Value::Array(rows));
        }
        let mut summary = serde_json::Map::new();
        for (key, value) in &self.summary {
            summary.insert(key.clone(), value.json());
        }
        let config: serde_json::Map<String, serde_json::Value> = self
            .echo
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::json!(v)))
            .collect();
        let doc = serde_json::json!({
            "version": VERSION,
            "command": self.command,
            "config_hash": format!("{:016x}", config_hash(&self.echo)),
            "config": config,
            "summary": summary,
            "tables": tables,
        });
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    /// Write to the path, or stdout when none is given.
    pub fn emit(&self, out: Option<&Path>, json: bool) -> io::Result<()> {
        let text = if json { self.to_json() } else { self.to_csv() };
        match out {
            Some(path) => {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        fs::create_dir_all(parent)?;
                    }
                }
                fs::write(path, text)
            }
            None => io::stdout().write_all(text.as_bytes()),
        }
    }
}
