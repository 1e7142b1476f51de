//! Minimal CSV tables: `#` metadata lines, one header row, then data rows.
//! Reals are written with 17 significant digits, which round-trips `f64`, so
//! parsing a file and writing it back reproduces it byte for byte.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Num(x) => write!(out, "{x:.16e}").unwrap(),
            Cell::Int(n) => write!(out, "{n}").unwrap(),
            Cell::Text(s) => out.push_str(s),
        }
    }

    fn parse(s: &str) -> Cell {
        if let Ok(n) = s.parse::<i64>() {
            return Cell::Int(n);
        }
        if s.contains(['e', 'E']) {
            if let Ok(x) = s.parse::<f64>() {
                return Cell::Num(x);
            }
        }
        Cell::Text(s.to_string())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Metadata lines without the leading `# `.
    pub meta: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, params: &[(&str, String)], header: &[&str]) -> Self {
        let mut meta = vec![
            format!("command: {command}"),
            format!("version: {}", env!("CARGO_PKG_VERSION")),
        ];
        meta.extend(params.iter().map(|(k, v)| format!("{k}: {v}")));
        Self {
            meta,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            out.push_str("# ");
            out.push_str(m);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (k, c) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                c.render(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut t = Table::default();
        let mut lines = text.lines();
        let header = loop {
            match lines.next() {
                Some(l) if l.starts_with('#') => {
                    t.meta.push(l.strip_prefix("# ").unwrap_or(&l[1..]).to_string());
                }
                Some(l) => break l,
                None => return Err("missing header row".into()),
            }
        };
        t.header = header.split(',').map(str::to_string).collect();
        for (k, l) in lines.enumerate() {
            let row: Vec<Cell> = l.split(',').map(Cell::parse).collect();
            if row.len() != t.header.len() {
                return Err(format!("row {} has {} cells, header has {}", k + 1, row.len(), t.header.len()));
            }
            t.rows.push(row);
        }
        Ok(t)
    }
}
