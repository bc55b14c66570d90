use crate::error::{HarnessError, Result};
use fpsearch_core::numfmt;
use std::fmt::Write as _;
use std::path::Path;

pub const SCHEMA: &str = "fpsearch/1";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => numfmt::csv(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Int(n.into())
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

/// A CSV document with a versioned header comment.
#[derive(Clone, Debug)]
pub struct CsvTable {
    experiment: String,
    config_hash: String,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(experiment: &str, config_hash: &str, columns: &[&str]) -> Self {
        CsvTable {
            experiment: experiment.to_string(),
            config_hash: config_hash.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema={SCHEMA} experiment={} config={}", self.experiment, self.config_hash);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// A file produced by a run, relative to the output directory.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub path: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(path: impl Into<String>, contents: impl Into<String>) -> Self {
        Artifact { path: path.into(), contents: contents.into() }
    }

    pub fn csv(path: impl Into<String>, table: &CsvTable) -> Self {
        Artifact::new(path, table.render())
    }

    pub fn is_csv(&self) -> bool {
        self.path.ends_with(".csv")
    }
}

/// Writes artifacts in order, creating parent directories as needed.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<()> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| HarnessError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    for a in artifacts {
        let path = dir.join(&a.path);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(io(parent))?;
        }
        std::fs::write(&path, a.contents.as_bytes()).map_err(io(&path))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_header_and_rows() {
        let mut t = CsvTable::new("table1", "0123456789abcdef", &["r", "p", "note"]);
        t.push(vec![0u32.into(), 0.25.into(), Cell::Empty]);
        t.push(vec![1u32.into(), 2.5e-16.into(), "x".into()]);
        assert_eq!(
            t.render(),
            "# schema=fpsearch/1 experiment=table1 config=0123456789abcdef\n\
             r,p,note\n\
             0,0.250000000000,\n\
             1,2.50000000000e-16,x\n"
        );
    }

    #[test]
    #[should_panic]
    fn rejects_ragged_rows() {
        let mut t = CsvTable::new("x", "0", &["a", "b"]);
        t.push(vec![Cell::Empty]);
    }

    #[test]
    fn writes_nested_paths() {
        let dir = tempfile::tempdir().unwrap();
        let arts = [Artifact::new("a.csv", "1\n"), Artifact::new("sub/b.dat", "2\n")];
        write_artifacts(dir.path(), &arts).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("sub/b.dat")).unwrap(), "2\n");
        assert!(arts[0].is_csv() && !arts[1].is_csv());
    }
}
