//! Delimited output with '#' metadata lines.

use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { comments: Vec::new(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// First numeric field that is NaN or infinite, as (row, column name).
    pub fn first_non_finite(&self) -> Option<(usize, &str)> {
        self.rows.iter().enumerate().find_map(|(i, row)| {
            row.iter().position(|c| matches!(c, Cell::Num(x) if !x.is_finite())).map(|j| (i, self.header[j].as_str()))
        })
    }

    /// Floats use the shortest representation that round-trips.
    pub fn render(&self, format: Format, preamble: &[String]) -> String {
        let d = format.delimiter();
        let mut s = String::new();
        for line in preamble.iter().chain(&self.comments) {
            let _ = writeln!(s, "# {line}");
        }
        let _ = writeln!(s, "{}", self.header.join(&d.to_string()));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format!("{x:?}"),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(t) => t.replace([',', '\t', '\n'], " "),
                })
                .collect();
            let _ = writeln!(s, "{}", cells.join(&d.to_string()));
        }
        s
    }
}
