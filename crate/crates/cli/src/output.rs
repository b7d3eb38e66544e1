use std::fmt::Display;
use std::io::{self, Write};

use fermat_core::scalar::format_significant;
use serde::Serialize;

/// Significant digits used for every floating value.
pub const FLOAT_DIGITS: usize = 15;

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    /// An integer too wide for a JSON number; written in full, quoted in JSON.
    Big(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl Cell {
    pub fn big(n: impl Display) -> Self {
        Cell::Big(n.to_string())
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Big(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => format_significant(*x, FLOAT_DIGITS),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Big(s) | Cell::Text(s) => json_string(s),
            Cell::Float(x) if x.is_finite() => format_significant(*x, FLOAT_DIGITS),
            Cell::Float(_) | Cell::Null => "null".into(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(n: $t) -> Self {
                Cell::Int(n as i128)
            }
        }
    )*};
}
int_cell!(u8, u32, u64, usize, i8, i32, i64);

impl From<u128> for Cell {
    fn from(n: u128) -> Self {
        i128::try_from(n).map_or_else(|_| Cell::big(n), Cell::Int)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

/// A header plus rows, all of the header's width.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        w.flush()
    }

    /// `{"config": …, "rows": [{column: value, …}], "runtime_seconds": …}`
    pub fn write_json<W: Write, C: Serialize>(&self, mut out: W, config: &C, runtime_seconds: f64) -> io::Result<()> {
        let config = serde_json::to_string(config).map_err(io::Error::other)?;
        write!(out, "{{\"config\":{config},\"rows\":[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            out.write_all(b"{")?;
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.write_all(b",")?;
                }
                write!(out, "{}:{}", json_string(col), cell.json_text())?;
            }
            out.write_all(b"}")?;
        }
        writeln!(out, "],\"runtime_seconds\":{}}}", format_significant(runtime_seconds, 6))
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// `p^e` factors joined by `*`, e.g. `2^3*5`.
pub fn factor_string<T: Display>(factors: &[(T, u32)]) -> String {
    factors
        .iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Space-separated list.
pub fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
