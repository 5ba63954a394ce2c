//! CSV tables with a leading '#' comment block.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(u64),
    B(bool),
    S(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::F(x) => Some(*x),
            Cell::U(n) => Some(*n as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::S(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::B(b)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::U(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::S(s)
    }
}

/// Shortest round-trip representation; scientific notation outside [1e-4, 1e15).
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::F(x) => format_f64(*x),
        Cell::U(n) => n.to_string(),
        Cell::B(b) => b.to_string(),
        Cell::S(s) => s.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub description: String,
}

pub fn col(name: &str, unit: &str, description: &str) -> Column {
    Column {
        name: name.into(),
        unit: unit.into(),
        description: description.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        Table {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch in table {}", self.name);
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Vec<&Cell> {
        let k = self.column_index(name).unwrap_or_else(|| panic!("no column {name} in {}", self.name));
        self.rows.iter().map(|r| &r[k]).collect()
    }

    pub fn column_f64(&self, name: &str) -> Vec<f64> {
        self.column(name).into_iter().map(|c| c.as_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn to_csv(&self, preamble: &[String]) -> String {
        let mut out = String::new();
        for line in preamble {
            writeln!(out, "# {line}").unwrap();
        }
        writeln!(out, "# table: {}", self.name).unwrap();
        for c in &self.columns {
            writeln!(out, "# column {} [{}]: {}", c.name, c.unit, c.description).unwrap();
        }
        let header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_cell).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-9, 6.07e-4, 2.5e15, -0.00012, 123456.789, 5e-324] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_f64(0.3), "0.3");
        assert_eq!(format_f64(1e-9), "1e-9");
        assert_eq!(format_f64(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", vec![col("x", "omega1", "abscissa"), col("ok", "-", "flag")]);
        t.push(vec![0.5.into(), true.into()]);
        let csv = t.to_csv(&["optomech demo".into()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# optomech demo");
        assert_eq!(lines[1], "# table: demo");
        assert_eq!(lines[4], "x,ok");
        assert_eq!(lines[5], "0.5,true");
    }
}
