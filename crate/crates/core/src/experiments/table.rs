use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// A named, versioned CSV table.
///
/// Floats are written with Rust's shortest round-trip formatting, which
/// never depends on locale.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub version: u32,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self { name, version: 1, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn schema(&self) -> String {
        format!("{}.v{}", self.name, self.version)
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Column `name` parsed as floats.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let k = self.column(name).unwrap_or_else(|| panic!("no column {name} in {}", self.name));
        self.rows.iter().map(|r| r[k].parse().expect("numeric cell")).collect()
    }

    /// Writes `#schema=<name>.v<version>`, the header and the rows.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#schema={}", self.schema())?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

pub fn cell<T: Display>(x: T) -> String {
    x.to_string()
}

pub fn join<T: Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Path for table `k` of a run whose primary output is `primary`:
/// `out.csv`, `out_<name>.csv`, ...
pub fn table_path(primary: &Path, table: &Table, k: usize) -> PathBuf {
    if k == 0 {
        return primary.to_path_buf();
    }
    let stem = primary.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = primary.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    primary.with_file_name(format!("{stem}_{}.{ext}", table.name))
}

/// Writes each table to its own file next to `primary`; returns the paths.
pub fn write_tables(tables: &[Table], primary: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (k, t) in tables.iter().enumerate() {
        let path = table_path(primary, t, k);
        t.write(std::fs::File::create(&path)?)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Writes all tables to one stream, separated by their schema lines.
pub fn write_concatenated<W: Write>(tables: &[Table], mut out: W) -> Result<()> {
    for t in tables {
        t.write(&mut out)?;
    }
    Ok(())
}
