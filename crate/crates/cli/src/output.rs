//! CSV and JSON table writers.
//!
//! Floats are printed with 17 significant digits in `.`-decimal scientific
//! notation, so every value round-trips and files are byte-stable. JSON
//! tables are `{"columns": [...], "rows": [[...], ...]}`.

use std::io::Write;

use serde_json::{json, Value};

use crate::args::Format;
use crate::CliError;

pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    fn text(&self) -> String {
        match *self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(n) => Value::from(n),
            Cell::Float(x) => Value::from(x),
        }
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<Vec<Value>> = self
                    .rows
                    .iter()
                    .map(|row| row.iter().map(Cell::json).collect())
                    .collect();
                let doc = json!({ "columns": self.header, "rows": rows });
                serde_json::to_writer_pretty(&mut *out, &doc)
                    .map_err(|e| CliError::Io(e.into()))?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Write to `path`, or stdout when absent.
pub fn emit<F>(path: Option<&std::path::Path>, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match path {
        Some(p) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(p)?);
            f(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}
