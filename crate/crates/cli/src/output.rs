use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::cli::Format;
use crate::CliError;

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, path: Option<&Path>) -> Result<(), CliError> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// `header` is written explicitly only when there are no rows.
pub fn write_csv<T: Serialize>(rows: &[T], header: &[&str], path: Option<&Path>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    if rows.is_empty() {
        w.write_record(header).map_err(|e| CliError::Io(io::Error::other(e)))?;
    }
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}

/// Tabular output in either format.
pub fn write_rows<T: Serialize>(rows: &[T], header: &[&str], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(rows, path),
        Format::Csv => write_csv(rows, header, path),
    }
}

/// Reports with nested structure are JSON only.
pub fn require_json(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!("{command} writes JSON only"))),
    }
}
