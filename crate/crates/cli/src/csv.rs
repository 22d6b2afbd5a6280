//! Plot-ready CSV: one header line, `.` decimal point, scientific notation
//! with 17 significant digits so every value round-trips exactly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a numeric table.
pub fn write_table<I, R>(path: &Path, header: &[&str], rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[f64]>,
{
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let row = row.as_ref();
        if row.len() != header.len() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("row has {} columns, header has {}", row.len(), header.len()),
            ));
        }
        let mut first = true;
        for v in row {
            if !first {
                w.write_all(b",")?;
            }
            first = false;
            write!(w, "{}", format_value(*v))?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()
}
