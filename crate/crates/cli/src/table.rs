//! Versioned CSV tables.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub const REPORT_VERSION: &str = "# wavebound-report v1";

pub const NA: &str = "not-applicable";

/// Shortest round-trip form, so identical numbers print identically;
/// scientific outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write(path: &Path, columns: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "{REPORT_VERSION}")?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(columns)?;
    for r in rows {
        debug_assert_eq!(r.len(), columns.len());
        w.write_record(r)?;
    }
    w.flush()
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn number_forms() {
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(3.5e-33), "3.5e-33");
        assert_eq!(num(-2e20), "-2e20");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(num(0.0), "0");
    }
}
