use std::fs::File;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Deserialize)]
struct Row {
    s: f64,
    a: f64,
}

/// Reads `(s, a)` pairs from a CSV file with header `s,a`. Rows must have
/// non-decreasing `s` and `s ≤ a`; arrival order is free.
pub fn load_trace_arrivals(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let file = File::open(path.as_ref())?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "s" || &headers[1] != "a" {
        return Err(Error::TraceFile { line: 1, reason: format!("expected header `s,a`, found `{}`", headers.as_slice()) });
    }
    let mut out: Vec<(f64, f64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::TraceFile {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |reason: String| Error::TraceFile { line, reason };
        let row: Row = rec.deserialize(None).map_err(|e| bad(e.to_string()))?;
        if !(row.s.is_finite() && row.a.is_finite()) {
            return Err(bad("times must be finite".into()));
        }
        if row.s > row.a {
            return Err(bad(format!("generation time {} after arrival time {}", row.s, row.a)));
        }
        if let Some(&(prev, _)) = out.last() {
            if row.s < prev {
                return Err(bad(format!("generation times must be non-decreasing ({} after {prev})", row.s)));
            }
        }
        out.push((row.s, row.a));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn valid_traces() {
        assert_eq!(load_trace_arrivals(file("s,a\n0,0\n1,2\n").path()).unwrap(), vec![(0.0, 0.0), (1.0, 2.0)]);
        let ooo = load_trace_arrivals(file("s,a\n0,100\n0.5,1.5\n").path()).unwrap();
        assert_eq!(ooo, vec![(0.0, 100.0), (0.5, 1.5)]);
        assert!(load_trace_arrivals(file("s,a\n").path()).unwrap().is_empty());
    }

    #[test]
    fn invalid_traces() {
        let err = load_trace_arrivals(file("s,a\n0,0\n2,1\n").path()).unwrap_err();
        assert!(matches!(err, Error::TraceFile { line: 3, .. }), "{err}");
        assert!(matches!(load_trace_arrivals(file("s,a\n2,3\n1,4\n").path()), Err(Error::TraceFile { line: 3, .. })));
        assert!(matches!(load_trace_arrivals(file("s,a\n0,x\n").path()), Err(Error::TraceFile { line: 2, .. })));
        assert!(matches!(load_trace_arrivals(file("a,s\n0,0\n").path()), Err(Error::TraceFile { line: 1, .. })));
        assert!(matches!(load_trace_arrivals(file("s,a\n0,1,2\n").path()), Err(Error::TraceFile { .. })));
        assert!(matches!(load_trace_arrivals("/nonexistent/trace.csv"), Err(Error::Io(_))));
    }
}
