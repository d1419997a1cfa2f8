//! The bit-exact matrix text format.
//!
//! ```text
//! gfmat 1 p=<p> m=<m> n=<n>
//! <m lines of n space-separated integers in [0, p)>
//! ```
//!
//! LF line endings, single spaces, no trailing whitespace. Readers reject
//! anything out of range or malformed; writers always produce the canonical
//! encoding, so digesting the text is a stable identity for the matrix.

use super::{FieldMatrix, Prime};
use crate::error::{Error, Result};
use std::fmt::Write as _;

impl FieldMatrix {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "gfmat 1 p={} m={} n={}",
            self.prime().value(),
            self.nrows(),
            self.ncols()
        )
        .unwrap();
        for i in 0..self.nrows() {
            let line: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<FieldMatrix> {
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let (p, m, n) = parse_header(header)?;
        let mut rows: Vec<Vec<u8>> = Vec::with_capacity(m);
        for i in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {i}: expected {m} rows")))?;
            let row = parse_row(line, n, p, i)?;
            rows.push(row);
        }
        // allow exactly one trailing newline and nothing else
        for rest in lines {
            if !rest.is_empty() {
                return Err(Error::Parse(format!("trailing content after row {m}: {rest:?}")));
            }
        }
        FieldMatrix::from_rows(p, &rows)
    }
}

fn parse_header(header: &str) -> Result<(Prime, usize, usize)> {
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 5 || fields[0] != "gfmat" || fields[1] != "1" {
        return Err(Error::Parse(format!("bad header: {header:?}")));
    }
    let p = parse_kv(fields[2], "p")?;
    let m = parse_kv(fields[3], "m")?;
    let n = parse_kv(fields[4], "n")?;
    Ok((Prime::new(p)?, m as usize, n as usize))
}

pub(crate) fn parse_kv(field: &str, key: &str) -> Result<u64> {
    let rest = field
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=<int>, got {field:?}")))?;
    rest.parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad integer in {field:?}")))
}

pub(crate) fn parse_row(line: &str, n: usize, p: Prime, row: usize) -> Result<Vec<u8>> {
    if line.ends_with(' ') || line.starts_with(' ') || line.contains("  ") {
        return Err(Error::Parse(format!("row {row} has irregular spacing")));
    }
    let tokens: Vec<&str> = if line.is_empty() {
        Vec::new()
    } else {
        line.split(' ').collect()
    };
    if tokens.len() != n {
        return Err(Error::Parse(format!(
            "row {row} has {} entries, expected {n}",
            tokens.len()
        )));
    }
    tokens
        .iter()
        .map(|t| {
            let v: u64 = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad entry {t:?} in row {row}")))?;
            if v >= p.value() as u64 {
                return Err(Error::Parse(format!(
                    "entry {v} out of range for p={} in row {row}",
                    p.value()
                )));
            }
            Ok(v as u8)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let m = FieldMatrix::from_rows(
            Prime::new(3).unwrap(),
            &[vec![0, 1, 2], vec![2, 0, 1]],
        )
        .unwrap();
        let text = m.to_text();
        assert_eq!(text, "gfmat 1 p=3 m=2 n=3\n0 1 2\n2 0 1\n");
        assert_eq!(FieldMatrix::from_text(&text).unwrap(), m);
    }

    #[test]
    fn zero_column_matrix_round_trips() {
        let m = FieldMatrix::zero(Prime::new(2).unwrap(), 2, 0);
        let text = m.to_text();
        assert_eq!(text, "gfmat 1 p=2 m=2 n=0\n\n\n");
        assert_eq!(FieldMatrix::from_text(&text).unwrap(), m);
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let text = "gfmat 1 p=2 m=1 n=2\n0 2\n";
        assert!(FieldMatrix::from_text(text).is_err());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(FieldMatrix::from_text("gfmat 2 p=2 m=1 n=1\n0\n").is_err());
        assert!(FieldMatrix::from_text("gfmat 1 p=2 m=2 n=1\n0\n").is_err());
        assert!(FieldMatrix::from_text("gfmat 1 p=2 m=1 n=1\n0 \n").is_err());
        assert!(FieldMatrix::from_text("gfmat 1 p=2 m=1 n=1\n0\n1\n").is_err());
        assert!(FieldMatrix::from_text("gfmat 1 p=4 m=1 n=1\n0\n").is_err());
    }
}
