//! Matrix text format: one row per line, comma-separated decimal or `p/q`
//! literals; blank lines and `#` comments are ignored.

use super::RatMatrix;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

pub fn parse_matrix_text(text: &str) -> Result<RatMatrix> {
    let mut rows: Vec<Vec<_>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                parse_rational(field)
                    .ok_or_else(|| Error::Parse { line: lineno + 1, message: format!("bad entry {:?}", field.trim()) })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected {} entries, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 0, message: "no matrix rows".into() });
    }
    let (r, c) = (rows.len(), rows[0].len());
    RatMatrix::new(r, c, rows.into_iter().flatten().collect())
}

pub fn format_matrix_csv(m: &RatMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
