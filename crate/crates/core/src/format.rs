//! Plain-text partial matrix files.
//!
//! ```text
//! # comment
//! n 3
//! 1   1   ?
//! 1   2   0.5
//! ?   0.5 3
//! ```
//!
//! The first non-comment line is `n <dim>`; it is followed by `dim` rows of
//! `dim` whitespace-separated tokens, each a decimal number or `?`. Lines
//! whose first non-blank character is `#` and blank lines are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::partial::PartialMatrix;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of a line with their 1-based starting columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        let offset = tok.as_ptr() as usize - line.as_ptr() as usize;
        (line[..offset].chars().count() + 1, tok)
    })
}

pub fn parse_partial(text: &str) -> Result<PartialMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(text.lines().count().max(1), 1, "missing `n <dim>` header"))?;
    let head: Vec<_> = tokens(header).collect();
    let n = match head.as_slice() {
        [(_, "n"), (col, dim)] => dim
            .parse::<usize>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| parse_err(header_line, *col, format!("invalid dimension `{dim}`")))?,
        _ => return Err(parse_err(header_line, 1, "expected header `n <dim>`")),
    };

    let mut rows: Vec<Vec<Option<f64>>> = Vec::with_capacity(n);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        if rows.len() == n {
            return Err(parse_err(line_no, 1, format!("more than {n} rows")));
        }
        last_line = line_no;
        let mut row = Vec::with_capacity(n);
        for (col, tok) in tokens(line) {
            if row.len() == n {
                return Err(parse_err(line_no, col, format!("more than {n} entries in row")));
            }
            if tok == "?" {
                row.push(None);
                continue;
            }
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, col, format!("invalid number `{tok}`")))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, col, format!("non-finite value `{tok}`")));
            }
            row.push(Some(v));
        }
        if row.len() < n {
            return Err(parse_err(
                line_no,
                line.chars().count() + 1,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() < n {
        return Err(parse_err(
            last_line + 1,
            1,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    PartialMatrix::from_options(&rows)
}

/// Shortest representation that parses back to the same `f64`, written with
/// 17 significant digits.
pub fn format_exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// Six significant digits for human-readable reports.
pub fn format_short(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

pub fn print_partial(m: &PartialMatrix) -> String {
    let n = m.n();
    let mut out = format!("n {n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| m.get(i, j).map_or_else(|| "?".to_string(), format_exact))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn print_matrix(m: &SymMatrix) -> String {
    print_partial(&PartialMatrix::from_full(m))
}

/// Aligned six-digit rendering of a partial matrix for terminal output.
pub fn display_partial(m: &PartialMatrix) -> String {
    let n = m.n();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m.get(i, j).map_or_else(|| "?".to_string(), format_short))
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {}", line.join("  "));
    }
    out
}

pub fn display_matrix(m: &SymMatrix) -> String {
    display_partial(&PartialMatrix::from_full(m))
}
