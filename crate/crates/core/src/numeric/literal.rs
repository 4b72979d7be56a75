//! Plain-text matrix literals: a `rows cols` header line followed by `rows`
//! lines of `cols` whitespace-separated decimals. `inf`, `+inf` and `-inf`
//! are accepted.

use super::DenseMatrix;
use crate::error::{Error, Result};

pub fn parse_matrix_literal(text: &str) -> Result<DenseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty matrix literal".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: header_line,
            message: format!("bad header: {e}"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse {
            line: header_line,
            message: "header must be `rows cols`".into(),
        });
    };
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "dimensions must be positive".into(),
        });
    }

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line, content) in lines {
        seen += 1;
        if seen > rows {
            return Err(Error::Parse {
                line,
                message: format!("expected {rows} rows"),
            });
        }
        let before = data.len();
        for token in content.split_whitespace() {
            data.push(parse_scalar(token).ok_or_else(|| Error::Parse {
                line,
                message: format!("bad number `{token}`"),
            })?);
        }
        if data.len() - before != cols {
            return Err(Error::Parse {
                line,
                message: format!("expected {cols} values, got {}", data.len() - before),
            });
        }
    }
    if seen != rows {
        return Err(Error::Parse {
            line: header_line + seen + 1,
            message: format!("expected {rows} rows, got {seen}"),
        });
    }
    DenseMatrix::new(rows, cols, data)
}

fn parse_scalar(token: &str) -> Option<f64> {
    match token {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => token.parse::<f64>().ok().filter(|x| x.is_finite()),
    }
}

/// Inverse of [`parse_matrix_literal`]; values use the shortest round-trip form.
pub fn format_matrix_literal(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|x| match *x {
                f64::INFINITY => "inf".to_string(),
                f64::NEG_INFINITY => "-inf".to_string(),
                x => format!("{x:?}"),
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
