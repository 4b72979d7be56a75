//! Series, face-grid and image readers. Fields are separated by commas or
//! whitespace; blank lines and lines starting with `#` are skipped.

use std::path::Path;

use fscan::instances::Image;

use crate::error::{CliError, CliResult};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_row(line: usize, l: &str) -> CliResult<Vec<f64>> {
    l.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| {
                CliError::Parse(format!("line {line}: cannot parse {t:?} as a number"))
            })
        })
        .collect()
}

/// All values in file order, however they are split across lines.
pub fn parse_scalars(text: &str) -> CliResult<Vec<f64>> {
    let mut values = Vec::new();
    for (line, l) in data_lines(text) {
        values.extend(parse_row(line, l)?);
    }
    Ok(values)
}

/// One row per line; every row must have the same length.
pub fn parse_rows(text: &str) -> CliResult<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, l) in data_lines(text) {
        let row = parse_row(line, l)?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::Parse(format!(
                    "line {line}: expected {} values, got {}",
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// A binary PPM when the file starts with `P6`, otherwise the CSV image format.
pub fn load_image(path: &Path) -> CliResult<Image> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let image = if bytes.starts_with(b"P6") {
        Image::parse_ppm(&bytes)
    } else {
        let text = String::from_utf8(bytes)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Image::parse_csv(&text)
    };
    image.map_err(|e| CliError::from(e).in_file(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_any_separator() {
        let text = "# header comment\n3,1,7\n0 4\n\n1,6,\t3\n";
        assert_eq!(
            parse_scalars(text).unwrap(),
            vec![3.0, 1.0, 7.0, 0.0, 4.0, 1.0, 6.0, 3.0]
        );
        assert_eq!(
            parse_scalars("-inf, inf").unwrap(),
            vec![f64::NEG_INFINITY, f64::INFINITY]
        );
        assert!(parse_scalars("").unwrap().is_empty());
    }

    #[test]
    fn bad_token_names_line() {
        let err = parse_scalars("1\n2\nx3\n").unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn rows_must_be_rectangular() {
        assert_eq!(
            parse_rows("1,2\n3,4\n").unwrap(),
            vec![vec![1.0, 2.0], vec![3.0, 4.0]]
        );
        let err = parse_rows("1,2\n3\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
