//! Plain-text sparse matrix interchange.
//!
//! ```text
//! R C M        rows, cols, modulus (0 = rational)
//! r c v        one line per entry, 1-based, v an integer or a/b
//! 0 0 0        terminator
//! ```
//!
//! LF line endings, single spaces, entries in row-major order.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg::field::Field;
use crate::linalg::sparse::SparseMatrix;

pub fn write_matrix<F: Field, W: Write>(m: &SparseMatrix<F>, out: &mut W) -> std::io::Result<()> {
    let f = m.field();
    writeln!(out, "{} {} {}", m.n_rows(), m.n_cols(), f.spec().modulus())?;
    for (r, c, v) in m.entries() {
        writeln!(out, "{} {} {}", r + 1, c + 1, f.format(v))?;
    }
    writeln!(out, "0 0 0")
}

pub fn matrix_to_string<F: Field>(m: &SparseMatrix<F>) -> String {
    let mut buf = Vec::new();
    write_matrix(m, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads the header only: `(rows, cols, modulus)`.
pub fn read_header(line: &str) -> Result<(usize, usize, u64)> {
    let parts = split_exact(line, 1)?;
    let parse = |s: &str, what: &str| {
        s.parse::<u64>().map_err(|_| Error::Parse {
            line: 1,
            message: format!("bad {what} '{s}'"),
        })
    };
    Ok((
        parse(parts[0], "row count")? as usize,
        parse(parts[1], "column count")? as usize,
        parse(parts[2], "modulus")?,
    ))
}

/// Parses a matrix, checking that the header modulus matches `field`.
pub fn read_matrix<F: Field, R: BufRead>(field: F, input: R) -> Result<SparseMatrix<F>> {
    // split on LF only so that a stray CR is reported rather than eaten
    let mut lines = input.split(b'\n').enumerate();
    let next = |lines: &mut dyn Iterator<Item = (usize, std::io::Result<Vec<u8>>)>| -> Result<Option<(usize, String)>> {
        match lines.next() {
            None => Ok(None),
            Some((i, Ok(bytes))) => String::from_utf8(bytes)
                .map(|s| Some((i + 1, s)))
                .map_err(|_| Error::Parse {
                    line: i + 1,
                    message: "not UTF-8".into(),
                }),
            Some((i, Err(e))) => Err(Error::Parse {
                line: i + 1,
                message: e.to_string(),
            }),
        }
    };
    let (_, header) = next(&mut lines)?.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let (n_rows, n_cols, modulus) = read_header(&header)?;
    if modulus != field.spec().modulus() {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "modulus {modulus} does not match field {}",
                field.spec()
            ),
        });
    }
    let mut entries = Vec::new();
    loop {
        let (lineno, line) = next(&mut lines)?.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing terminator line '0 0 0'".into(),
        })?;
        if line == "0 0 0" {
            break;
        }
        let parts = split_exact(&line, lineno)?;
        let idx = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::Parse {
                    line: lineno,
                    message: format!("bad 1-based index '{s}'"),
                }),
            }
        };
        let (r, c) = (idx(parts[0])?, idx(parts[1])?);
        let v = field.parse(parts[2]).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if field.is_zero(&v) {
            return Err(Error::Parse {
                line: lineno,
                message: "explicit zero entry".into(),
            });
        }
        entries.push((r, c, v));
    }
    if let Some((lineno, extra)) = next(&mut lines)? {
        if !extra.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                message: "content after terminator".into(),
            });
        }
    }
    SparseMatrix::from_entries(field, n_rows, n_cols, entries)
}

fn split_exact(line: &str, lineno: usize) -> Result<Vec<&str>> {
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) || line.ends_with('\r') {
        return Err(Error::Parse {
            line: lineno,
            message: format!("expected three single-space separated fields, got '{line}'"),
        });
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{parse_rational, PrimeField, Rationals};

    #[test]
    fn byte_exact_output() {
        let q = Rationals;
        let m = SparseMatrix::from_entries(
            q,
            2,
            3,
            vec![
                (1, 2, parse_rational("-1/2").unwrap()),
                (0, 0, q.from_i64(3)),
            ],
        )
        .unwrap();
        assert_eq!(matrix_to_string(&m), "2 3 0\n1 1 3\n2 3 -1/2\n0 0 0\n");
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let f = PrimeField::new(7).unwrap();
        let text = "3 3 7\n1 1 1\n2 2 6\n3 1 2\n0 0 0\n";
        let m = read_matrix(f, text.as_bytes()).unwrap();
        assert_eq!(matrix_to_string(&m), text);

        assert!(read_matrix(f, "3 3 5\n0 0 0\n".as_bytes()).is_err());
        assert!(read_matrix(f, "3 3 7\n1 1 1\n".as_bytes()).is_err());
        assert!(read_matrix(f, "3 3 7\n1  1 1\n0 0 0\n".as_bytes()).is_err());
        assert!(read_matrix(f, "3 3 7\n0 1 1\n0 0 0\n".as_bytes()).is_err());
        assert!(read_matrix(f, "3 3 7\n1 1 1\n1 1 2\n0 0 0\n".as_bytes()).is_err());
        assert!(read_matrix(f, "3 3 7\r\n0 0 0\n".as_bytes()).is_err());
    }
}
