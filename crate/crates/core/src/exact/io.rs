//! Plain-text matrix format: a header line `d n`, then `d` rows of `n` integers.
//! Blank lines and `#` comments are ignored.

use super::{Int, IntMatrix};
use crate::error::{Error, Result};

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Non-empty lines with 1-based numbers and whitespace tokens with 1-based columns.
pub(crate) fn tokenized_lines(text: &str) -> Vec<(usize, Vec<(usize, &str)>)> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (i, ch) in line.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    toks.push((s + 1, &line[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            toks.push((s + 1, &line[s..]));
        }
        if !toks.is_empty() {
            out.push((ln + 1, toks));
        }
    }
    out
}

pub(crate) fn parse_usize(line: usize, col: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, col, format!("expected a nonnegative integer, found `{tok}`")))
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let lines = tokenized_lines(text);
    let Some((hl, header)) = lines.first() else {
        return Err(parse_err(1, 1, "empty input, expected header `d n`"));
    };
    if header.len() != 2 {
        return Err(parse_err(*hl, 1, "header must be `d n`"));
    }
    let d = parse_usize(*hl, header[0].0, header[0].1)?;
    let n = parse_usize(*hl, header[1].0, header[1].1)?;
    let body = &lines[1..];
    if body.len() != d {
        let line = body.get(d).map_or(lines.last().unwrap().0 + 1, |l| l.0);
        return Err(parse_err(line, 1, format!("expected {d} rows, found {}", body.len())));
    }
    let mut data = Vec::with_capacity(d * n);
    for (ln, toks) in body {
        if toks.len() != n {
            let col = toks.get(n).map_or(toks.last().map_or(1, |t| t.0 + t.1.len()), |t| t.0);
            return Err(parse_err(*ln, col, format!("expected {n} entries, found {}", toks.len())));
        }
        for &(col, tok) in toks {
            let v: Int = tok
                .parse()
                .map_err(|_| parse_err(*ln, col, format!("not an integer: `{tok}`")))?;
            data.push(v);
        }
    }
    IntMatrix::new(d, n, data)
}

/// Comma-separated integers such as `-3,2,2,2`.
pub fn parse_int_list(s: &str) -> Result<Vec<Int>> {
    let mut col = 1;
    let mut out = Vec::new();
    for part in s.split(',') {
        let t = part.trim();
        out.push(
            t.parse::<Int>()
                .map_err(|_| parse_err(1, col, format!("not an integer: `{t}`")))?,
        );
        col += part.len() + 1;
    }
    Ok(out)
}

pub fn format_matrix(m: &IntMatrix) -> String {
    m.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = IntMatrix::from_i64_rows(&[&[1, -2, 0], &[0, 3, 4]]);
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn diagnostics_point_at_the_bad_token() {
        let err = parse_matrix("2 2\n1 0\n0 x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                col: 3,
                msg: "not an integer: `x`".into()
            }
        );
        let err = parse_matrix("1 3\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(parse_matrix(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("2 1\n1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_and_lists() {
        let m = parse_matrix("# header\n1 2 # d n\n 3 4\n").unwrap();
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[3, 4]]));
        let v = parse_int_list("-3, 2,2,2").unwrap();
        assert_eq!(v.len(), 4);
        assert!(parse_int_list("1,,2").is_err());
    }
}
