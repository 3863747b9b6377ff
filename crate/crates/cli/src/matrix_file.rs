// Copyright 2026 The holospin Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate files: four lines of four `re+imj` tokens. Blank lines and lines
//! starting with `#` are skipped.

use holospin_core::numerics::{c, CMatrix, Complex64};

use crate::error::CliError;

/// Parses `1`, `-0.5j`, `0.5+0.25j`, `1e-3-2E+1j`, ...
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('j').or_else(|| t.strip_suffix('J')) else {
        return t.parse::<f64>().ok().map(|re| c(re, 0.0));
    };
    let bytes = body.as_bytes();
    // Split at the last sign that is neither leading nor part of an exponent.
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().ok()?;
            let im = match &body[k..] {
                "+" => 1.0,
                "-" => -1.0,
                s => s.parse::<f64>().ok()?,
            };
            Some(c(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                s => s.parse::<f64>().ok()?,
            };
            Some(c(0.0, im))
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<CMatrix, CliError> {
    let mut entries = Vec::with_capacity(16);
    let mut rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(CliError::Parse(format!("line {}: expected 4 entries, found {}", lineno + 1, tokens.len())));
        }
        for tok in tokens {
            let z = parse_complex(tok)
                .ok_or_else(|| CliError::Parse(format!("line {}: cannot read {tok:?} as re+imj", lineno + 1)))?;
            entries.push(z);
        }
        rows += 1;
    }
    if rows != 4 {
        return Err(CliError::Parse(format!("expected 4 rows, found {rows}")));
    }
    Ok(CMatrix::from_row_slice(4, 4, &entries))
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}j", z.re, z.im.abs())
}

pub fn format_matrix(m: &CMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_complex(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        assert_eq!(parse_complex("1"), Some(c(1.0, 0.0)));
        assert_eq!(parse_complex("1+0j"), Some(c(1.0, 0.0)));
        assert_eq!(parse_complex("-0.5j"), Some(c(0.0, -0.5)));
        assert_eq!(parse_complex("0.5-0.25j"), Some(c(0.5, -0.25)));
        assert_eq!(parse_complex("1e-3-2E+1j"), Some(c(1e-3, -20.0)));
        assert_eq!(parse_complex("-1e-3+1e-2j"), Some(c(-1e-3, 1e-2)));
        assert_eq!(parse_complex("j"), Some(c(0.0, 1.0)));
        assert_eq!(parse_complex("2-j"), Some(c(2.0, -1.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("1+xj"), None);
    }

    #[test]
    fn round_trip() {
        let m = CMatrix::from_fn(4, 4, |i, j| c(i as f64 / 3.0 - 0.7, (j as f64).sqrt() - 1.1));
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(parse_matrix("1 0 0 0\n0 1 0 0\n"), Err(CliError::Parse(_))));
        assert!(matches!(parse_matrix("1 0 0\n"), Err(CliError::Parse(_))));
        let ok = "# identity\n1 0 0 0\n0 1 0 0\n\n0 0 1 0\n0 0 0 1\n";
        assert_eq!(parse_matrix(ok).unwrap(), CMatrix::identity(4));
    }
}
