//! Shared helpers for the line-oriented text formats.

use std::io::{self, BufRead};

use crate::error::{Error, Result};

/// 17 significant digits: enough for every `f64` to round-trip exactly.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a number, found `{tok}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value `{tok}`")));
    }
    Ok(v)
}

/// Line iterator that skips blank lines and tracks 1-based line numbers.
pub(crate) struct Lines<B> {
    inner: io::Lines<B>,
    line: usize,
}

impl<B: BufRead> Lines<B> {
    pub fn new(inner: io::Lines<B>) -> Self {
        Lines { inner, line: 0 }
    }

    pub fn next_line(&mut self) -> Result<Option<(usize, String)>> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            if !l.trim().is_empty() {
                return Ok(Some((self.line, l)));
            }
        }
        Ok(None)
    }

    pub fn next_required(&mut self, what: &str) -> Result<(usize, String)> {
        self.next_line()?
            .ok_or_else(|| Error::parse(self.line + 1, format!("unexpected end of file, expected {what}")))
    }

    /// Parses `<name> <count>`.
    pub fn section(&mut self, name: &str) -> Result<usize> {
        let (ln, l) = self.next_required(name)?;
        match l.split_whitespace().collect::<Vec<_>>()[..] {
            [n, c] if n == name => c
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad count `{c}`"))),
            _ => Err(Error::parse(ln, format!("expected `{name} <count>`"))),
        }
    }

    pub fn reals(&mut self, n: usize) -> Result<(usize, Vec<f64>)> {
        let (ln, l) = self.next_required("numeric row")?;
        let vals = l
            .split_whitespace()
            .map(|t| parse_real(t, ln))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != n {
            return Err(Error::parse(ln, format!("expected {n} values, found {}", vals.len())));
        }
        Ok((ln, vals))
    }

    pub fn indices(&mut self, n: usize) -> Result<(usize, Vec<usize>)> {
        let (ln, l) = self.next_required("index row")?;
        let vals = l
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(ln, format!("expected an index, found `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != n {
            return Err(Error::parse(ln, format!("expected {n} indices, found {}", vals.len())));
        }
        Ok((ln, vals))
    }
}
