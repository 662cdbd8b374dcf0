//! Plain-text matrix blocks: one row per line, entries `re,im` separated by
//! spaces. Numbers are written with the shortest representation that
//! parses back to the same double.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::{Mat, Real, C};

pub(crate) fn write_matrix<R: Real>(out: &mut String, m: &Mat<R>) {
    for r in 0..m.nrows() {
        let row: Vec<String> =
            (0..m.ncols()).map(|c| format!("{},{}", m[(r, c)].re.as_f64(), m[(r, c)].im.as_f64())).collect();
        writeln!(out, "{}", row.join(" ")).expect("writing to a String");
    }
}

/// Line iterator that skips blanks and `#` comments and tracks line numbers.
pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    pub line: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate(), line: 0 }
    }

    pub fn next_content(&mut self) -> Option<&'a str> {
        for (i, l) in self.inner.by_ref() {
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                self.line = i + 1;
                return Some(t);
            }
        }
        None
    }

    pub fn expect(&mut self, what: &str) -> Result<&'a str> {
        let line = self.line;
        self.next_content().ok_or_else(|| Error::Parse {
            line: line + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, message: message.into() }
    }

    /// Reads `key value` and returns the value.
    pub fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let l = self.expect(key)?;
        match l.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok(v.trim()),
            _ => Err(self.error(format!("expected `{key} <value>`, found `{l}`"))),
        }
    }

    pub fn keyed_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.keyed(key)?;
        v.parse().map_err(|_| self.error(format!("invalid {key} `{v}`")))
    }

    pub fn matrix<R: Real>(&mut self, dim: usize) -> Result<Mat<R>> {
        let mut m = Mat::zeros(dim, dim);
        for r in 0..dim {
            let l = self.expect("matrix row")?;
            let entries: Vec<&str> = l.split_whitespace().collect();
            if entries.len() != dim {
                return Err(self.error(format!("expected {dim} entries, found {}", entries.len())));
            }
            for (c, e) in entries.iter().enumerate() {
                let (re, im) = e.split_once(',').ok_or_else(|| self.error(format!("entry `{e}` is not `re,im`")))?;
                let parse = |s: &str| s.parse::<f64>().map_err(|_| self.error(format!("invalid number `{s}`")));
                m[(r, c)] = C::new(R::lit(parse(re)?), R::lit(parse(im)?));
            }
        }
        Ok(m)
    }
}
