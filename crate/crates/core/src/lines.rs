use std::io::BufRead;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Line reader that tracks 1-based line numbers for parse errors.
pub(crate) struct LineReader<R> {
    inner: std::io::Lines<R>,
    path: PathBuf,
    line_no: usize,
    peeked: Option<String>,
}

impl<R: BufRead> LineReader<R> {
    pub fn new(reader: R, path: &Path) -> Self {
        LineReader {
            inner: reader.lines(),
            path: path.to_path_buf(),
            line_no: 0,
            peeked: None,
        }
    }

    pub fn next_line(&mut self) -> Result<Option<String>> {
        if let Some(l) = self.peeked.take() {
            self.line_no += 1;
            return Ok(Some(l));
        }
        match self.inner.next() {
            None => Ok(None),
            Some(l) => {
                self.line_no += 1;
                l.map(Some).map_err(|e| Error::io(&self.path, e))
            }
        }
    }

    pub fn peek(&mut self) -> Result<Option<&str>> {
        if self.peeked.is_none() {
            match self.inner.next() {
                None => return Ok(None),
                Some(l) => self.peeked = Some(l.map_err(|e| Error::io(&self.path, e))?),
            }
        }
        Ok(self.peeked.as_deref())
    }

    /// Next line, or a parse error naming the line after the last one read.
    pub fn expect_line(&mut self, what: &str) -> Result<String> {
        match self.next_line()? {
            Some(l) => Ok(l),
            None => Err(self.error_at(self.line_no + 1, format!("unexpected end of file, expected {what}"))),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.line_no, message)
    }

    pub fn error_at(&self, line: usize, message: impl Into<String>) -> Error {
        Error::parse(&self.path, line, message)
    }

    /// Reads a `key<TAB>value` line with the given key.
    pub fn expect_field(&mut self, key: &str) -> Result<String> {
        let line = self.expect_line(key)?;
        match line.split_once('\t') {
            Some((k, v)) if k == key => Ok(v.to_string()),
            _ => Err(self.error(format!("expected `{key}<TAB>value`, found {line:?}"))),
        }
    }

    pub fn parse_field<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.expect_field(key)?;
        v.parse()
            .map_err(|_| self.error(format!("cannot parse {key} value {v:?}")))
    }
}
