//! Shared helpers for the line-based text formats.
//!
//! Every file is a sequence of `[section]` headers followed by
//! whitespace-separated records. `#` starts a comment. Unknown sections and
//! stray records are rejected with the offending line number.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct Record<'a> {
    pub line: usize,
    pub fields: Vec<&'a str>,
}

impl<'a> Record<'a> {
    pub fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, message)
    }

    pub fn expect_len(&self, min: usize, max: Option<usize>) -> Result<(), ParseError> {
        let n = self.fields.len();
        let ok = n >= min && max.map_or(true, |m| n <= m);
        if ok {
            Ok(())
        } else {
            Err(self.err(match max {
                Some(m) if m == min => format!("expected {min} fields, found {n}"),
                Some(m) => format!("expected {min} to {m} fields, found {n}"),
                None => format!("expected at least {min} fields, found {n}"),
            }))
        }
    }

    pub fn parse<T: std::str::FromStr>(&self, idx: usize, what: &str) -> Result<T, ParseError> {
        let raw = self.fields[idx];
        raw.parse().map_err(|_| self.err(format!("invalid {what}: {raw:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct Section<'a> {
    pub name: &'a str,
    pub line: usize,
    pub records: Vec<Record<'a>>,
}

/// Splits `text` into sections. Each section name must be listed in
/// `allowed` and may appear at most once.
pub fn sections<'a>(text: &'a str, allowed: &[&str]) -> Result<Vec<Section<'a>>, ParseError> {
    let mut out: Vec<Section<'a>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ParseError::new(line, "unterminated section header"))?
                .trim();
            if !allowed.contains(&name) {
                return Err(ParseError::new(line, format!("unknown section [{name}]")));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(ParseError::new(line, format!("duplicate section [{name}]")));
            }
            out.push(Section { name, line, records: Vec::new() });
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match out.last_mut() {
            Some(sec) => sec.records.push(Record { line, fields }),
            None => return Err(ParseError::new(line, "record outside of any section")),
        }
    }
    Ok(out)
}

pub fn find<'s, 'a>(secs: &'s [Section<'a>], name: &str) -> Option<&'s Section<'a>> {
    secs.iter().find(|s| s.name == name)
}

/// Number formatting for tables: 12 significant digits, no locale.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.11e}", x);
    // re-parse so trailing zeros disappear and plain notation is used when short
    let v: f64 = s.parse().unwrap();
    let plain = format!("{v}");
    if plain.len() <= 20 {
        plain
    } else {
        format!("{v:e}")
    }
}
