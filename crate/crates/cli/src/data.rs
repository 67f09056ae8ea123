//! Observation files: one positive decimal per line, `#` starts a comment
//! line, blank lines are skipped.

use std::path::Path;

use lindley_core::Sample;

use crate::error::{CliError, Result};

/// A parse failure at a 1-based line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

pub fn parse_observations(text: &str) -> Result<Vec<f64>, LineError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |message: String| LineError { line: i + 1, message };
        let x: f64 = line
            .parse()
            .map_err(|_| fail(format!("not a number: {line:?}")))?;
        if !x.is_finite() {
            return Err(fail(format!("value must be finite, got {line}")));
        }
        if x <= 0.0 {
            return Err(fail(format!("value must be positive, got {line}")));
        }
        values.push(x);
    }
    if values.is_empty() {
        return Err(LineError {
            line: text.lines().count().max(1),
            message: "no observations found".into(),
        });
    }
    Ok(values)
}

pub fn read_sample(path: &Path) -> Result<Sample> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    let values = parse_observations(&text).map_err(|e| CliError::Data {
        path: path.to_owned(),
        line: e.line,
        message: e.message,
    })?;
    Ok(Sample::new(values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let v = parse_observations("# header\n1.5\n\n  2 \n# x\n3e-1\n").unwrap();
        assert_eq!(v, vec![1.5, 2.0, 0.3]);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse_observations("1\n2\n0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_observations("# c\nabc\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_observations("1\n-2\n").unwrap_err().message.contains("positive"));
        assert!(parse_observations("inf\n").is_err());
        assert!(parse_observations("# nothing\n").is_err());
    }
}
