//! Newline-delimited `x y` integer pairs. Lines starting with `#` and blank
//! lines are ignored.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected two integers, got {text:?}")]
    Malformed { line: usize, text: String },
}

pub fn parse(text: &str) -> Result<Vec<(i64, i64)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || ParseError::Malformed { line: i + 1, text: raw.to_string() };
        let mut it = line.split_whitespace();
        let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad());
        };
        out.push((x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?));
    }
    Ok(out)
}

pub fn render(points: &[(i64, i64)]) -> String {
    let mut s = String::with_capacity(points.len() * 24);
    for (x, y) in points {
        writeln!(s, "{x} {y}").expect("writing to a string");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let text = "# header\n1 2\n\n  -3   4\n#x\n";
        assert_eq!(parse(text).unwrap(), vec![(1, 2), (-3, 4)]);
        assert_eq!(render(&parse(text).unwrap()), "1 2\n-3 4\n");
    }

    #[test]
    fn rejects_junk() {
        assert!(parse("1 2 3\n").is_err());
        assert!(parse("1\n").is_err());
        assert_eq!(parse("1 2\n1.5 2\n"), Err(ParseError::Malformed { line: 2, text: "1.5 2".into() }));
    }

    #[test]
    fn round_trip() {
        let pts = vec![(0, 0), (i64::MAX, i64::MIN), (-7, 12)];
        assert_eq!(parse(&render(&pts)).unwrap(), pts);
    }
}
