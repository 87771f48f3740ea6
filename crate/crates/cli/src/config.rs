//! The line-oriented configuration format:
//!
//! ```text
//! # symmetric fixture
//! circle 0 0 1
//! point -1/2 0
//! point 0 0
//! point 1/2 0
//! ```
//!
//! The circle is given by its center and squared radius. Comments may appear
//! anywhere and are kept on serialization; blank lines are dropped.

use std::fmt;

use betweenness_core::action::{ConfigError, ConfigK};
use betweenness_core::geometry::{format_rational, parse_rational, RCircle, RPoint, Rational};
use thiserror::Error;

/// Points accepted per file.
pub const MAX_POINTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected a `circle` line first")]
    MissingCircle,
    #[error("second `circle` line")]
    DuplicateCircle,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`{directive}` takes {expected} values, got {actual}")]
    FieldCount {
        directive: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("at most {MAX_POINTS} points are supported")]
    TooManyPoints,
    #[error("no `point` lines")]
    NoPoints,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    pub center: RPoint,
    pub radius_sq: Rational,
    pub points: Vec<RPoint>,
    /// Comment text with the number of data lines that precede it.
    pub comments: Vec<(usize, String)>,
    /// Source line of each data line: the circle, then the points.
    lines: Vec<usize>,
}

fn rationals<const N: usize>(
    directive: &'static str,
    fields: &[&str],
    line: usize,
) -> Result<[Rational; N], ParseError> {
    if fields.len() != N {
        let kind = ParseErrorKind::FieldCount {
            directive,
            expected: N,
            actual: fields.len(),
        };
        return Err(ParseError { line, kind });
    }
    let mut out: [Rational; N] = std::array::from_fn(|_| Rational::default());
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = parse_rational(field).map_err(|_| ParseError {
            line,
            kind: ParseErrorKind::MalformedRational(field.to_string()),
        })?;
    }
    Ok(out)
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut circle: Option<(RPoint, Rational)> = None;
        let mut points = Vec::new();
        let mut comments = Vec::new();
        let mut lines = Vec::new();
        let mut last_line = 0;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            last_line = line;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                comments.push((lines.len(), comment.trim().to_string()));
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match fields[0] {
                "circle" => {
                    if circle.is_some() {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::DuplicateCircle,
                        });
                    }
                    let [cx, cy, r2] = rationals("circle", &fields[1..], line)?;
                    circle = Some((RPoint::new(cx, cy), r2));
                }
                "point" => {
                    if circle.is_none() {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::MissingCircle,
                        });
                    }
                    if points.len() == MAX_POINTS {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::TooManyPoints,
                        });
                    }
                    let [x, y] = rationals("point", &fields[1..], line)?;
                    points.push(RPoint::new(x, y));
                }
                other => {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::UnknownDirective(other.to_string()),
                    });
                }
            }
            lines.push(line);
        }
        let end = last_line.max(1);
        let Some((center, radius_sq)) = circle else {
            return Err(ParseError {
                line: end,
                kind: ParseErrorKind::MissingCircle,
            });
        };
        if points.is_empty() {
            return Err(ParseError {
                line: end,
                kind: ParseErrorKind::NoPoints,
            });
        }
        Ok(ConfigFile {
            center,
            radius_sq,
            points,
            comments,
            lines,
        })
    }

    pub fn from_config(config: &ConfigK) -> Self {
        let circle = config.circle();
        ConfigFile {
            center: circle.center().clone(),
            radius_sq: circle.radius_sq().clone(),
            points: config.points().to_vec(),
            comments: Vec::new(),
            lines: Vec::new(),
        }
    }

    /// Validates the geometry. Errors point at the offending line.
    pub fn to_config(&self) -> Result<ConfigK, ParseError> {
        let line_of = |data: usize| self.lines.get(data).copied().unwrap_or(0);
        let invalid = |line: usize, msg: String| ParseError {
            line,
            kind: ParseErrorKind::Invalid(msg),
        };
        let circle = RCircle::new(self.center.clone(), self.radius_sq.clone())
            .map_err(|e| invalid(line_of(0), e.to_string()))?;
        ConfigK::new(circle, self.points.clone()).map_err(|e| {
            let line = match e {
                ConfigError::NotInterior(i) | ConfigError::NotMonotone(i) => line_of(i),
                ConfigError::Duplicate(_, j) => line_of(j),
                _ => line_of(0),
            };
            invalid(line, e.to_string())
        })
    }
}

impl fmt::Display for ConfigFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut comments = self.comments.iter().peekable();
        let mut data = vec![format!(
            "circle {} {} {}",
            format_rational(&self.center.x),
            format_rational(&self.center.y),
            format_rational(&self.radius_sq)
        )];
        data.extend(
            self.points
                .iter()
                .map(|p| format!("point {} {}", format_rational(&p.x), format_rational(&p.y))),
        );
        for (k, line) in data.iter().enumerate() {
            while let Some((_, text)) = comments.next_if(|(before, _)| *before <= k) {
                writeln!(f, "# {text}")?;
            }
            writeln!(f, "{line}")?;
        }
        for (_, text) in comments {
            writeln!(f, "# {text}")?;
        }
        Ok(())
    }
}

/// Parses and validates in one step.
pub fn parse_config(text: &str) -> Result<ConfigK, ParseError> {
    ConfigFile::parse(text)?.to_config()
}
