//! Line-oriented project file format.
//!
//! ```text
//! critpath v1 <cpm|pert>
//! # comment
//! <name> <from> <to> <duration>          fixed duration
//! <name> <from> <to> <a> <m> <b>         three-point estimate (pert only)
//! ```
//!
//! Fields are separated by whitespace; `#` starts a comment anywhere on a
//! line. Numbers are integers, decimals (`2.5`) or fractions (`37/6`).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::duration::Duration;
use crate::network::{Activity, DurationSpec};

pub const HEADER_MAGIC: &str = "critpath";
pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cpm,
    Pert,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Cpm => "cpm",
            Mode::Pert => "pert",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cpm" => Ok(Mode::Cpm),
            "pert" => Ok(Mode::Pert),
            other => Err(format!("unknown mode `{other}` (expected cpm or pert)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectDocument {
    pub mode: Mode,
    pub activities: Vec<Activity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}{}: {message}", field.as_ref().map(|f| format!(", field `{f}`")).unwrap_or_default())]
pub struct ParseError {
    /// 1-based; 0 when the error concerns the document as a whole.
    pub line: usize,
    pub field: Option<String>,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, field: Option<&str>, message: impl Into<String>) -> Self {
        ParseError {
            line,
            field: field.map(str::to_string),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("activity `{activity}`: {message}")]
pub struct WriteError {
    pub activity: String,
    pub message: String,
}

pub fn parse_project(document: &str) -> Result<ProjectDocument, ParseError> {
    let mut mode = None;
    let mut activities = Vec::new();

    for (idx, raw) in document.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let Some(mode) = mode else {
            mode = Some(parse_header(line_no, &fields)?);
            continue;
        };
        let number = |i: usize, what: &str| -> Result<Duration, ParseError> {
            fields[i]
                .parse::<Duration>()
                .map_err(|e| ParseError::new(line_no, Some(what), e.to_string()))
        };
        let duration = match (fields.len(), mode) {
            (4, _) => DurationSpec::Fixed(number(3, "duration")?),
            (6, Mode::Pert) => DurationSpec::Estimate {
                optimistic: number(3, "a")?,
                most_likely: number(4, "m")?,
                pessimistic: number(5, "b")?,
            },
            (6, Mode::Cpm) => {
                return Err(ParseError::new(
                    line_no,
                    Some("duration"),
                    "three-point estimate in a cpm document",
                ))
            }
            (n, _) => return Err(ParseError::new(
                line_no,
                None,
                format!(
                    "expected `name from to duration` or `name from to a m b`, found {n} fields"
                ),
            )),
        };
        activities.push(Activity::new(fields[0], fields[1], fields[2], duration));
    }

    let Some(mode) = mode else {
        return Err(ParseError::new(
            0,
            None,
            "missing `critpath v1 <cpm|pert>` header",
        ));
    };
    if activities.is_empty() {
        return Err(ParseError::new(0, None, "document lists no activities"));
    }
    Ok(ProjectDocument { mode, activities })
}

fn parse_header(line: usize, fields: &[&str]) -> Result<Mode, ParseError> {
    if fields.first() != Some(&HEADER_MAGIC) {
        return Err(ParseError::new(
            line,
            None,
            "missing `critpath v1 <cpm|pert>` header",
        ));
    }
    match fields.get(1) {
        Some(&FORMAT_VERSION) => {}
        Some(v) => {
            return Err(ParseError::new(
                line,
                Some("version"),
                format!("unsupported version `{v}`"),
            ))
        }
        None => return Err(ParseError::new(line, Some("version"), "missing version")),
    }
    let mode = fields
        .get(2)
        .ok_or_else(|| ParseError::new(line, Some("mode"), "missing mode"))?;
    if fields.len() > 3 {
        return Err(ParseError::new(line, None, "unexpected fields after mode"));
    }
    mode.parse()
        .map_err(|e: String| ParseError::new(line, Some("mode"), e))
}

/// Render a document that [`parse_project`] reads back to the same activities.
pub fn write_project(doc: &ProjectDocument) -> Result<String, WriteError> {
    let mut out = format!("{HEADER_MAGIC} {FORMAT_VERSION} {}\n", doc.mode);
    for a in &doc.activities {
        for (what, token) in [("name", &a.name), ("from", &a.from), ("to", &a.to)] {
            if token.is_empty() || token.contains(char::is_whitespace) || token.contains('#') {
                return Err(WriteError {
                    activity: a.name.clone(),
                    message: format!("{what} `{token}` is not a single bare token"),
                });
            }
        }
        match a.duration {
            DurationSpec::Fixed(d) => {
                out.push_str(&format!(
                    "{} {} {} {}\n",
                    a.name,
                    a.from,
                    a.to,
                    d.to_literal()
                ));
            }
            DurationSpec::Estimate {
                optimistic,
                most_likely,
                pessimistic,
            } => {
                if doc.mode == Mode::Cpm {
                    return Err(WriteError {
                        activity: a.name.clone(),
                        message: "three-point estimate in a cpm document".into(),
                    });
                }
                out.push_str(&format!(
                    "{} {} {} {} {} {}\n",
                    a.name,
                    a.from,
                    a.to,
                    optimistic.to_literal(),
                    most_likely.to_literal(),
                    pessimistic.to_literal()
                ));
            }
        }
    }
    Ok(out)
}
