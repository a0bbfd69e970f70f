//! Readers for axial-map connectivity files.
//!
//! Two formats are accepted:
//!
//! * Prolog facts, one ground `connected(<atom>,<atom>,<int>).` per line,
//!   with `%` comment lines and blank lines.
//! * CSV edge lists with columns `from,to[,weight]` and an optional header.
//!
//! Neither parser stops at a bad line. Each line is either accepted,
//! skipped (comment, header or blank) or reported in [`ParseDiagnostics`],
//! so the counts always add up to the number of lines in the input.
//!
//! The third argument of `connected/3` is kept as a multiplicity on
//! [`FactLine`] but depth analysis only needs adjacency, so
//! [`to_edge_list`] collapses any multiplicity to a single edge.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::space::{is_token_char, SpaceId};

const PREDICATE: &str = "connected";

/// One `connected(from, to, multiplicity)` fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactLine {
    pub from: SpaceId,
    pub to: SpaceId,
    pub multiplicity: u32,
}

impl fmt::Display for FactLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{PREDICATE}({},{},{}).",
            self.from, self.to, self.multiplicity
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}", self.message, self.line)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostics {
    pub total_lines: usize,
    pub accepted: usize,
    /// Comment lines, plus the header row of a CSV file.
    pub skipped_comments: usize,
    pub blank_lines: usize,
    pub errors: Vec<LineError>,
}

impl ParseDiagnostics {
    /// Every line is accounted for exactly once.
    pub fn is_balanced(&self) -> bool {
        self.accepted + self.skipped_comments + self.errors.len() + self.blank_lines
            == self.total_lines
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapFileError {
    #[error("no connectivity facts found ({} line errors)", .diagnostics.errors.len())]
    EmptyInput { diagnostics: ParseDiagnostics },
}

impl MapFileError {
    pub fn diagnostics(&self) -> &ParseDiagnostics {
        match self {
            MapFileError::EmptyInput { diagnostics } => diagnostics,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject whitespace inside and around facts, and trailing comments.
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Prolog,
    Csv,
}

impl InputFormat {
    /// `.pl` selects Prolog facts, `.csv` an edge list.
    pub fn from_path(path: &Path) -> Option<InputFormat> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "pl" => Some(InputFormat::Prolog),
            "csv" => Some(InputFormat::Csv),
            _ => None,
        }
    }
}

pub type ParseOutput = (Vec<FactLine>, ParseDiagnostics);

pub fn parse(
    text: &str,
    format: InputFormat,
    options: ParseOptions,
) -> Result<ParseOutput, MapFileError> {
    match format {
        InputFormat::Prolog => parse_fact_file_with(text, options),
        InputFormat::Csv => parse_csv_edges(text),
    }
}

/// Parses a Prolog fact file in lenient mode.
pub fn parse_fact_file(text: &str) -> Result<ParseOutput, MapFileError> {
    parse_fact_file_with(text, ParseOptions::default())
}

pub fn parse_fact_file_with(
    text: &str,
    options: ParseOptions,
) -> Result<ParseOutput, MapFileError> {
    let mut facts = Vec::new();
    let mut diag = ParseDiagnostics::default();
    for (i, line) in text.lines().enumerate() {
        diag.total_lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            diag.blank_lines += 1;
        } else if trimmed.starts_with('%') {
            diag.skipped_comments += 1;
        } else {
            match parse_fact(line, options.strict) {
                Ok(fact) => {
                    diag.accepted += 1;
                    facts.push(fact);
                }
                Err(message) => diag.errors.push(LineError {
                    line: i + 1,
                    message,
                }),
            }
        }
    }
    finish(facts, diag)
}

fn finish(
    facts: Vec<FactLine>,
    diagnostics: ParseDiagnostics,
) -> Result<ParseOutput, MapFileError> {
    if facts.is_empty() {
        Err(MapFileError::EmptyInput { diagnostics })
    } else {
        Ok((facts, diagnostics))
    }
}

fn parse_fact(line: &str, strict: bool) -> Result<FactLine, String> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let body = if strict {
        if line.chars().any(char::is_whitespace) {
            return Err("whitespace not allowed in strict mode".into());
        }
        line
    } else {
        match line.find('%') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim()
    };

    let name_end = body.find(|c: char| !is_token_char(c)).unwrap_or(body.len());
    let name = &body[..name_end];
    if name.is_empty() {
        return Err(format!(
            "expected a predicate name, found {:?}",
            first_char(body)
        ));
    }
    let rest = body[name_end..].trim_start();

    let (args, rest): (Vec<&str>, &str) = if let Some(inner) = rest.strip_prefix('(') {
        let close = inner.find(')').ok_or("missing `)`")?;
        let content = &inner[..close];
        if content.contains('(') {
            return Err("nested terms are not supported".into());
        }
        let args = if content.trim().is_empty() {
            Vec::new()
        } else {
            content.split(',').map(str::trim).collect()
        };
        (args, inner[close + 1..].trim_start())
    } else {
        (Vec::new(), rest)
    };

    if rest.starts_with(":-") {
        return Err("rules are not supported, only ground facts".into());
    }
    let tail = rest
        .strip_prefix('.')
        .ok_or_else(|| format!("expected `.` to end the fact, found {:?}", first_char(rest)))?;
    if !tail.trim().is_empty() {
        return Err(format!("unexpected text after fact: {:?}", tail.trim()));
    }

    if name != PREDICATE {
        return Err(format!(
            "unknown predicate `{name}/{}`, expected {PREDICATE}/3",
            args.len()
        ));
    }
    if args.len() != 3 {
        return Err(format!("arity {}, expected 3", args.len()));
    }
    Ok(FactLine {
        from: parse_atom(args[0])?,
        to: parse_atom(args[1])?,
        multiplicity: parse_multiplicity(args[2])?,
    })
}

fn first_char(s: &str) -> String {
    s.chars()
        .next()
        .map_or_else(|| "end of line".to_string(), |c| c.to_string())
}

fn parse_atom(arg: &str) -> Result<SpaceId, String> {
    let first = arg.chars().next().ok_or("empty atom")?;
    if first.is_ascii_uppercase() || first == '_' {
        return Err(format!("variable `{arg}` not allowed in a ground fact"));
    }
    if !first.is_ascii_lowercase() || !arg.chars().all(is_token_char) {
        return Err(format!("invalid atom `{arg}`, expected [a-z][a-zA-Z0-9_]*"));
    }
    SpaceId::new(arg).map_err(|e| e.to_string())
}

fn parse_multiplicity(arg: &str) -> Result<u32, String> {
    if arg.is_empty() {
        return Err("empty multiplicity".into());
    }
    if !arg.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!(
            "invalid multiplicity `{arg}`, expected a positive integer"
        ));
    }
    if arg.bytes().all(|b| b == b'0') {
        return Err("multiplicity must be at least 1".into());
    }
    if arg.starts_with('0') {
        return Err(format!(
            "multiplicity `{arg}` must be a positive integer without leading zeros"
        ));
    }
    arg.parse::<u32>()
        .map_err(|_| format!("multiplicity `{arg}` out of range"))
}

/// Parses a `from,to[,weight]` edge list. A missing or empty weight
/// defaults to 1.
pub fn parse_csv_edges(text: &str) -> Result<ParseOutput, MapFileError> {
    let mut facts = Vec::new();
    let mut diag = ParseDiagnostics::default();
    let mut seen_data = false;
    for (i, line) in text.lines().enumerate() {
        diag.total_lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            diag.blank_lines += 1;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if !seen_data && is_header(&fields) {
            seen_data = true;
            diag.skipped_comments += 1;
            continue;
        }
        seen_data = true;
        match csv_row(&fields) {
            Ok(fact) => {
                diag.accepted += 1;
                facts.push(fact);
            }
            Err(message) => diag.errors.push(LineError {
                line: i + 1,
                message,
            }),
        }
    }
    finish(facts, diag)
}

fn is_header(fields: &[&str]) -> bool {
    let lower: Vec<String> = fields.iter().map(|f| f.to_ascii_lowercase()).collect();
    matches!(
        lower
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .as_slice(),
        ["from", "to"] | ["from", "to", "weight"]
    )
}

fn csv_row(fields: &[&str]) -> Result<FactLine, String> {
    if !(2..=3).contains(&fields.len()) {
        return Err(format!("expected 2 or 3 columns, found {}", fields.len()));
    }
    let name = |s: &str| -> Result<SpaceId, String> {
        if s.is_empty() {
            return Err("empty atom".into());
        }
        SpaceId::new(s).map_err(|e| e.to_string())
    };
    let multiplicity = match fields.get(2) {
        None | Some(&"") => 1,
        Some(w) => parse_multiplicity(w)?,
    };
    Ok(FactLine {
        from: name(fields[0])?,
        to: name(fields[1])?,
        multiplicity,
    })
}

/// Renders facts back into fact-file syntax, one per line.
pub fn write_fact_file(facts: &[FactLine]) -> String {
    let mut out = String::new();
    for fact in facts {
        out.push_str(&fact.to_string());
        out.push('\n');
    }
    out
}

/// Unordered, deduplicated adjacency derived from a fact list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    /// Each pair has the smaller name first; pairs are sorted.
    pub edges: Vec<(SpaceId, SpaceId)>,
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
    /// Facts whose multiplicity was above 1 before collapsing.
    pub weighted_facts: usize,
}

pub fn to_edge_list(facts: &[FactLine]) -> EdgeList {
    let mut unique = BTreeSet::new();
    let mut list = EdgeList::default();
    for fact in facts {
        if fact.multiplicity > 1 {
            list.weighted_facts += 1;
        }
        if fact.from == fact.to {
            list.self_loops_dropped += 1;
            continue;
        }
        let pair = if fact.from < fact.to {
            (fact.from.clone(), fact.to.clone())
        } else {
            (fact.to.clone(), fact.from.clone())
        };
        if !unique.insert(pair) {
            list.duplicates_merged += 1;
        }
    }
    list.edges = unique.into_iter().collect();
    list
}
