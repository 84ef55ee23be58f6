//! Tables of schemas with an expected verdict, checked by bounded search.

use std::fmt;

use thiserror::Error;

use super::{check_schema, CheckError, SchemaReport, SearchBounds, Verdict};
use crate::syntax::schema::Schema;
use crate::syntax::{Formula, ParseError};

const FORMULA_VARS: [&str; 2] = ["phi", "psi"];
const AGENT_VARS: [&str; 1] = ["i"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Valid,
    Invalid,
}

impl Expected {
    pub fn verdict(self) -> Verdict {
        match self {
            Expected::Valid => Verdict::ValidUpToBound,
            Expected::Invalid => Verdict::CountermodelFound,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Valid => "valid",
            Expected::Invalid => "invalid",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CatalogueRow {
    pub expected: Expected,
    pub schema: Schema,
}

#[derive(Debug, Error)]
pub enum CatalogueError {
    #[error("line {line}: expected `valid` or `invalid`, found {found:?}")]
    Expected { line: usize, found: String },
    #[error("line {line}: expected `expected | name | schema [| placeholder]`")]
    Columns { line: usize },
    #[error("line {line}: bad placeholder {text:?}; expected `name := aware-atoms(agent, var)`")]
    Placeholder { line: usize, text: String },
    #[error("line {line}: {source}")]
    Schema { line: usize, source: ParseError },
}

fn parse_placeholder(text: &str) -> Option<(&str, &str, &str)> {
    let (name, rhs) = text.split_once(":=")?;
    let args = rhs.trim().strip_prefix("aware-atoms(")?.strip_suffix(')')?;
    let (agent, var) = args.split_once(',')?;
    Some((name.trim(), agent.trim(), var.trim()))
}

/// Parses the `|`-separated catalogue format. `#` starts a comment line.
pub fn parse_catalogue(text: &str) -> Result<Vec<CatalogueRow>, CatalogueError> {
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        // `|` is also disjunction, so only the first two separators and an
        // optional trailing placeholder column are structural.
        let cols: Vec<&str> = trimmed.splitn(3, '|').map(str::trim).collect();
        let [expected, name, rest] = cols[..] else {
            return Err(CatalogueError::Columns { line });
        };
        let expected = match expected {
            "valid" => Expected::Valid,
            "invalid" => Expected::Invalid,
            other => return Err(CatalogueError::Expected { line, found: other.to_string() }),
        };
        let (schema_text, placeholder) = match rest.rsplit_once('|') {
            Some((s, p)) if p.contains(":=") => (s.trim(), Some(p.trim())),
            _ => (rest, None),
        };
        let mut schema = Schema::new(name, schema_text, &FORMULA_VARS, &AGENT_VARS)
            .map_err(|source| CatalogueError::Schema { line, source })?;
        if let Some(p) = placeholder {
            let (name, agent, var) =
                parse_placeholder(p).ok_or_else(|| CatalogueError::Placeholder { line, text: p.to_string() })?;
            schema = schema.with_aware_conjunction(name, agent, var);
        }
        rows.push(CatalogueRow { expected, schema });
    }
    Ok(rows)
}

/// The bundled catalogue of basic validities and invalidities.
pub fn section34() -> Vec<CatalogueRow> {
    parse_catalogue(crate::assets::CATALOGUE_SECTION34).expect("bundled catalogue parses")
}

/// The instantiation pool used for the bundled catalogue: `p`, `q`, `p & q`
/// and `I[i] p`.
pub fn default_pool() -> Vec<Formula> {
    ["p", "q", "p & q", "I[i] p"]
        .iter()
        .map(|s| crate::syntax::parse(s).expect("pool formula"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub expected: Expected,
    pub report: SchemaReport,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.report.verdict() == self.expected.verdict()
    }
}

pub fn run_catalogue(rows: &[CatalogueRow], pool: &[Formula], bounds: &SearchBounds) -> Result<Vec<RowReport>, CheckError> {
    rows.iter()
        .map(|row| {
            Ok(RowReport {
                expected: row.expected,
                report: check_schema(&row.schema, pool, bounds)?,
            })
        })
        .collect()
}
