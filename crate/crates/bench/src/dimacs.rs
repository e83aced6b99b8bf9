//! DIMACS CNF reading and canonical writing, restricted to 3-literal clauses.
//!
//! Reader rules: lines whose first non-blank character is `c` are comments;
//! the header is `p cnf <vars> <clauses>`; clause literals are
//! whitespace-separated nonzero integers terminated by `0` and may span lines;
//! a line consisting of `%` ends the data (SATLIB convention). Everything
//! after the terminating `%` is ignored.
//!
//! Writer output is canonical: the header, then one clause per line with
//! single spaces and a trailing ` 0`, every line ending in `\n`.

use std::fmt::Write as _;

use docsat_core::{build_formula, Formula};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("input is not valid UTF-8")]
    InvalidEncoding,
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header")]
    MalformedHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {literal} outside 1..={n_vars}")]
    LiteralOutOfRange { line: usize, literal: i64, n_vars: usize },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("line {line}: clause with {len} literals (only 3-SAT is accepted)")]
    NonTernaryClause { line: usize, len: usize },
    #[error(transparent)]
    Formula(#[from] docsat_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Clause count must match the header.
    #[default]
    Strict,
    /// A clause count mismatch is kept as a warning.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DimacsDocument {
    pub n_vars: usize,
    pub n_clauses_declared: usize,
    pub clauses: Vec<[i64; 3]>,
    /// Comment text without the leading `c` and one following space.
    pub comments: Vec<String>,
    pub warnings: Vec<String>,
}

impl DimacsDocument {
    pub fn to_formula(&self) -> Result<Formula, DimacsError> {
        Ok(build_formula(self.n_vars, &self.clauses)?)
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize), DimacsError> {
    let bad = || DimacsError::MalformedHeader { line: lineno };
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        ["p", "cnf", n, m] => Ok((n.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

/// Parses a document, keeping comments.
pub fn parse_document(input: &[u8], mode: ParseMode) -> Result<DimacsDocument, DimacsError> {
    let text = std::str::from_utf8(input).map_err(|_| DimacsError::InvalidEncoding)?;
    let mut doc = DimacsDocument::default();
    let mut header = None;
    let mut current: Vec<i64> = Vec::with_capacity(3);
    let mut clause_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            doc.comments.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader { line: lineno });
            }
            header = Some(parse_header(line, lineno)?);
            continue;
        }
        if line == "%" {
            break;
        }
        let Some((n_vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line: lineno });
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| DimacsError::InvalidToken { line: lineno, token: tok.to_string() })?;
            if current.is_empty() {
                clause_line = lineno;
            }
            if lit == 0 {
                if current.len() != 3 {
                    return Err(DimacsError::NonTernaryClause { line: clause_line, len: current.len() });
                }
                doc.clauses.push([current[0], current[1], current[2]]);
                current.clear();
                continue;
            }
            if lit.unsigned_abs() > n_vars as u64 {
                return Err(DimacsError::LiteralOutOfRange { line: lineno, literal: lit, n_vars });
            }
            current.push(lit);
        }
    }

    let Some((n_vars, declared)) = header else {
        return Err(DimacsError::MissingHeader { line: text.lines().count() + 1 });
    };
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    doc.n_vars = n_vars;
    doc.n_clauses_declared = declared;
    if declared != doc.clauses.len() {
        let mismatch = DimacsError::ClauseCountMismatch { declared, found: doc.clauses.len() };
        match mode {
            ParseMode::Strict => return Err(mismatch),
            ParseMode::Lenient => doc.warnings.push(mismatch.to_string()),
        }
    }
    Ok(doc)
}

/// Strict parse straight to a [`Formula`].
pub fn parse_dimacs(input: &[u8]) -> Result<Formula, DimacsError> {
    parse_document(input, ParseMode::Strict)?.to_formula()
}

/// Canonical DIMACS text of `formula`.
pub fn write_dimacs(formula: &Formula) -> String {
    write_dimacs_with_comments(formula, &[])
}

/// Canonical DIMACS text preceded by `c` comment lines.
pub fn write_dimacs_with_comments(formula: &Formula, comments: &[String]) -> String {
    let mut out = String::with_capacity(16 + 14 * formula.n_clauses());
    for c in comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", formula.n_vars(), formula.n_clauses());
    for [a, b, c] in formula.to_dimacs_triples() {
        let _ = writeln!(out, "{a} {b} {c} 0");
    }
    out
}
