//! Plain-text input files.
//!
//! A matrix file has one row per line with whitespace-separated rational
//! literals (`0.8`, `4/5`, `1`). Blank lines and `#` comments are ignored.
//! An optional first line `m n` declares the shape and is checked against
//! the rows that follow. A prior file is a single row. A decision problem
//! file is a prior line followed by one action per line.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::experiment::{validate_experiment, Action, DecisionProblem, Experiment, ExperimentError, Prior};
use crate::linalg::RatMatrix;
use crate::rational::{parse_rational, Rational};

/// Where a problem in an input was found. Rows and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Location {
    pub file: Option<PathBuf>,
    pub row: Option<usize>,
    pub column: Option<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let file = self.file.as_deref().map_or_else(|| "<input>".to_string(), |p| p.display().to_string());
        write!(f, "{file}")?;
        if let Some(r) = self.row {
            write!(f, ", row {r}")?;
        }
        if let Some(c) = self.column {
            write!(f, ", column {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct InputError {
    pub location: Location,
    pub message: String,
}

impl InputError {
    fn at(file: Option<&Path>, row: Option<usize>, column: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            location: Location { file: file.map(Path::to_path_buf), row, column },
            message: message.into(),
        }
    }
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            (!tokens.is_empty()).then_some((i + 1, tokens))
        })
        .collect()
}

fn parse_row(file: Option<&Path>, line: usize, tokens: &[&str]) -> Result<Vec<Rational>, InputError> {
    tokens
        .iter()
        .enumerate()
        .map(|(c, tok)| {
            parse_rational(tok).map_err(|e| InputError::at(file, Some(line), Some(c + 1), e.to_string()))
        })
        .collect()
}

fn header_shape(tokens: &[&str]) -> Option<(usize, usize)> {
    match tokens {
        [m, n] => {
            let m: usize = m.parse().ok()?;
            let n: usize = n.parse().ok()?;
            (m > 0 && n > 0).then_some((m, n))
        }
        _ => None,
    }
}

pub fn parse_matrix(text: &str, file: Option<&Path>) -> Result<RatMatrix, InputError> {
    let lines = content_lines(text);
    let Some((first_line, first)) = lines.first() else {
        return Err(InputError::at(file, None, None, "no matrix rows"));
    };

    let mut body = &lines[..];
    if let Some((m, n)) = header_shape(first) {
        let rest = &lines[1..];
        let fits = rest.len() == m && rest.iter().all(|(_, t)| t.len() == n);
        let rectangular = lines.iter().all(|(_, t)| t.len() == first.len());
        if fits {
            body = rest;
        } else if !rectangular {
            return Err(InputError::at(
                file,
                Some(*first_line),
                None,
                format!("header declares {m}x{n} but {} data rows follow", rest.len()),
            ));
        }
    }

    let width = body[0].1.len();
    let mut rows = Vec::with_capacity(body.len());
    for (line, tokens) in body {
        if tokens.len() != width {
            return Err(InputError::at(
                file,
                Some(*line),
                None,
                format!("expected {width} entries, found {}", tokens.len()),
            ));
        }
        rows.push(parse_row(file, *line, tokens)?);
    }
    RatMatrix::from_rows(rows).map_err(|e| InputError::at(file, None, None, e.to_string()))
}

/// Parses and validates an experiment, reporting the offending position.
pub fn parse_experiment(text: &str, file: Option<&Path>) -> Result<Experiment, InputError> {
    let matrix = parse_matrix(text, file)?;
    validate_experiment(matrix).map_err(|e| match &e {
        ExperimentError::NegativeEntry { row, column, .. } => {
            InputError::at(file, Some(row + 1), Some(column + 1), e.to_string())
        }
        ExperimentError::ColumnSumNotOne { column, .. } => {
            InputError::at(file, None, Some(column + 1), e.to_string())
        }
        _ => InputError::at(file, None, None, e.to_string()),
    })
}

fn single_row(text: &str, file: Option<&Path>) -> Result<(usize, Vec<Rational>), InputError> {
    let lines = content_lines(text);
    match lines.as_slice() {
        [(line, tokens)] => Ok((*line, parse_row(file, *line, tokens)?)),
        [] => Err(InputError::at(file, None, None, "empty prior")),
        [_, (line, _), ..] => Err(InputError::at(file, Some(*line), None, "a prior is a single line")),
    }
}

pub fn parse_prior(text: &str, file: Option<&Path>) -> Result<Prior, InputError> {
    let (line, weights) = single_row(text, file)?;
    Prior::from_rationals(weights).map_err(|e| InputError::at(file, Some(line), None, e.to_string()))
}

pub fn parse_problem(text: &str, file: Option<&Path>) -> Result<DecisionProblem, InputError> {
    let lines = content_lines(text);
    let Some(((prior_line, prior_tokens), action_lines)) = lines.split_first() else {
        return Err(InputError::at(file, None, None, "empty decision problem"));
    };
    let prior = Prior::from_rationals(parse_row(file, *prior_line, prior_tokens)?)
        .map_err(|e| InputError::at(file, Some(*prior_line), None, e.to_string()))?;
    if action_lines.is_empty() {
        return Err(InputError::at(file, None, None, "decision problem has no actions"));
    }
    let mut actions = Vec::with_capacity(action_lines.len());
    for (line, tokens) in action_lines {
        if tokens.len() != prior.len() {
            return Err(InputError::at(
                file,
                Some(*line),
                None,
                format!("action has {} payoffs, prior has {} states", tokens.len(), prior.len()),
            ));
        }
        let payoffs = parse_row(file, *line, tokens)?;
        actions.push(Action::from_rationals(payoffs).map_err(|e| InputError::at(file, Some(*line), None, e.to_string()))?);
    }
    DecisionProblem::new(prior, actions).map_err(|e| InputError::at(file, None, None, e.to_string()))
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::at(Some(path), None, None, e.to_string()))
}

pub fn read_matrix(path: &Path) -> Result<RatMatrix, InputError> {
    parse_matrix(&read(path)?, Some(path))
}

pub fn read_experiment(path: &Path) -> Result<Experiment, InputError> {
    parse_experiment(&read(path)?, Some(path))
}

pub fn read_prior(path: &Path) -> Result<Prior, InputError> {
    parse_prior(&read(path)?, Some(path))
}

pub fn read_problem(path: &Path) -> Result<DecisionProblem, InputError> {
    parse_problem(&read(path)?, Some(path))
}

/// Parses the single-line matrix rendering `[a b; c d]`.
pub fn parse_inline_matrix(s: &str) -> Result<RatMatrix, InputError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| InputError::at(None, None, None, format!("not a bracketed matrix: `{s}`")))?;
    let text = inner.replace(';', "\n");
    parse_matrix(&text, None)
}
