//! Exact text reports: a human-readable table or `key = value` lines.
//! Rationals always render as `p/q`, never as decimals.

use std::fmt::Write as _;

use crate::linalg::RatMatrix;
use crate::rational::{format_rational, Rational, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Kv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    Text(String),
    Flag(bool),
    Scalar(Rational),
    Vector(Vec<Rational>),
    Matrix(RatMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub fields: Vec<(String, Field)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), fields: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, field: Field) -> &mut Self {
        self.fields.push((key.into(), field));
        self
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.push(key, Field::Text(value.into()))
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.push(key, Field::Flag(value))
    }

    pub fn scalar(&mut self, key: impl Into<String>, value: &Rational) -> &mut Self {
        self.push(key, Field::Scalar(value.clone()))
    }

    pub fn vector(&mut self, key: impl Into<String>, value: &[Rational]) -> &mut Self {
        self.push(key, Field::Vector(value.to_vec()))
    }

    pub fn matrix(&mut self, key: impl Into<String>, value: &RatMatrix) -> &mut Self {
        self.push(key, Field::Matrix(value.clone()))
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, f)| f)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Kv => self.render_kv(),
        }
    }

    fn render_table(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = format!("== {} ==\n", self.title);
        for (key, field) in &self.fields {
            match field {
                Field::Matrix(m) => {
                    let _ = writeln!(out, "{key:<width$} :");
                    for i in 0..m.rows() {
                        let _ = writeln!(out, "    {}", Row(m.row(i)));
                    }
                }
                other => {
                    let _ = writeln!(out, "{key:<width$} : {}", scalar_text(other));
                }
            }
        }
        out
    }

    fn render_kv(&self) -> String {
        let mut out = format!("[{}]\n", self.title);
        for (key, field) in &self.fields {
            let value = match field {
                Field::Matrix(m) => m.inline(),
                Field::Vector(v) => format!("[{}]", Row(v)),
                other => scalar_text(other),
            };
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}

fn scalar_text(field: &Field) -> String {
    match field {
        Field::Text(s) => s.clone(),
        Field::Flag(b) => b.to_string(),
        Field::Scalar(r) => format_rational(r),
        Field::Vector(v) => Row(v).to_string(),
        Field::Matrix(m) => m.inline(),
    }
}

/// Splits a `kv` rendering back into `(section, key, value)` triples.
pub fn parse_kv(text: &str) -> Vec<(String, String, String)> {
    let mut section = String::new();
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(title) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if !line.contains(" = ") {
                section = title.to_string();
                continue;
            }
        }
        if let Some((k, v)) = line.split_once(" = ") {
            out.push((section.clone(), k.to_string(), v.to_string()));
        }
    }
    out
}
