//! Code files: a `field` header followed by one generator row per line.
//!
//! ```text
//! # comment
//! field p=2 m=3 poly=1 1 0 1
//! 1 0 w^3 w
//! 0 1 1 w^6
//! ```
//!
//! `poly` lists coefficients constant term first; an optional
//! `primitive=<c0 c1 ..>` selects a primitive element other than `x`.

use std::fmt;

use hullcode::{Field, LinearCode, MatGF};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn numbers(line: usize, key: &str, tokens: &[&str]) -> Result<Vec<u32>, ParseError> {
    if tokens.is_empty() {
        return Err(err(line, format!("{key} needs a value")));
    }
    tokens
        .iter()
        .map(|t| t.parse::<u32>().map_err(|_| err(line, format!("{key}: {t:?} is not a number"))))
        .collect()
}

/// Parses the header line `field p=<p> m=<m> poly=<c0 .. cm> [primitive=<..>]`.
pub fn parse_field_header(text: &str, line: usize) -> Result<Field, ParseError> {
    let mut words = text.split_whitespace();
    if words.next() != Some("field") {
        return Err(err(line, "expected header `field p=<p> m=<m> poly=<c0 .. cm>`"));
    }
    // group tokens under the most recent key
    let mut groups: Vec<(String, Vec<&str>)> = Vec::new();
    for w in words {
        if let Some((k, v)) = w.split_once('=') {
            if groups.iter().any(|(g, _)| g == k) {
                return Err(err(line, format!("duplicate key {k}")));
            }
            groups.push((k.to_string(), if v.is_empty() { vec![] } else { vec![v] }));
        } else if let Some(last) = groups.last_mut() {
            last.1.push(w);
        } else {
            return Err(err(line, format!("unexpected token {w:?}")));
        }
    }
    let get = |key: &str| groups.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_slice());
    for (k, _) in &groups {
        if !["p", "m", "poly", "primitive"].contains(&k.as_str()) {
            return Err(err(line, format!("unknown key {k}")));
        }
    }
    let single = |key: &str| -> Result<u32, ParseError> {
        let v = numbers(line, key, get(key).ok_or_else(|| err(line, format!("missing {key}=")))?)?;
        if v.len() != 1 {
            return Err(err(line, format!("{key} takes one number")));
        }
        Ok(v[0])
    };
    let p = single("p")?;
    let m = single("m")?;
    let poly = numbers(line, "poly", get("poly").ok_or_else(|| err(line, "missing poly="))?)?;
    let primitive = get("primitive").map(|t| numbers(line, "primitive", t)).transpose()?;
    Field::new(p, m, poly, primitive).map_err(|e| err(line, e.to_string()))
}

/// The header line for `field`.
pub fn render_field_header(field: &Field) -> String {
    let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = format!("field p={} m={} poly={}", field.characteristic(), field.degree(), join(field.poly()));
    let prim = field.digits(field.primitive());
    if prim != root_digits(field) {
        s.push_str(&format!(" primitive={}", join(&prim)));
    }
    s
}

/// Digits of the class of `x` modulo the field polynomial.
fn root_digits(field: &Field) -> Vec<u32> {
    let m = field.degree() as usize;
    let p = field.characteristic();
    if m == 1 {
        vec![(p - field.poly()[0]) % p]
    } else {
        let mut d = vec![0; m];
        d[1] = 1;
        d
    }
}

/// A parsed code file.
#[derive(Debug, Clone)]
pub struct CodeFile {
    pub field: Field,
    pub matrix: MatGF,
}

impl CodeFile {
    pub fn code(&self) -> Result<LinearCode, hullcode::CodeError> {
        LinearCode::new(self.matrix.clone())
    }
}

pub fn parse_code_file(text: &str) -> Result<CodeFile, ParseError> {
    let mut field: Option<Field> = None;
    let mut rows = Vec::new();
    let mut width: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let Some(f) = &field else {
            field = Some(parse_field_header(body, line)?);
            continue;
        };
        if body.starts_with("field") {
            return Err(err(line, "second field header"));
        }
        let row = f.parse_row(body).map_err(|e| err(line, e.to_string()))?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(err(line, format!("row has {} entries, expected {w}", row.len())));
            }
            _ => {}
        }
        rows.push(row);
    }
    let field = field.ok_or_else(|| err(1, "missing field header"))?;
    if rows.is_empty() {
        return Err(err(text.lines().count().max(1), "no generator rows"));
    }
    let matrix = MatGF::from_rows(&field, rows).map_err(|e| err(1, e.to_string()))?;
    Ok(CodeFile { field, matrix })
}

/// Matrix rows in element grammar, one per line.
pub fn render_matrix(m: &MatGF) -> String {
    let f = m.field();
    let mut s = String::new();
    for r in m.row_iter() {
        s.push_str(&f.render_row(r));
        s.push('\n');
    }
    s
}

pub fn render_code_file(m: &MatGF) -> String {
    format!("{}\n{}", render_field_header(m.field()), render_matrix(m))
}
