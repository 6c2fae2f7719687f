//! Line-oriented text formats for DNFs and block structures.
//!
//! ```text
//! dnf 3 2        blocks 4       php 2
//! 1 -2           1 2            dnf 6 2
//! 3              4 3            1 -5
//! ```
//!
//! Literals are 1-based signed integers: `k` is variable `k-1`, `-k` its
//! negation. Term order and literal order are preserved verbatim. Lines
//! starting with `#` are comments.

use super::{BlockStructure, Dnf, Literal, PhpInstance, Term, VarId};
use crate::error::{FormulaError, ParseError};

/// A parsed formula file: either a plain DNF or one over pigeonhole variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaFile {
    Plain(Dnf),
    Php(PhpInstance, Dnf),
}

impl FormulaFile {
    pub fn dnf(&self) -> &Dnf {
        match self {
            FormulaFile::Plain(f) | FormulaFile::Php(_, f) => f,
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header<'a>(
    line: Option<(usize, &'a str)>,
    keyword: &str,
    arity: usize,
) -> Result<(usize, Vec<usize>), ParseError> {
    let (no, l) = line.ok_or_else(|| ParseError::new(1, format!("missing `{keyword}` header")))?;
    let mut parts = l.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(ParseError::new(no, format!("expected `{keyword}` header")));
    }
    let nums = parts
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| ParseError::new(no, format!("bad header field {p:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if nums.len() != arity {
        return Err(ParseError::new(
            no,
            format!("`{keyword}` header takes {arity} fields"),
        ));
    }
    Ok((no, nums))
}

fn parse_literal(no: usize, tok: &str, n: usize) -> Result<Literal, ParseError> {
    let k: i64 = tok
        .parse()
        .map_err(|_| ParseError::new(no, format!("bad literal {tok:?}")))?;
    if k == 0 {
        return Err(ParseError::new(no, "literal 0 is not allowed"));
    }
    let var = (k.unsigned_abs() - 1) as usize;
    if var >= n {
        return Err(ParseError::new(
            no,
            format!("variable {} out of range 1..={n}", k.unsigned_abs()),
        ));
    }
    Ok(Literal {
        var: VarId(var),
        positive: k > 0,
    })
}

fn parse_dnf_lines<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Dnf, ParseError> {
    let (hno, h) = parse_header(lines.next(), "dnf", 2)?;
    let (n, r) = (h[0], h[1]);
    let mut terms = Vec::new();
    for (no, line) in lines {
        let lits = line
            .split_whitespace()
            .map(|tok| parse_literal(no, tok, n))
            .collect::<Result<Vec<_>, _>>()?;
        if lits.len() > r {
            return Err(ParseError::new(
                no,
                format!("term width {} > r={r}", lits.len()),
            ));
        }
        let term = Term::new(lits).map_err(|e| match e {
            FormulaError::DuplicateVar { var } => {
                ParseError::new(no, format!("variable {} appears twice in term", var + 1))
            }
            other => ParseError::new(no, other.to_string()),
        })?;
        terms.push(term);
    }
    Dnf::new(n, r, terms).map_err(|e| ParseError::new(hno, e.to_string()))
}

pub fn parse_dnf(text: &str) -> Result<Dnf, ParseError> {
    parse_dnf_lines(content_lines(text))
}

pub fn serialize_dnf(f: &Dnf) -> String {
    let mut out = format!("dnf {} {}\n", f.n(), f.r());
    for t in f.terms() {
        let line: Vec<String> = t
            .literals()
            .iter()
            .map(|l| {
                let k = l.var.0 as i64 + 1;
                if l.positive { k } else { -k }.to_string()
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a PHP formula: a `php <n>` line followed by a DNF over `(n+1)·n` variables.
pub fn parse_php_dnf(text: &str) -> Result<(PhpInstance, Dnf), ParseError> {
    let mut lines = content_lines(text);
    let (no, h) = parse_header(lines.next(), "php", 1)?;
    let inst = PhpInstance::new(h[0]);
    let f = parse_dnf_lines(lines)?;
    if f.n() != inst.num_vars() {
        return Err(ParseError::new(
            no + 1,
            format!(
                "php {} needs {} variables, header says {}",
                inst.n,
                inst.num_vars(),
                f.n()
            ),
        ));
    }
    Ok((inst, f))
}

pub fn serialize_php_dnf(inst: PhpInstance, f: &Dnf) -> String {
    format!("php {}\n{}", inst.n, serialize_dnf(f))
}

/// Dispatches on the first header keyword.
pub fn parse_formula_file(text: &str) -> Result<FormulaFile, ParseError> {
    match content_lines(text).next() {
        Some((_, l)) if l.split_whitespace().next() == Some("php") => {
            parse_php_dnf(text).map(|(i, f)| FormulaFile::Php(i, f))
        }
        _ => parse_dnf(text).map(FormulaFile::Plain),
    }
}

pub fn parse_blocks(text: &str) -> Result<BlockStructure, ParseError> {
    let mut lines = content_lines(text);
    let (hno, h) = parse_header(lines.next(), "blocks", 1)?;
    let n = h[0];
    let mut blocks = Vec::new();
    for (no, line) in lines {
        let vars = line
            .split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(k) if k >= 1 && k <= n => Ok(VarId(k - 1)),
                _ => Err(ParseError::new(no, format!("bad block variable {tok:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        blocks.push(vars);
    }
    BlockStructure::new(n, blocks)
        .map_err(|e| ParseError::new(hno, e.to_string()))
}

pub fn serialize_blocks(b: &BlockStructure) -> String {
    let mut out = format!("blocks {}\n", b.n());
    for (_, vars) in b.blocks() {
        let line: Vec<String> = vars.iter().map(|v| (v.0 + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
