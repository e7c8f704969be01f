//! Plain-text file formats. Every reader is strict and every writer emits
//! `\n`-terminated lines, so `write(read(f)) == f` for canonical files.
//!
//! - DIMACS CNF: `p cnf <n> <k>` followed by one `a b c 0` line per clause,
//!   with `c ...` comment lines allowed anywhere and blank lines ignored.
//! - Tournament: `tournament <n>`, then for `u = 0..n-1` a row of `n-1-u`
//!   characters where character `j` is `1` iff `u -> u+1+j`. An optional
//!   `labels` line is followed by `index<TAB>label` for every vertex.
//! - Ordering: a single line of whitespace-separated indices or labels.
//! - Roles: `index<TAB>label` per vertex.
//! - Assignment: `<var> 0|1` per variable.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::assignment::Assignment;
use crate::cnf::CnfInstance;
use crate::reduction::{RoleIndex, VertexRole};
use crate::tournament::{Ordering, Tournament};

/// A malformed input; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn numbered(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l))
}

fn utf8(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).or_else(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        err(line, "input is not valid UTF-8")
    })
}

/// A parsed DIMACS file with its comments kept for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsDocument {
    pub num_vars: usize,
    pub num_clauses: usize,
    /// Clauses as written, literal order preserved.
    pub clauses: Vec<[i64; 3]>,
    /// Comment lines verbatim, each tagged with the number of header and
    /// clause lines that precede it.
    pub comments: Vec<(usize, String)>,
}

impl DimacsDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut comments = Vec::new();
        let mut content_lines = 0;
        let mut last_line = 0;
        for (no, line) in numbered(text) {
            last_line = no;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
                comments.push((content_lines, line.to_string()));
                continue;
            }
            content_lines += 1;
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens[0] == "p" {
                if header.is_some() {
                    return err(no, "duplicate problem line");
                }
                match tokens.as_slice() {
                    ["p", "cnf", n, k] => {
                        let n = n
                            .parse()
                            .or_else(|_| err(no, format!("invalid variable count `{n}`")))?;
                        let k = k
                            .parse()
                            .or_else(|_| err(no, format!("invalid clause count `{k}`")))?;
                        header = Some((n, k, no));
                    }
                    _ => {
                        return err(
                            no,
                            "malformed problem line, expected `p cnf <variables> <clauses>`",
                        )
                    }
                }
                continue;
            }
            let Some((n, _, _)) = header else {
                return err(no, "clause before the `p cnf` problem line");
            };
            let mut lits = Vec::with_capacity(tokens.len());
            for tok in &tokens {
                let v: i64 = tok
                    .parse()
                    .or_else(|_| err(no, format!("invalid literal `{tok}`")))?;
                lits.push(v);
            }
            if lits.last() != Some(&0) {
                return err(no, "clause must end with 0");
            }
            lits.pop();
            if lits.contains(&0) {
                return err(no, "one clause per line; 0 may only terminate the clause");
            }
            if lits.len() != 3 {
                return err(
                    no,
                    format!("exactly 3 literals required, found {}", lits.len()),
                );
            }
            for &l in &lits {
                if l.unsigned_abs() as usize > n {
                    return err(
                        no,
                        format!("variable {} out of range 1..={n}", l.unsigned_abs()),
                    );
                }
            }
            clauses.push([lits[0], lits[1], lits[2]]);
        }
        let Some((num_vars, num_clauses, header_line)) = header else {
            return err(last_line.max(1), "missing `p cnf` problem line");
        };
        if clauses.len() != num_clauses {
            return err(
                header_line,
                format!(
                    "header declares {num_clauses} clauses, found {}",
                    clauses.len()
                ),
            );
        }
        Ok(Self {
            num_vars,
            num_clauses,
            clauses,
            comments,
        })
    }

    pub fn from_instance(instance: &CnfInstance) -> Self {
        Self {
            num_vars: instance.num_vars(),
            num_clauses: instance.num_clauses(),
            clauses: instance
                .clauses()
                .iter()
                .map(|c| [c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs()])
                .collect(),
            comments: Vec::new(),
        }
    }

    pub fn to_instance(&self) -> CnfInstance {
        CnfInstance::from_dimacs(self.num_vars, &self.clauses).expect("validated during parsing")
    }

    /// Canonical text, comments restored at their original positions.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut comments = self.comments.iter().peekable();
        let mut flush = |out: &mut String, before: usize| {
            while let Some((_, c)) = comments.next_if(|(pos, _)| *pos <= before) {
                out.push_str(c);
                out.push('\n');
            }
        };
        flush(&mut out, 0);
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.num_clauses);
        for (i, c) in self.clauses.iter().enumerate() {
            flush(&mut out, i + 1);
            let _ = writeln!(out, "{} {} {} 0", c[0], c[1], c[2]);
        }
        flush(&mut out, usize::MAX);
        out
    }
}

pub fn parse_dimacs(bytes: &[u8]) -> Result<CnfInstance, ParseError> {
    Ok(DimacsDocument::parse(utf8(bytes)?)?.to_instance())
}

pub fn write_dimacs(instance: &CnfInstance) -> String {
    DimacsDocument::from_instance(instance).render()
}

/// A tournament file, with its vertex labels when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TournamentFile {
    pub tournament: Tournament,
    pub labels: Option<Vec<String>>,
}

impl TournamentFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = numbered(text);
        let n = match lines.next() {
            Some((no, line)) => {
                let Some(rest) = line.strip_prefix("tournament ") else {
                    return err(no, "expected `tournament <n>`");
                };
                rest.parse::<usize>()
                    .or_else(|_| err(no, format!("invalid vertex count `{rest}`")))?
            }
            None => return err(1, "empty file, expected `tournament <n>`"),
        };
        let mut rows: Vec<Vec<bool>> = Vec::with_capacity(n);
        for u in 0..n.saturating_sub(1) {
            let Some((no, line)) = lines.next() else {
                return err(u + 2, format!("missing adjacency row for vertex {u}"));
            };
            if line.len() != n - 1 - u {
                return err(
                    no,
                    format!("row for vertex {u} must have {} characters", n - 1 - u),
                );
            }
            let mut row = Vec::with_capacity(line.len());
            for (col, ch) in line.bytes().enumerate() {
                match ch {
                    b'0' => row.push(false),
                    b'1' => row.push(true),
                    _ => return err(no, format!("column {}: expected 0 or 1", col + 1)),
                }
            }
            rows.push(row);
        }
        let labels = match lines.next() {
            None => None,
            Some((no, "labels")) => {
                let mut labels = Vec::with_capacity(n);
                for (no, line) in lines.by_ref() {
                    labels.push(parse_indexed_label(no, line, labels.len())?.to_string());
                }
                if labels.len() != n {
                    return err(
                        no,
                        format!("labels section lists {} of {n} vertices", labels.len()),
                    );
                }
                Some(labels)
            }
            Some((no, _)) => return err(no, "unexpected content after the adjacency rows"),
        };
        let tournament = Tournament::from_fn(n, |u, v| rows[u][v - u - 1]);
        Ok(Self { tournament, labels })
    }

    pub fn render(&self) -> String {
        let t = &self.tournament;
        let n = t.len();
        let mut out = format!("tournament {n}\n");
        for u in 0..n.saturating_sub(1) {
            out.extend((u + 1..n).map(|v| if t.has_arc(u, v) { '1' } else { '0' }));
            out.push('\n');
        }
        if let Some(labels) = &self.labels {
            out.push_str("labels\n");
            for (i, l) in labels.iter().enumerate() {
                let _ = writeln!(out, "{i}\t{l}");
            }
        }
        out
    }
}

fn parse_indexed_label(no: usize, line: &str, expected: usize) -> Result<&str, ParseError> {
    let Some((idx, label)) = line.split_once('\t') else {
        return err(no, "expected `index<TAB>label`");
    };
    if idx.parse::<usize>().ok() != Some(expected) {
        return err(no, format!("expected index {expected}, found `{idx}`"));
    }
    if label.is_empty() || label.chars().any(char::is_whitespace) {
        return err(no, "labels must be non-empty and contain no whitespace");
    }
    Ok(label)
}

pub fn read_tournament(text: &str) -> Result<TournamentFile, ParseError> {
    TournamentFile::parse(text)
}

pub fn write_tournament(t: &Tournament, labels: Option<&RoleIndex>) -> String {
    TournamentFile {
        tournament: t.clone(),
        labels: labels.map(|r| (0..r.len()).map(|v| r.label(v)).collect()),
    }
    .render()
}

/// Reads an ordering of `n` vertices. Tokens that are not indices are looked
/// up in `labels`.
pub fn read_ordering(
    text: &str,
    n: usize,
    labels: Option<&[String]>,
) -> Result<Ordering, ParseError> {
    let mut content = numbered(text).filter(|(_, l)| !l.trim().is_empty());
    let Some((no, line)) = content.next() else {
        if n == 0 {
            return Ok(Ordering::identity(0));
        }
        return err(1, "empty ordering file");
    };
    if let Some((extra, _)) = content.next() {
        return err(extra, "ordering must be a single line");
    }
    let lookup: HashMap<&str, usize> = labels
        .unwrap_or_default()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut seq = Vec::with_capacity(n);
    for tok in line.split_whitespace() {
        let v = match tok.parse::<usize>() {
            Ok(v) => v,
            Err(_) => match lookup.get(tok) {
                Some(&v) => v,
                None => return err(no, format!("unknown vertex `{tok}`")),
            },
        };
        seq.push(v);
    }
    if seq.len() != n {
        return err(
            no,
            format!("ordering lists {} vertices, tournament has {n}", seq.len()),
        );
    }
    Ordering::new(seq).or_else(|e| err(no, e.to_string()))
}

pub fn write_ordering(ord: &Ordering) -> String {
    let seq: Vec<String> = ord.sequence().iter().map(|v| v.to_string()).collect();
    format!("{}\n", seq.join(" "))
}

pub fn read_roles(text: &str) -> Result<RoleIndex, ParseError> {
    let mut roles = Vec::new();
    let mut last = 0;
    for (no, line) in numbered(text) {
        last = no;
        let label = parse_indexed_label(no, line, roles.len())?;
        let role: VertexRole = label
            .parse()
            .or_else(|e: crate::reduction::LabelError| err(no, e.to_string()))?;
        roles.push(role);
    }
    RoleIndex::new(roles).or_else(|e| err(last, e.to_string()))
}

pub fn write_roles(roles: &RoleIndex) -> String {
    let mut out = String::new();
    for v in 0..roles.len() {
        let _ = writeln!(out, "{v}\t{}", roles.label(v));
    }
    out
}

/// Reads a total assignment of `x_1..x_n`; each variable exactly once.
pub fn read_assignment(text: &str, num_vars: usize) -> Result<Assignment, ParseError> {
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    let mut last = 0;
    for (no, line) in numbered(text) {
        last = no;
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [var, val] = tokens.as_slice() else {
            return err(no, "expected `<variable> 0|1`");
        };
        let var: usize = var
            .parse()
            .or_else(|_| err(no, format!("invalid variable `{var}`")))?;
        if var == 0 || var > num_vars {
            return err(no, format!("variable {var} out of range 1..={num_vars}"));
        }
        let value = match *val {
            "0" => false,
            "1" => true,
            _ => return err(no, format!("value must be 0 or 1, found `{val}`")),
        };
        if values[var - 1].replace(value).is_some() {
            return err(no, format!("variable {var} assigned twice"));
        }
    }
    match values.iter().position(Option::is_none) {
        Some(i) => err(last.max(1), format!("variable {} is not assigned", i + 1)),
        None => Ok(Assignment::new(
            values.into_iter().map(Option::unwrap).collect(),
        )),
    }
}

pub fn write_assignment(nu: &Assignment) -> String {
    let mut out = String::new();
    for (i, &v) in nu.values().iter().enumerate() {
        let _ = writeln!(out, "{} {}", i + 1, u8::from(v));
    }
    out
}

/// The `v<i>=true|false` listing printed after a successful decode.
pub fn format_decoded(nu: &Assignment) -> String {
    let mut out = String::new();
    for (i, &v) in nu.values().iter().enumerate() {
        let _ = writeln!(out, "v{}={v}", i + 1);
    }
    out
}
