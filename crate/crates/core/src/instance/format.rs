//! Line-oriented instance format.
//!
//! ```text
//! # optional comments
//! p mcs <n> <m> <c>
//! v <id> <color>      (n lines, ids 1..=n, colors 1..=c)
//! e <u> <v>           (m lines)
//! ```
//!
//! Ids are 1-based in text and 0-based in memory. Canonical output lists
//! vertices by id, edges by `(min, max)` ascending, with single spaces and
//! `\n` line endings.

use std::fmt::Write;

use thiserror::Error;

use crate::graph::{build_graph, Color, ColoredGraph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("header declares {expected} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
}

impl<'a> Tokens<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut start = None;
        for (i, ch) in text
            .char_indices()
            .chain(std::iter::once((text.len(), ' ')))
        {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    items.push((s + 1, &text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        Self { line, items }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::SyntaxError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn expect_len(&self, len: usize) -> Result<(), ParseError> {
        if self.items.len() == len {
            return Ok(());
        }
        let column = self.items.get(len).map_or_else(
            || self.items.last().map_or(1, |(c, t)| c + t.len()),
            |x| x.0,
        );
        Err(self.error(
            column,
            format!("expected {len} fields, found {}", self.items.len()),
        ))
    }

    fn number(&self, idx: usize) -> Result<usize, ParseError> {
        let (column, tok) = self.items[idx];
        tok.parse().map_err(|_| {
            self.error(
                column,
                format!("expected a non-negative integer, found `{tok}`"),
            )
        })
    }

    fn id(&self, idx: usize, n: usize) -> Result<Vertex, ParseError> {
        let value = self.number(idx)?;
        if value == 0 || value > n {
            return Err(self.error(
                self.items[idx].0,
                format!("vertex id {value} outside 1..={n}"),
            ));
        }
        Ok(value - 1)
    }
}

pub fn parse_instance(text: &str) -> Result<ColoredGraph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut colors: Vec<Option<Color>> = Vec::new();
    let mut vertex_lines = 0;
    let mut edges = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let tokens = Tokens::new(i + 1, raw);
        let Some(&(column, kind)) = tokens.items.first() else {
            continue;
        };
        if kind.starts_with('#') {
            continue;
        }
        match (kind, header) {
            ("p", None) => {
                tokens.expect_len(5)?;
                if tokens.items[1].1 != "mcs" {
                    return Err(tokens.error(tokens.items[1].0, "expected format name `mcs`"));
                }
                let (n, m, c) = (tokens.number(2)?, tokens.number(3)?, tokens.number(4)?);
                colors = vec![None; n];
                header = Some((n, m, c));
            }
            ("p", Some(_)) => return Err(tokens.error(column, "duplicate header")),
            ("v", Some((n, _, c))) => {
                tokens.expect_len(3)?;
                let v = tokens.id(1, n)?;
                let color = tokens.number(2)?;
                if color == 0 || color > c {
                    return Err(
                        tokens.error(tokens.items[2].0, format!("color {color} outside 1..={c}"))
                    );
                }
                if colors[v].replace(color as Color).is_some() {
                    return Err(
                        tokens.error(tokens.items[1].0, format!("vertex {} listed twice", v + 1))
                    );
                }
                vertex_lines += 1;
            }
            ("e", Some((n, _, _))) => {
                tokens.expect_len(3)?;
                edges.push((tokens.id(1, n)?, tokens.id(2, n)?));
            }
            ("v" | "e", None) => return Err(tokens.error(column, "record before header")),
            _ => return Err(tokens.error(column, format!("unknown record `{kind}`"))),
        }
    }

    let Some((n, m, _)) = header else {
        return Err(ParseError::SyntaxError {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing header".into(),
        });
    };
    if vertex_lines != n {
        return Err(ParseError::CountMismatch {
            what: "vertices",
            expected: n,
            found: vertex_lines,
        });
    }
    if edges.len() != m {
        return Err(ParseError::CountMismatch {
            what: "edges",
            expected: m,
            found: edges.len(),
        });
    }
    let colors: Vec<Color> = colors
        .into_iter()
        .map(|c| c.expect("all vertex lines present"))
        .collect();
    Ok(build_graph(&edges, &colors)?)
}

pub fn serialize_instance(g: &ColoredGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p mcs {} {} {}", g.n(), g.m(), g.num_colors()).unwrap();
    for v in 0..g.n() {
        writeln!(out, "v {} {}", v + 1, g.color(v)).unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}
