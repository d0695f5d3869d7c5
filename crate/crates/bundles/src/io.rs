//! Plain-text file formats: a line-oriented graph format, a connection
//! format that references its base and fiber graph files, and DOT export.
//!
//! Graph files hold `n <count>` followed by `e <u> <v>` edge lines and
//! optional `label <v> <text>` lines. Connection files hold `base <path>`
//! and `fiber <path>` references (resolved relative to the connection
//! file's directory) followed by `phi <x> <y> <image...>` twist lines;
//! unlisted edges carry the identity. Blank lines and `#` comments are
//! ignored everywhere. Writers emit canonical form — sorted edges, sorted
//! labels, and only non-identity twists on the low-to-high orientation —
//! so equal objects produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::bundle::Connection;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;

fn parse_failure<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn take_number(token: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let token = match token {
        Some(t) => t,
        None => return parse_failure(line, format!("missing {what}")),
    };
    token
        .parse::<usize>()
        .map_err(|_| Error::Parse {
            line,
            message: format!("{what} is not a non-negative integer: {token:?}"),
        })
}

/// Parses the line-oriented graph format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut labels: Vec<(usize, String)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let number = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let directive = tokens.next().expect("non-blank line has a first token");
        match directive {
            "n" => {
                if declared.is_some() {
                    return parse_failure(number, "vertex count declared twice");
                }
                let count = take_number(tokens.next(), number, "vertex count")?;
                if tokens.next().is_some() {
                    return parse_failure(number, "trailing tokens after the vertex count");
                }
                declared = Some(count);
            }
            "e" => {
                let n = match declared {
                    Some(n) => n,
                    None => return parse_failure(number, "edge before the vertex count"),
                };
                let u = take_number(tokens.next(), number, "edge endpoint")?;
                let v = take_number(tokens.next(), number, "edge endpoint")?;
                if tokens.next().is_some() {
                    return parse_failure(number, "trailing tokens after the edge");
                }
                if u >= n || v >= n {
                    return parse_failure(number, format!("edge endpoint out of range 0..{n}"));
                }
                if u == v {
                    return parse_failure(number, format!("self-loop at vertex {u}"));
                }
                edges.push((u, v));
            }
            "label" => {
                let n = match declared {
                    Some(n) => n,
                    None => return parse_failure(number, "label before the vertex count"),
                };
                let v = take_number(tokens.next(), number, "labeled vertex")?;
                if v >= n {
                    return parse_failure(number, format!("labeled vertex out of range 0..{n}"));
                }
                let text: Vec<&str> = tokens.collect();
                if text.is_empty() {
                    return parse_failure(number, "label text missing");
                }
                labels.push((v, text.join(" ")));
            }
            other => {
                return parse_failure(number, format!("unknown directive {other:?}"));
            }
        }
    }
    let n = match declared {
        Some(n) => n,
        None => return parse_failure(0, "the file never declares a vertex count"),
    };
    let mut graph = Graph::from_edges(n, &edges)?;
    for (v, text) in labels {
        graph.set_label(v, text);
    }
    Ok(graph)
}

/// Renders a graph in canonical textual form.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", g.vertex_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    for (v, text) in g.labels() {
        writeln!(out, "label {v} {text}").unwrap();
    }
    out
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn save_graph(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, write_graph(g))?;
    Ok(())
}

fn resolve_reference(dir: &Path, reference: &str) -> PathBuf {
    let candidate = Path::new(reference);
    if candidate.is_absolute() {
        candidate.to_path_buf()
    } else {
        dir.join(candidate)
    }
}

/// Parses the connection format, loading the referenced base and fiber
/// graph files relative to `dir`.
pub fn parse_connection(text: &str, dir: &Path) -> Result<Connection> {
    let mut base_ref: Option<String> = None;
    let mut fiber_ref: Option<String> = None;
    let mut twists: Vec<((usize, usize), Permutation)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let number = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let directive = tokens.next().expect("non-blank line has a first token");
        match directive {
            "base" | "fiber" => {
                let slot = if directive == "base" {
                    &mut base_ref
                } else {
                    &mut fiber_ref
                };
                if slot.is_some() {
                    return parse_failure(number, format!("{directive} reference given twice"));
                }
                let reference: Vec<&str> = tokens.collect();
                if reference.is_empty() {
                    return parse_failure(number, format!("missing {directive} reference"));
                }
                *slot = Some(reference.join(" "));
            }
            "phi" => {
                let x = take_number(tokens.next(), number, "twist tail")?;
                let y = take_number(tokens.next(), number, "twist head")?;
                let mut image = Vec::new();
                for token in tokens {
                    image.push(take_number(Some(token), number, "twist image entry")?);
                }
                if image.is_empty() {
                    return parse_failure(number, "twist image missing");
                }
                let perm = Permutation::from_image(image).map_err(|e| Error::Parse {
                    line: number,
                    message: format!("twist image is not a permutation: {e}"),
                })?;
                twists.push(((x, y), perm));
            }
            other => {
                return parse_failure(number, format!("unknown directive {other:?}"));
            }
        }
    }
    let base_ref = match base_ref {
        Some(r) => r,
        None => return parse_failure(0, "the file never names a base graph"),
    };
    let fiber_ref = match fiber_ref {
        Some(r) => r,
        None => return parse_failure(0, "the file never names a fiber graph"),
    };
    let base = read_graph(&resolve_reference(dir, &base_ref))?;
    let fiber = read_graph(&resolve_reference(dir, &fiber_ref))?;
    Connection::new(base, fiber, twists)
}

pub fn read_connection(path: &Path) -> Result<Connection> {
    let text = fs::read_to_string(path)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_connection(&text, dir)
}

/// Renders a connection in canonical textual form, naming the given graph
/// file references.
pub fn write_connection(c: &Connection, base_ref: &str, fiber_ref: &str) -> String {
    let mut out = String::new();
    writeln!(out, "base {base_ref}").unwrap();
    writeln!(out, "fiber {fiber_ref}").unwrap();
    for (&(tail, head), perm) in c.stored_twists() {
        write!(out, "phi {tail} {head}").unwrap();
        for &entry in perm.as_slice() {
            write!(out, " {entry}").unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

pub fn save_connection(c: &Connection, path: &Path, base_ref: &str, fiber_ref: &str) -> Result<()> {
    fs::write(path, write_connection(c, base_ref, fiber_ref))?;
    Ok(())
}

fn dot_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders a graph in DOT form with vertices and edges in ascending order.
pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph g {\n");
    for v in 0..g.vertex_count() {
        match g.label(v) {
            Some(text) => writeln!(out, "  {v} [label=\"{}\"];", dot_escape(text)).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
