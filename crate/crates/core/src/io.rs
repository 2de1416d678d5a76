//! Text formats for graphs: JSON, plain edge lists and DOT.
//!
//! JSON is `{"vertices": [...], "edges": [[u, v], ...]}` with duplicate vertices and
//! duplicate edges rejected. An edge list has one `u v` pair per line, `#` starts a
//! comment, and `v x` declares a vertex (isolated or not). DOT output uses the
//! undirected subset this module can read back.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

/// Wire form of a graph, for embedding inside larger JSON documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl From<&Graph> for GraphDoc {
    fn from(g: &Graph) -> Self {
        GraphDoc {
            vertices: g.labels().to_vec(),
            edges: g.edge_labels(),
        }
    }
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<Graph> {
        let mut seen = HashSet::new();
        for (i, (a, b)) in self.edges.iter().enumerate() {
            let key = if a <= b { (a, b) } else { (b, a) };
            if !seen.insert(key) {
                return Err(Error::parse(
                    format!("edges[{i}]"),
                    format!("duplicate edge ({a}, {b})"),
                ));
            }
        }
        Graph::new(&self.vertices, self.edges.iter().map(|(a, b)| (a, b)))
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(
        format!("line {}, column {}", e.line(), e.column()),
        e.to_string(),
    )
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let doc: GraphJson = serde_json::from_str(text).map_err(json_error)?;
    GraphDoc {
        vertices: doc.vertices,
        edges: doc.edges,
    }
    .to_graph()
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphDoc::from(g)).expect("graph serializes")
}

pub fn graph_from_edge_list(text: &str) -> Result<Graph> {
    let mut vertices: Vec<String> = Vec::new();
    let mut known = HashSet::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("line {}", lineno + 1);
        let toks: Vec<&str> = line.split_whitespace().collect();
        let mut declare = |v: &str| {
            if known.insert(v.to_owned()) {
                vertices.push(v.to_owned());
            }
        };
        match toks.as_slice() {
            ["v", rest @ ..] if !rest.is_empty() => rest.iter().for_each(|v| declare(v)),
            [a, b] => {
                if a == b {
                    return Err(Error::parse(at(), format!("self-loop ({a}, {a})")));
                }
                declare(a);
                declare(b);
                edges.push((a.to_string(), b.to_string()));
            }
            _ => {
                return Err(Error::parse(
                    at(),
                    format!("expected \"u v\" or \"v <label>...\", found {line:?}"),
                ))
            }
        }
    }
    Graph::new(vertices, edges)
}

pub fn graph_to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for l in g.labels() {
        writeln!(out, "v {l}").unwrap();
    }
    for (a, b) in g.edge_labels() {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", dot_quote(name));
    for l in g.labels() {
        writeln!(out, "  {};", dot_quote(l)).unwrap();
    }
    for (a, b) in g.edge_labels() {
        writeln!(out, "  {} -- {};", dot_quote(&a), dot_quote(&b)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Reads the DOT subset written by [`graph_to_dot`]: node statements and single
/// `a -- b` edge statements, quoted or bare identifiers, one statement per line.
pub fn graph_from_dot(text: &str) -> Result<Graph> {
    let mut vertices = Vec::new();
    let mut known = HashSet::new();
    let mut edges = Vec::new();
    let mut opened = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let at = || format!("line {}", lineno + 1);
        if line.is_empty() || line.starts_with("//") || line.starts_with('#') {
            continue;
        }
        if !opened {
            if !(line.starts_with("graph") || line.starts_with("strict graph"))
                || !line.ends_with('{')
            {
                return Err(Error::parse(at(), "expected \"graph <name> {\""));
            }
            opened = true;
            continue;
        }
        if line == "}" {
            return Graph::new(vertices, edges);
        }
        let stmt = line.strip_suffix(';').unwrap_or(line);
        let (ids, rest) = dot_ids(stmt).map_err(|m| Error::parse(at(), m))?;
        if !rest.trim().is_empty() {
            return Err(Error::parse(
                at(),
                format!("unsupported DOT statement {line:?}"),
            ));
        }
        for id in &ids {
            if known.insert(id.clone()) {
                vertices.push(id.clone());
            }
        }
        match ids.as_slice() {
            [_] => {}
            [a, b] => {
                if a == b {
                    return Err(Error::parse(at(), format!("self-loop ({a}, {a})")));
                }
                edges.push((a.clone(), b.clone()));
            }
            _ => return Err(Error::parse(at(), "edge chains are not supported")),
        }
    }
    Err(Error::parse("end of input", "missing closing \"}\""))
}

/// Splits `a -- b -- ...` into identifiers, returning any unparsed tail.
fn dot_ids(stmt: &str) -> std::result::Result<(Vec<String>, &str), String> {
    let mut ids = Vec::new();
    let mut rest = stmt.trim_start();
    loop {
        let (id, tail) = dot_id(rest)?;
        ids.push(id);
        rest = tail.trim_start();
        match rest.strip_prefix("--") {
            Some(t) => rest = t.trim_start(),
            None => return Ok((ids, rest)),
        }
    }
}

fn dot_id(s: &str) -> std::result::Result<(String, &str), String> {
    if let Some(body) = s.strip_prefix('"') {
        let mut out = String::new();
        let mut chars = body.char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some((_, e)) => out.push(e),
                    None => break,
                },
                '"' => return Ok((out, &body[i + 1..])),
                _ => out.push(c),
            }
        }
        return Err("unterminated string".into());
    }
    let end = s
        .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '.' || c == '\''))
        .unwrap_or(s.len());
    if end == 0 {
        return Err(format!("expected an identifier at {s:?}"));
    }
    Ok((s[..end].to_owned(), &s[end..]))
}

/// Parses a graph, picking the format from the first non-blank character:
/// `{` for JSON, a `graph` header for DOT, anything else as an edge list.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let head = text.trim_start();
    if head.starts_with('{') {
        graph_from_json(text)
    } else if head.starts_with("graph") || head.starts_with("strict graph") {
        graph_from_dot(text)
    } else {
        graph_from_edge_list(text)
    }
}
