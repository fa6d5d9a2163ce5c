//! Canonical text form of a graph.
//!
//! ```text
//! n=3 code=16
//! 1->2
//! 2->3
//! 3->1
//! ```
//!
//! Vertices are 1-based. The header is mandatory; the edge list is optional
//! when a code is given. Graphs too large for a code (`n > 9`) are written
//! with `code=none` and must carry their edges. Blank lines and lines
//! starting with `#` are ignored on input.

use thiserror::Error;

use crate::graph::{GraphCode, GraphError, OrientedGraph, VertexSet};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `n=<n> code=<index>` header")]
    MissingHeader,
    #[error("edge list does not match code {code} (edges encode {encoded})")]
    CodeMismatch { code: u64, encoded: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Writes the header line and one `u->v` line per edge.
pub fn format_graph(g: &OrientedGraph) -> String {
    let mut s = header(g);
    for (u, v) in g.edges() {
        s.push_str(&format!("\n{}->{}", u + 1, v + 1));
    }
    s.push('\n');
    s
}

/// The `n=<n> code=<index>` line alone.
pub fn header(g: &OrientedGraph) -> String {
    match g.encode() {
        Ok(code) => format!("n={} code={}", g.n(), code.index()),
        Err(_) => format!("n={} code=none", g.n()),
    }
}

/// `{1,3,4}` with 1-based labels.
pub fn format_set(set: VertexSet) -> String {
    let items: Vec<String> = set.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

pub fn parse_graph(input: &str) -> Result<OrientedGraph, TextError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, first) = lines.next().ok_or(TextError::MissingHeader)?;
    let (n, code) = parse_header(line_no, first)?;

    let mut edges = Vec::new();
    for (line, text) in lines {
        let (u, v) = text.split_once("->").ok_or_else(|| TextError::Syntax {
            line,
            msg: format!("expected `u->v`, found `{text}`"),
        })?;
        let u = parse_vertex(line, u, n)?;
        let v = parse_vertex(line, v, n)?;
        edges.push((u, v));
    }

    match code {
        Some(index) if edges.is_empty() => Ok(GraphCode::new(n, index)?.decode()),
        Some(index) => {
            GraphCode::new(n, index)?;
            let g = OrientedGraph::from_edges(n, edges)?;
            let encoded = g.encode()?.index();
            if encoded != index {
                return Err(TextError::CodeMismatch { code: index, encoded });
            }
            Ok(g)
        }
        None => Ok(OrientedGraph::from_edges(n, edges)?),
    }
}

fn parse_header(line: usize, text: &str) -> Result<(usize, Option<u64>), TextError> {
    let syntax = |msg: String| TextError::Syntax { line, msg };
    let mut n = None;
    let mut code = None;
    for field in text.split_whitespace() {
        match field.split_once('=') {
            Some(("n", value)) => {
                n = Some(value.parse::<usize>().map_err(|e| syntax(format!("bad n `{value}`: {e}")))?)
            }
            Some(("code", "none")) => code = Some(None),
            Some(("code", value)) => {
                code = Some(Some(
                    value.parse::<u64>().map_err(|e| syntax(format!("bad code `{value}`: {e}")))?,
                ))
            }
            _ => return Err(syntax(format!("unexpected header field `{field}`"))),
        }
    }
    match (n, code) {
        (Some(n), Some(code)) => Ok((n, code)),
        _ => Err(TextError::MissingHeader),
    }
}

fn parse_vertex(line: usize, text: &str, n: usize) -> Result<usize, TextError> {
    let v: usize = text.trim().parse().map_err(|e| TextError::Syntax {
        line,
        msg: format!("bad vertex `{}`: {e}", text.trim()),
    })?;
    if v == 0 || v > n {
        return Err(TextError::Syntax { line, msg: format!("vertex {v} outside 1..={n}") });
    }
    Ok(v - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_triangle() {
        let g = OrientedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(format_graph(&g), "n=3 code=16\n1->2\n2->3\n3->1\n");
    }

    #[test]
    fn header_only_decodes() {
        let g = parse_graph("n=3 code=22\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 1)]);
    }

    #[test]
    fn round_trips_with_and_without_code() {
        let g = GraphCode::new(5, 31_337).unwrap().decode();
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);

        let big = OrientedGraph::from_edges(12, [(0, 11), (11, 5)]).unwrap();
        let text = format_graph(&big);
        assert!(text.starts_with("n=12 code=none\n"));
        assert_eq!(parse_graph(&text).unwrap(), big);
    }

    #[test]
    fn rejects_inconsistent_input() {
        assert!(matches!(
            parse_graph("n=3 code=16\n1->2\n"),
            Err(TextError::CodeMismatch { code: 16, encoded: 1 })
        ));
        assert!(matches!(parse_graph("1->2"), Err(TextError::Syntax { line: 1, .. })));
        assert!(matches!(parse_graph("n=3"), Err(TextError::MissingHeader)));
        assert!(matches!(parse_graph(""), Err(TextError::MissingHeader)));
        assert!(matches!(parse_graph("n=3 code=1\n1-2"), Err(TextError::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph("n=3 code=none\n1->4"), Err(TextError::Syntax { .. })));
        assert!(matches!(parse_graph("n=3 code=27"), Err(TextError::Graph(_))));
        assert!(matches!(
            parse_graph("n=3 code=none\n1->2\n2->1"),
            Err(TextError::Graph(GraphError::Antiparallel(0, 1)))
        ));
    }

    #[test]
    fn ignores_comments() {
        let g = parse_graph("# seed\n\nn=2 code=none\n# edge\n2->1\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn set_format() {
        assert_eq!(format_set(VertexSet::EMPTY), "{}");
        assert_eq!(format_set([0, 2].into_iter().collect()), "{1,3}");
    }
}
