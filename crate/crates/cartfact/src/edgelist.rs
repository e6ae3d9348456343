//! Plain text edge lists: one `u v` pair per line, `#` starts a comment,
//! blank lines are skipped. The vertex count is `max id + 1`.

use std::io::{BufRead, BufReader, Read, Write};

use crate::graph::{Graph, GraphError};

/// Parses an edge list. At least one edge or vertex must occur; a file with
/// no data lines is an empty graph and is rejected.
pub fn load_edge_list(reader: impl Read) -> Result<Graph, GraphError> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut max_vertex: Option<usize> = None;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let data = match line.split('#').next() {
            Some(d) => d.trim(),
            None => "",
        };
        if data.is_empty() {
            continue;
        }
        let mut fields = data.split_whitespace();
        let u = parse_vertex(fields.next(), lineno)?;
        let v = parse_vertex(fields.next(), lineno)?;
        if let Some(extra) = fields.next() {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("unexpected trailing field '{extra}'"),
            });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        max_vertex = Some(max_vertex.unwrap_or(0).max(u).max(v));
        pairs.push((u, v));
    }
    match max_vertex {
        None => Err(GraphError::EmptyGraph),
        Some(mx) => Graph::from_edges(mx + 1, pairs),
    }
}

fn parse_vertex(field: Option<&str>, line: usize) -> Result<usize, GraphError> {
    let field = field.ok_or_else(|| GraphError::Parse {
        line,
        msg: "expected two vertex ids".into(),
    })?;
    field.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid vertex id '{field}'"),
    })
}

/// Writes the graph as an edge list in edge id order.
pub fn write_edge_list(g: &Graph, mut out: impl Write) -> std::io::Result<()> {
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
