//! Edge-list text format: a `# n=<n> simple=<0|1> connected=<0|1>` header
//! line, then one 0-indexed `u v` pair per line.


use std::path::Path;

use super::Graph;
use crate::io::write_atomic;
use crate::{Error, Result};

/// Writes the graph as an edge list. Unknown simplicity/connectivity flags
/// are computed first so the header is always definite.
pub fn write_edge_list(graph: &Graph, path: &Path) -> Result<()> {
    let (simple, connected) = match (graph.is_simple(), graph.is_connected()) {
        (Some(s), Some(c)) => (s, c),
        _ => graph.check(),
    };
    write_atomic(path, |w| {
        writeln!(
            w,
            "# n={} simple={} connected={}",
            graph.n(),
            u8::from(simple),
            u8::from(connected)
        )?;
        for (u, v) in graph.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    })
}

/// Reads a graph written by [`write_edge_list`]. Header flags are trusted;
/// re-derive them with [`Graph::check`] if the file is untrusted.
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    let perr = |msg: String| Error::Parse {
        path: path.display().to_string(),
        msg,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| perr("empty file".into()))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| perr("missing `# n=...` header".into()))?;
    let mut n = None;
    let mut simple = None;
    let mut connected = None;
    for field in header.split_whitespace() {
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| perr(format!("malformed header field `{field}`")))?;
        match key {
            "n" => n = Some(val.parse::<usize>().map_err(|e| perr(format!("bad n: {e}")))?),
            "simple" => simple = Some(val == "1"),
            "connected" => connected = Some(val == "1"),
            _ => {}
        }
    }
    let n = n.ok_or_else(|| perr("header missing n".into()))?;
    let mut edges = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u32> {
            tok.ok_or_else(|| perr(format!("line {}: expected `u v`", i + 2)))?
                .parse::<u32>()
                .map_err(|e| perr(format!("line {}: {e}", i + 2)))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        edges.push((u, v));
    }
    let mut graph = Graph::from_edges(n, &edges)?;
    graph.set_flags(simple, connected);
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{pair_configuration, sample_simple_connected, DegreeSpec};

    #[test]
    fn roundtrip_preserves_structure() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        let out = sample_simple_connected(&DegreeSpec::regular(3), 20, 4, 1000).unwrap();
        write_edge_list(&out.graph, &path).unwrap();
        let back = read_edge_list(&path).unwrap();
        assert_eq!(back.n(), 20);
        assert_eq!(back.is_simple(), Some(true));
        assert_eq!(back.is_connected(), Some(true));
        assert_eq!(back.edges(), out.graph.edges());

        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# n=20 simple=1 connected=1\n"));
    }

    #[test]
    fn roundtrip_multigraph_with_loops() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mg.edges");
        // Small multigraphs appear often enough at this size.
        let g = pair_configuration(&DegreeSpec::regular(3), 2, 0).unwrap();
        write_edge_list(&g, &path).unwrap();
        let back = read_edge_list(&path).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.edge_count(), 3);
    }
}
