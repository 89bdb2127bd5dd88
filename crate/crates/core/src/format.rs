//! Line-oriented text format for graphs and graph sets.
//!
//! ```text
//! rank 2 window 3
//! ab<TAB>bc<TAB>1
//! bc<TAB>ca<TAB>0.5
//! ```
//!
//! A graph set is a sequence of such blocks in ascending rank. Labels escape
//! backslash, tab, newline and carriage return (`\\`, `\t`, `\n`, `\r`).
//! Weights use the shortest decimal form that parses back to the same `f64`,
//! so a write/read cycle is bit-exact. Edges are written in label order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{GraphSet, NGramGraph};

pub fn escape_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_label(text: &str) -> Result<String, String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => return Err(format!("unknown escape \\{other}")),
            None => return Err("dangling backslash".to_owned()),
        }
    }
    Ok(out)
}

pub fn write_graph(out: &mut String, graph: &NGramGraph) {
    let _ = writeln!(out, "rank {} window {}", graph.rank(), graph.window());
    for (key, weight) in graph.sorted_edges() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            escape_label(key.source()),
            escape_label(key.target()),
            weight
        );
    }
}

pub fn graph_to_string(graph: &NGramGraph) -> String {
    let mut out = String::new();
    write_graph(&mut out, graph);
    out
}

pub fn graphset_to_string(set: &GraphSet) -> String {
    let mut out = String::new();
    for g in set.graphs() {
        write_graph(&mut out, g);
    }
    out
}

fn parse_header(line: &str, lineno: usize) -> Result<Option<(usize, usize)>> {
    let parts: Vec<&str> = line.split(' ').collect();
    match parts.as_slice() {
        ["rank", r, "window", w] => {
            let rank = r.parse().map_err(|_| Error::parse(lineno, format!("bad rank {r:?}")))?;
            let window = w
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad window {w:?}")))?;
            Ok(Some((rank, window)))
        }
        _ => Ok(None),
    }
}

/// Parses graph blocks from `lines`, numbering lines from `first_line`.
pub(crate) fn parse_graph_blocks<'a>(
    lines: impl Iterator<Item = &'a str>,
    first_line: usize,
) -> Result<Vec<NGramGraph>> {
    let mut graphs: Vec<NGramGraph> = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = first_line + i;
        if line.is_empty() {
            continue;
        }
        if !line.contains('\t') {
            let (rank, window) = parse_header(line, lineno)?
                .ok_or_else(|| Error::parse(lineno, format!("expected header, got {line:?}")))?;
            let g = NGramGraph::new(rank, window).map_err(|e| Error::parse(lineno, e.to_string()))?;
            graphs.push(g);
            continue;
        }
        let graph = graphs
            .last_mut()
            .ok_or_else(|| Error::parse(lineno, "edge before any header"))?;
        let fields: Vec<&str> = line.split('\t').collect();
        let [source, target, weight] = fields.as_slice() else {
            return Err(Error::parse(lineno, "edge line needs three tab-separated fields"));
        };
        let source = unescape_label(source).map_err(|m| Error::parse(lineno, m))?;
        let target = unescape_label(target).map_err(|m| Error::parse(lineno, m))?;
        let weight: f64 = weight
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad weight {weight:?}")))?;
        if graph.weight(&source, &target).is_some() {
            return Err(Error::parse(lineno, format!("duplicate edge {source:?} -> {target:?}")));
        }
        graph
            .set_edge(&source, &target, weight)
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
    }
    Ok(graphs)
}

pub fn parse_graph(text: &str) -> Result<NGramGraph> {
    let mut graphs = parse_graph_blocks(text.lines(), 1)?;
    match graphs.len() {
        1 => Ok(graphs.pop().unwrap()),
        n => Err(Error::parse(1, format!("expected one graph, found {n}"))),
    }
}

pub fn parse_graphset(text: &str) -> Result<GraphSet> {
    let graphs = parse_graph_blocks(text.lines(), 1)?;
    GraphSet::from_graphs(graphs).map_err(|e| Error::parse(1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, GraphParams};
    use proptest::prelude::*;

    #[test]
    fn known_layout() {
        let g = build_graph("abcab", 2, 2).unwrap();
        assert_eq!(
            graph_to_string(&g),
            "rank 2 window 2\nab\tbc\t1\nab\tca\t1\nbc\tab\t1\nbc\tca\t1\nca\tab\t1\n"
        );
    }

    #[test]
    fn escapes_control_labels() {
        let g = build_graph("a\tb\nc\\", 1, 1).unwrap();
        let text = graph_to_string(&g);
        assert!(text.contains("a\t\\t\t1\n"));
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_graph("ab\tbc\t1\n").is_err());
        assert!(parse_graph("rank 2 window 2\nab\tbc\n").is_err());
        assert!(parse_graph("rank 2 window 2\nab\tbc\tx\n").is_err());
        assert!(parse_graph("rank 2 window 2\nabc\tbc\t1\n").is_err());
        assert!(parse_graph("rank 2 window 2\nab\tbc\t1\nab\tbc\t2\n").is_err());
        assert!(parse_graph("rank 2 window 2\nab\tbc\t-1\n").is_err());
        assert!(parse_graph("rank 0 window 2\n").is_err());
        assert!(parse_graph("garbage\n").is_err());
        assert!(unescape_label("a\\q").is_err());
    }

    #[test]
    fn graphset_blocks() {
        let s = GraphParams::new(1, 3, 2).unwrap().graphset("hello world").unwrap();
        let text = graphset_to_string(&s);
        assert_eq!(text.matches("window 2").count(), 3);
        assert_eq!(parse_graphset(&text).unwrap(), s);
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            text in "[ab\\t\\n\\\\é ]{0,30}",
            rank in 1usize..4,
            window in 1usize..4,
            scale in 0.0f64..1e12,
        ) {
            let built = build_graph(&text, rank, window).unwrap();
            let mut g = NGramGraph::new(rank, window).unwrap();
            for (k, w) in built.edges() {
                g.set_edge(k.source(), k.target(), w * scale / 3.0).unwrap();
            }
            let back = parse_graph(&graph_to_string(&g)).unwrap();
            prop_assert_eq!(back.len(), g.len());
            for (k, w) in g.edges() {
                prop_assert_eq!(back.weight_of(k).map(f64::to_bits), Some(w.to_bits()));
            }
        }
    }
}
