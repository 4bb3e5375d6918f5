//! Edge-list text and coloring JSON.
//!
//! Graphs travel as plain text: an "n m" header line, then one "u v" line
//! per edge, 0-based, with '#' starting a comment and blank lines ignored.
//! Parallel edges are repeated lines; edge ids are assigned in line order,
//! which is what makes a coloring file meaningful next to its graph file.
//!
//! A coloring is a JSON object `{"k": K, "colors": [c_0, ..., c_{m-1}]}`
//! indexed by edge id, with 0 meaning uncolored.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Palette, PartialEdgeColoring};
use crate::graph::MultiGraph;

use super::IoError;

fn two_ints(content: &str, line: usize, what: &str) -> Result<(u32, u32), IoError> {
    let mut it = content.split_whitespace();
    let parse = |tok: Option<&str>| -> Result<u32, IoError> {
        tok.and_then(|t| t.parse::<u32>().ok()).ok_or_else(|| IoError::Parse {
            line,
            reason: format!("expected two integers for {what}, got {content:?}"),
        })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(IoError::Parse {
            line,
            reason: format!("expected two integers for {what}, got {content:?}"),
        });
    }
    Ok((a, b))
}

/// Parses edge-list text into a graph. Loops and out-of-range endpoints are
/// rejected; parallel edges are accepted.
pub fn parse_edge_list(text: &str) -> Result<Arc<MultiGraph>, IoError> {
    let mut header: Option<(u32, u32)> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match header {
            None => header = Some(two_ints(content, line, "the \"n m\" header")?),
            Some((_, m)) => {
                if edges.len() == m as usize {
                    return Err(IoError::Parse {
                        line,
                        reason: format!("more than the declared {m} edges"),
                    });
                }
                edges.push(two_ints(content, line, "an edge")?);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(IoError::Parse {
            line: last_line.max(1),
            reason: "missing \"n m\" header".to_string(),
        });
    };
    if edges.len() != m as usize {
        return Err(IoError::Parse {
            line: last_line.max(1),
            reason: format!("declared {m} edges, found {}", edges.len()),
        });
    }
    // Any multiplicity a file can express is fine; only loops are barred.
    Ok(Arc::new(MultiGraph::build(n, &edges, m.max(1))?))
}

/// The inverse of [`parse_edge_list`], edge ids in order.
pub fn serialize_edge_list(g: &MultiGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        writeln!(out, "{} {}", u.0, v.0).expect("writing to a String cannot fail");
    }
    out
}

/// Serialized coloring: palette size plus one color slot per edge id,
/// 0 meaning uncolored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub k: u32,
    pub colors: Vec<Color>,
}

pub fn coloring_to_file(c: &PartialEdgeColoring) -> ColoringFile {
    ColoringFile { k: c.palette().size(), colors: c.color_slots().to_vec() }
}

/// Attaches a coloring file to its graph, checking lengths and the color
/// range; properness is the caller's question, not a format one.
pub fn coloring_from_file(
    g: &Arc<MultiGraph>,
    file: &ColoringFile,
) -> Result<PartialEdgeColoring, IoError> {
    if let Some(&c) = file.colors.iter().find(|&&c| c > file.k) {
        return Err(IoError::BadColoring {
            reason: format!("color {c} is outside the declared palette of {}", file.k),
        });
    }
    PartialEdgeColoring::from_slots(g.clone(), Palette::new(file.k.max(1)), &file.colors)
        .map_err(|reason| IoError::BadColoring { reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphError;

    #[test]
    fn single_edge_parses() {
        let g = parse_edge_list("2 1\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn five_cycle_parses() {
        let g = parse_edge_list("5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a triangle\n\n3 3\n0 1 # first\n1 2\n  \n2 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn out_of_range_endpoint_is_rejected() {
        let err = parse_edge_list("3 2\n0 1\n0 3\n").unwrap_err();
        assert!(matches!(err, IoError::Graph(GraphError::VertexOutOfRange { .. })), "{err}");
    }

    #[test]
    fn loops_are_rejected() {
        let err = parse_edge_list("2 1\n1 1\n").unwrap_err();
        assert!(matches!(err, IoError::Graph(GraphError::LoopRejected { .. })), "{err}");
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let err = parse_edge_list("2 1\n0 x\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("3 1\n0 1 2\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("# nothing\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { .. }), "{err}");
    }

    #[test]
    fn edge_count_must_match_the_header() {
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(IoError::Parse { .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 1\n1 2\n"),
            Err(IoError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn round_trip_preserves_everything() {
        // Includes a parallel pair, which the text format spells as a
        // repeated line.
        let g = parse_edge_list("4 4\n0 1\n0 1\n1 2\n2 3\n").unwrap();
        let text = serialize_edge_list(&g);
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(g.vertex_count(), h.vertex_count());
        let edges = |g: &MultiGraph| {
            let mut v: Vec<(u32, u32)> =
                g.edges().map(|e| g.endpoints(e)).map(|(u, v)| (u.0, v.0)).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(edges(&g), edges(&h));
    }

    #[test]
    fn coloring_file_round_trips() {
        let g = parse_edge_list("3 2\n0 1\n1 2\n").unwrap();
        let mut c = PartialEdgeColoring::new(g.clone(), Palette::new(3));
        c.set(crate::graph::EdgeId(0), 2);
        let file = coloring_to_file(&c);
        assert_eq!(file, ColoringFile { k: 3, colors: vec![2, 0] });
        let back = coloring_from_file(&g, &file).unwrap();
        assert_eq!(back.color_slots(), c.color_slots());
        let json: ColoringFile =
            serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(json, file);
    }

    #[test]
    fn coloring_file_must_fit_the_graph() {
        let g = parse_edge_list("3 2\n0 1\n1 2\n").unwrap();
        let short = ColoringFile { k: 2, colors: vec![1] };
        assert!(matches!(coloring_from_file(&g, &short), Err(IoError::BadColoring { .. })));
        let wild = ColoringFile { k: 2, colors: vec![1, 9] };
        assert!(matches!(coloring_from_file(&g, &wild), Err(IoError::BadColoring { .. })));
    }
}
