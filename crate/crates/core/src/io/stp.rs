//! SteinLib STP format.
//!
//! ```text
//! 33D32945 STP File, STP Format Version 1.0
//! SECTION Comment
//! Name "b01"
//! END
//! SECTION Graph
//! Nodes 50
//! Edges 63
//! E 1 2 3
//! END
//! SECTION Terminals
//! Terminals 9
//! T 48
//! END
//! SECTION Coordinates
//! DD 1 10 20
//! END
//! EOF
//! ```
//!
//! Node ids are 1-based in the file and 0-based in memory. Keywords are
//! case-insensitive. Unknown sections are skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cost::Cost;
use crate::graph::{Edge, Graph, GraphError, Vertex};
use crate::instance::{Coordinates, InstanceError, SteinerInstance, MAX_TERMINALS};

pub const MAGIC: &str = "33D32945";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("declared {declared} {what} but found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("line {line}: value {token:?} is not an integer")]
    NonIntegralCost { line: usize, token: String },
    #[error("{0} terminals; at most {MAX_TERMINALS} are supported")]
    TooManyTerminals(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StpOptions {
    /// Coordinates are multiplied by `10^coordinate_scale` and must be
    /// integral afterwards; 0 accepts integers only.
    pub coordinate_scale: u32,
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Section {
    Outside,
    Comment,
    Graph,
    Terminals,
    Coordinates,
    Skipped,
}

fn syntax(line: usize, message: impl Into<String>) -> StpError {
    StpError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_stp_bytes(bytes: &[u8]) -> Result<SteinerInstance, StpError> {
    let text = std::str::from_utf8(bytes).map_err(|e| syntax(0, format!("invalid UTF-8: {e}")))?;
    parse_stp(text)
}

pub fn parse_stp(text: &str) -> Result<SteinerInstance, StpError> {
    parse_stp_with(text, StpOptions::default())
}

pub fn parse_stp_with(text: &str, options: StpOptions) -> Result<SteinerInstance, StpError> {
    let mut section = Section::Outside;
    let mut name = String::new();
    let mut nodes: Option<usize> = None;
    let mut declared_edges: Option<usize> = None;
    let mut declared_terminals: Option<usize> = None;
    let mut edges: Vec<(usize, Edge)> = Vec::new();
    let mut terminals: Vec<(usize, usize)> = Vec::new();
    let mut coords: Vec<(usize, usize, Vec<i64>)> = Vec::new();
    let mut saw_magic = false;
    let mut first = true;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if first {
            first = false;
            if line.len() >= MAGIC.len() && line[..MAGIC.len()].eq_ignore_ascii_case(MAGIC) {
                saw_magic = true;
                continue;
            }
            log::warn!("STP input has no magic line; continuing");
        }
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap_or_default().to_ascii_lowercase();
        let args: Vec<&str> = tokens.collect();

        if section == Section::Outside {
            match key.as_str() {
                "section" => {
                    let which = args
                        .first()
                        .ok_or_else(|| syntax(line_no, "SECTION without a name"))?
                        .to_ascii_lowercase();
                    section = match which.as_str() {
                        "comment" => Section::Comment,
                        "graph" => Section::Graph,
                        "terminals" => Section::Terminals,
                        "coordinates" => Section::Coordinates,
                        other => {
                            log::debug!("skipping section {other}");
                            Section::Skipped
                        }
                    };
                }
                "eof" => break,
                _ => return Err(syntax(line_no, format!("unexpected {line:?} outside a section"))),
            }
            continue;
        }
        if key == "end" {
            section = Section::Outside;
            continue;
        }
        match section {
            Section::Comment => {
                if key == "name" {
                    name = line[4..].trim().trim_matches('"').to_string();
                }
            }
            Section::Graph => match key.as_str() {
                "nodes" => nodes = Some(parse_count(&args, line_no)?),
                "edges" => declared_edges = Some(parse_count(&args, line_no)?),
                "e" => {
                    if args.len() != 3 {
                        return Err(syntax(line_no, "edge line needs `E u v cost`"));
                    }
                    let u = parse_node(args[0], line_no)?;
                    let v = parse_node(args[1], line_no)?;
                    let cost = parse_cost(args[2], line_no)?;
                    edges.push((
                        line_no,
                        Edge {
                            u: u as Vertex,
                            v: v as Vertex,
                            cost,
                        },
                    ));
                }
                "arcs" | "a" => {
                    return Err(syntax(line_no, "directed arcs are not supported"));
                }
                _ => log::debug!("line {line_no}: ignoring graph key {key}"),
            },
            Section::Terminals => match key.as_str() {
                "terminals" => declared_terminals = Some(parse_count(&args, line_no)?),
                "t" => {
                    let [t] = args[..] else {
                        return Err(syntax(line_no, "terminal line needs `T v`"));
                    };
                    terminals.push((line_no, parse_node(t, line_no)?));
                }
                _ => log::warn!("line {line_no}: ignoring terminal key {key}"),
            },
            Section::Coordinates => {
                let dim = key.len();
                if dim == 0 || !key.bytes().all(|b| b == b'd') {
                    return Err(syntax(line_no, format!("bad coordinate key {key:?}")));
                }
                if args.len() != dim + 1 {
                    return Err(syntax(line_no, format!("expected node id and {dim} values")));
                }
                let id = parse_node(args[0], line_no)?;
                let values = args[1..]
                    .iter()
                    .map(|t| parse_scaled(t, options.coordinate_scale, line_no))
                    .collect::<Result<Vec<_>, _>>()?;
                coords.push((line_no, id, values));
            }
            Section::Skipped | Section::Outside => {}
        }
    }
    if !saw_magic && !first {
        log::debug!("parsed STP without magic line");
    }

    let n = nodes.ok_or_else(|| syntax(0, "missing Nodes declaration"))?;
    if let Some(declared) = declared_edges {
        if declared != edges.len() {
            return Err(StpError::CountMismatch {
                what: "edges",
                declared,
                found: edges.len(),
            });
        }
    }
    if let Some(declared) = declared_terminals {
        if declared != terminals.len() {
            return Err(StpError::CountMismatch {
                what: "terminals",
                declared,
                found: terminals.len(),
            });
        }
    }
    if terminals.len() > MAX_TERMINALS {
        return Err(StpError::TooManyTerminals(terminals.len()));
    }
    let check = |line: usize, id: usize| -> Result<Vertex, StpError> {
        if id > n {
            Err(syntax(line, format!("node {id} exceeds declared node count {n}")))
        } else {
            Ok((id - 1) as Vertex)
        }
    };
    let mut graph_edges = Vec::with_capacity(edges.len());
    for (line, e) in edges {
        graph_edges.push(Edge {
            u: check(line, e.u as usize)?,
            v: check(line, e.v as usize)?,
            cost: e.cost,
        });
    }
    let terminal_ids = terminals
        .into_iter()
        .map(|(line, t)| check(line, t))
        .collect::<Result<Vec<_>, _>>()?;
    let graph = Graph::from_edges(n, graph_edges)?;
    let mut instance = SteinerInstance::new(name, graph, terminal_ids)?;

    if !coords.is_empty() {
        let dim = coords[0].2.len();
        let mut values = vec![0i64; n * dim];
        let mut seen = vec![false; n];
        for (line, id, vals) in coords {
            let v = check(line, id)? as usize;
            if vals.len() != dim {
                return Err(syntax(line, "mixed coordinate dimensions"));
            }
            values[v * dim..(v + 1) * dim].copy_from_slice(&vals);
            seen[v] = true;
        }
        let found = seen.iter().filter(|&&s| s).count();
        if found != n {
            return Err(StpError::CountMismatch {
                what: "coordinate rows",
                declared: n,
                found,
            });
        }
        instance = instance.with_coordinates(Coordinates::new(dim, values))?;
    }
    Ok(instance)
}

fn parse_count(args: &[&str], line: usize) -> Result<usize, StpError> {
    match args {
        [x] => x
            .parse()
            .map_err(|_| syntax(line, format!("bad count {x:?}"))),
        _ => Err(syntax(line, "expected a single count")),
    }
}

fn parse_node(token: &str, line: usize) -> Result<usize, StpError> {
    match token.parse::<usize>() {
        Ok(0) | Err(_) => Err(syntax(line, format!("bad node id {token:?}"))),
        Ok(id) => Ok(id),
    }
}

/// Integer costs; a fractional part is accepted only if it is all zeros.
fn parse_cost(token: &str, line: usize) -> Result<Cost, StpError> {
    if token.starts_with('-') {
        return Err(syntax(line, format!("negative cost {token:?}")));
    }
    let (int, frac) = token.split_once('.').unwrap_or((token, ""));
    if !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, format!("bad cost {token:?}")));
    }
    if frac.bytes().any(|b| b != b'0') {
        return Err(StpError::NonIntegralCost {
            line,
            token: token.to_string(),
        });
    }
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, format!("bad cost {token:?}")));
    }
    int.parse()
        .map_err(|_| syntax(line, format!("cost {token:?} out of range")))
}

/// Parses a decimal, multiplies it by `10^scale` exactly.
pub(crate) fn parse_scaled(token: &str, scale: u32, line: usize) -> Result<i64, StpError> {
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !digits_ok(int) || !digits_ok(frac) {
        return Err(syntax(line, format!("bad number {token:?}")));
    }
    let scale = scale as usize;
    let (kept, dropped) = if frac.len() > scale {
        frac.split_at(scale)
    } else {
        (frac, "")
    };
    if dropped.bytes().any(|b| b != b'0') {
        return Err(StpError::NonIntegralCost {
            line,
            token: token.to_string(),
        });
    }
    let mut text = String::with_capacity(int.len() + scale);
    text.push_str(if int.is_empty() { "0" } else { int });
    text.push_str(kept);
    text.extend(std::iter::repeat_n('0', scale - kept.len()));
    let magnitude: i64 = text
        .parse()
        .map_err(|_| syntax(line, format!("number {token:?} out of range")))?;
    Ok(if negative { -magnitude } else { magnitude })
}

/// Emits a canonical STP document for `instance`.
pub fn write_stp(instance: &SteinerInstance) -> String {
    let g = instance.graph();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} STP File, STP Format Version 1.0");
    let _ = writeln!(out);
    let _ = writeln!(out, "SECTION Comment");
    let _ = writeln!(out, "Name \"{}\"", instance.name);
    let _ = writeln!(out, "END");
    let _ = writeln!(out);
    let _ = writeln!(out, "SECTION Graph");
    let _ = writeln!(out, "Nodes {}", g.vertex_count());
    let _ = writeln!(out, "Edges {}", g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "E {} {} {}", e.u + 1, e.v + 1, e.cost);
    }
    let _ = writeln!(out, "END");
    let _ = writeln!(out);
    let _ = writeln!(out, "SECTION Terminals");
    let _ = writeln!(out, "Terminals {}", instance.terminal_count());
    for &t in instance.terminals() {
        let _ = writeln!(out, "T {}", t + 1);
    }
    let _ = writeln!(out, "END");
    if let Some(c) = instance.coordinates() {
        let key = "D".repeat(c.dim());
        let _ = writeln!(out);
        let _ = writeln!(out, "SECTION Coordinates");
        for v in 0..c.len() {
            let _ = write!(out, "{key} {}", v + 1);
            for x in c.of(v as Vertex) {
                let _ = write!(out, " {x}");
            }
            let _ = writeln!(out);
        }
        let _ = writeln!(out, "END");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "EOF");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "33D32945 STP File, STP Format Version 1.0\n\
        SECTION Comment\nName \"tiny\"\nEND\n\
        SECTION Graph\nNodes 2\nEdges 1\nE 1 2 7\nEND\n\
        SECTION Terminals\nTerminals 2\nT 1\nT 2\nEND\nEOF\n";

    #[test]
    fn minimal_file() {
        let inst = parse_stp(MINIMAL).unwrap();
        assert_eq!(inst.name, "tiny");
        assert_eq!(inst.vertex_count(), 2);
        assert_eq!(inst.edge_count(), 1);
        assert_eq!(inst.terminal_count(), 2);
        assert_eq!(inst.graph().edge_cost(0, 1), Some(7));
    }

    #[test]
    fn tolerant_of_case_whitespace_and_missing_magic() {
        let text = "section graph\n  nodes   3\nedges 2\ne 1 2 4\n\tE 2 3 5.000\nend\n\
                    Section TERMINALS\nterminals 2\nt 3\nT 1\nEnd\nSECTION Presolve\nfoo bar\nEND\neof\n";
        let inst = parse_stp(text).unwrap();
        assert_eq!(inst.terminals(), &[2, 0]);
        assert_eq!(inst.graph().edge_cost(1, 2), Some(5));
    }

    #[test]
    fn duplicate_edges_keep_cheaper() {
        let text = "SECTION Graph\nNodes 2\nEdges 2\nE 1 2 9\nE 2 1 4\nEND\n\
                    SECTION Terminals\nTerminals 1\nT 1\nEND\nEOF\n";
        let inst = parse_stp(text).unwrap();
        assert_eq!(inst.edge_count(), 1);
        assert_eq!(inst.graph().edge_cost(0, 1), Some(4));
    }

    #[test]
    fn error_cases() {
        let bad_count = MINIMAL.replace("Edges 1", "Edges 2");
        assert_eq!(
            parse_stp(&bad_count).unwrap_err(),
            StpError::CountMismatch {
                what: "edges",
                declared: 2,
                found: 1
            }
        );
        let frac = MINIMAL.replace("E 1 2 7", "E 1 2 7.5");
        assert!(matches!(
            parse_stp(&frac).unwrap_err(),
            StpError::NonIntegralCost { line: 8, .. }
        ));
        let range = MINIMAL.replace("E 1 2 7", "E 1 3 7");
        assert!(matches!(parse_stp(&range).unwrap_err(), StpError::Syntax { line: 8, .. }));
        let junk = MINIMAL.replace("SECTION Comment", "garbage here");
        assert!(matches!(parse_stp(&junk).unwrap_err(), StpError::Syntax { line: 2, .. }));
        let neg = MINIMAL.replace("E 1 2 7", "E 1 2 -7");
        assert!(matches!(parse_stp(&neg).unwrap_err(), StpError::Syntax { .. }));
    }

    #[test]
    fn too_many_terminals() {
        let mut text = String::from("SECTION Graph\nNodes 64\nEdges 63\n");
        for v in 2..=64 {
            text.push_str(&format!("E 1 {v} 1\n"));
        }
        text.push_str("END\nSECTION Terminals\nTerminals 64\n");
        for v in 1..=64 {
            text.push_str(&format!("T {v}\n"));
        }
        text.push_str("END\nEOF\n");
        assert_eq!(parse_stp(&text).unwrap_err(), StpError::TooManyTerminals(64));
    }

    #[test]
    fn coordinates_and_scaling() {
        let text = "SECTION Graph\nNodes 2\nEdges 1\nE 1 2 3\nEND\n\
                    SECTION Terminals\nTerminals 1\nT 2\nEND\n\
                    SECTION Coordinates\nDDD 1 0.5 1 -2.25\nDDD 2 1.75 0 3\nEND\nEOF\n";
        assert!(matches!(parse_stp(text).unwrap_err(), StpError::NonIntegralCost { .. }));
        let inst = parse_stp_with(text, StpOptions { coordinate_scale: 2 }).unwrap();
        let c = inst.coordinates().unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.of(0), &[50, 100, -225]);
        assert_eq!(c.of(1), &[175, 0, 300]);
        assert_eq!(parse_scaled("0.31152226", 8, 1), Ok(31152226));
        assert_eq!(parse_scaled("1.000", 0, 1), Ok(1));
    }

    proptest! {
        #[test]
        fn write_then_parse_preserves_instance(
            n in 2usize..12,
            raw in proptest::collection::vec((0u32..12, 0u32..12, 1u64..1000), 1..30),
            k in 1usize..5,
        ) {
            let edges: Vec<Edge> = raw
                .into_iter()
                .map(|(u, v, cost)| (u % n as u32, v % n as u32, cost))
                .filter(|(u, v, _)| u != v)
                .map(|(u, v, cost)| Edge { u, v, cost })
                .collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let terminals: Vec<Vertex> = (0..k.min(n) as Vertex).rev().collect();
            let inst = SteinerInstance::new("rt", g, terminals).unwrap();
            let back = parse_stp(&write_stp(&inst)).unwrap();
            prop_assert_eq!(&back.name, &inst.name);
            prop_assert_eq!(back.vertex_count(), inst.vertex_count());
            prop_assert_eq!(back.terminals(), inst.terminals());
            prop_assert_eq!(back.graph().edges(), inst.graph().edges());
        }
    }
}
