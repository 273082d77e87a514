use std::collections::HashMap;

use thiserror::Error;

use super::{DisjointSets, Graph, Vertex};
use crate::cost::Cost;
use crate::instance::SteinerInstance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("{{{0}, {1}}} is not an edge of the graph")]
    InvalidEdge(Vertex, Vertex),
    #[error("edge {{{0}, {1}}} closes a cycle")]
    ContainsCycle(Vertex, Vertex),
    #[error("terminal {0} is not covered by the edge set")]
    MissingTerminal(Vertex),
    #[error("edge set splits into {0} components")]
    NotConnected(usize),
}

/// Checks that `edges` form a tree whose vertex set contains every terminal
/// and returns its cost.
pub fn validate_tree(
    instance: &SteinerInstance,
    edges: &[(Vertex, Vertex)],
) -> Result<Cost, ValidationError> {
    let graph = instance.graph();
    let mut total: Cost = 0;
    for &(u, v) in edges {
        let c = graph
            .edge_cost(u, v)
            .ok_or(ValidationError::InvalidEdge(u, v))?;
        total = total.saturating_add(c);
    }

    let mut dsu = DisjointSets::new(graph.vertex_count());
    for &(u, v) in edges {
        if !dsu.union(u, v) {
            return Err(ValidationError::ContainsCycle(u, v));
        }
    }

    let mut covered = vec![false; graph.vertex_count()];
    for &(u, v) in edges {
        covered[u as usize] = true;
        covered[v as usize] = true;
    }
    let terminals = instance.terminals();
    if edges.is_empty() {
        return match terminals {
            [_] => Ok(0),
            _ => Err(ValidationError::MissingTerminal(terminals[1])),
        };
    }
    if let Some(&t) = terminals.iter().find(|&&t| !covered[t as usize]) {
        return Err(ValidationError::MissingTerminal(t));
    }

    let mut roots: Vec<u32> = (0..graph.vertex_count() as u32)
        .filter(|&v| covered[v as usize])
        .map(|v| dsu.find(v))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() > 1 {
        return Err(ValidationError::NotConnected(roots.len()));
    }
    Ok(total)
}

/// Repeatedly removes leaves that are not terminals. Leaves the edge set of a
/// tree a tree and never increases its cost.
pub fn prune_steiner_leaves(
    graph: &Graph,
    terminals: &[Vertex],
    edges: Vec<(Vertex, Vertex)>,
) -> Vec<(Vertex, Vertex)> {
    let mut is_terminal = vec![false; graph.vertex_count()];
    for &t in terminals {
        is_terminal[t as usize] = true;
    }
    let mut incident: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident.entry(u).or_default().push(i);
        incident.entry(v).or_default().push(i);
    }
    let mut alive = vec![true; edges.len()];
    let mut degree: HashMap<Vertex, usize> =
        incident.iter().map(|(&v, es)| (v, es.len())).collect();
    let mut stack: Vec<Vertex> = degree
        .iter()
        .filter(|&(&v, &d)| d == 1 && !is_terminal[v as usize])
        .map(|(&v, _)| v)
        .collect();
    stack.sort_unstable();
    while let Some(v) = stack.pop() {
        if degree[&v] != 1 {
            continue;
        }
        let Some(&i) = incident[&v].iter().find(|&&i| alive[i]) else {
            continue;
        };
        alive[i] = false;
        let (a, b) = edges[i];
        let other = if a == v { b } else { a };
        *degree.get_mut(&v).unwrap() -= 1;
        let d = degree.get_mut(&other).unwrap();
        *d -= 1;
        if *d == 1 && !is_terminal[other as usize] {
            stack.push(other);
        }
    }
    edges
        .into_iter()
        .zip(alive)
        .filter_map(|(e, keep)| keep.then_some(e))
        .collect()
}
