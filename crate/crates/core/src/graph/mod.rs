//! Undirected graphs with nonnegative integer edge costs.

mod contract;
mod dsu;
mod distance;
mod paths;
mod validate;

pub use contract::{contract_zero_edges, Contraction};
pub use distance::DistanceOracle;
pub use paths::{shortest_paths_from, ShortestPaths};
pub use validate::{prune_steiner_leaves, validate_tree, ValidationError};

pub(crate) use dsu::DisjointSets;
pub(crate) use paths::{settle, settle_from_heap};

use std::collections::HashMap;

use thiserror::Error;

use crate::cost::Cost;

pub type Vertex = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub cost: Cost,
}

impl Edge {
    /// Endpoints with the smaller id first.
    #[inline]
    pub fn key(&self) -> (Vertex, Vertex) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {{{u}, {v}}} references a vertex outside 0..{n}")]
    VertexOutOfRange { u: Vertex, v: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
}

/// Compressed adjacency representation. Parallel edges are collapsed to the
/// cheapest one at construction, so every unordered vertex pair has at most
/// one edge.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adjacency: Vec<(Vertex, Cost)>,
}

impl Graph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut kept: Vec<Edge> = Vec::new();
        let mut index: HashMap<(Vertex, Vertex), usize> = HashMap::new();
        for e in edges {
            if e.u as usize >= n || e.v as usize >= n {
                return Err(GraphError::VertexOutOfRange { u: e.u, v: e.v, n });
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            match index.get(&e.key()) {
                Some(&i) => {
                    if e.cost < kept[i].cost {
                        kept[i].cost = e.cost;
                    }
                }
                None => {
                    index.insert(e.key(), kept.len());
                    kept.push(e);
                }
            }
        }
        Ok(Self::from_simple_edges(n, kept))
    }

    /// Builds the adjacency structure from edges already known to be simple.
    pub(crate) fn from_simple_edges(n: usize, edges: Vec<Edge>) -> Graph {
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for d in &degree[..n] {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0, 0); acc];
        for e in &edges {
            adjacency[fill[e.u as usize]] = (e.v, e.cost);
            fill[e.u as usize] += 1;
            adjacency[fill[e.v as usize]] = (e.u, e.cost);
            fill[e.v as usize] += 1;
        }
        // Sorted neighbour lists give deterministic traversal order.
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            n,
            edges,
            offsets,
            adjacency,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, Cost)] {
        let v = v as usize;
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Cost of the edge `{u, v}` if present.
    pub fn edge_cost(&self, u: Vertex, v: Vertex) -> Option<Cost> {
        if u as usize >= self.n || v as usize >= self.n {
            return None;
        }
        let nbrs = self.neighbors(u);
        nbrs.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| nbrs[i].1)
    }

    pub fn has_zero_cost_edge(&self) -> bool {
        self.edges.iter().any(|e| e.cost == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(u: Vertex, v: Vertex, cost: Cost) -> Edge {
        Edge { u, v, cost }
    }

    #[test]
    fn parallel_edges_keep_cheapest() {
        let g = Graph::from_edges(3, [e(0, 1, 5), e(1, 0, 3), e(1, 2, 4), e(1, 2, 9)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_cost(0, 1), Some(3));
        assert_eq!(g.edge_cost(1, 0), Some(3));
        assert_eq!(g.edge_cost(2, 1), Some(4));
        assert_eq!(g.edge_cost(0, 2), None);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = Graph::from_edges(4, [e(0, 1, 1), e(1, 2, 2), e(2, 3, 3), e(3, 0, 4)]).unwrap();
        for v in 0..4 {
            for &(w, c) in g.neighbors(v) {
                assert!(g.neighbors(w).contains(&(v, c)));
            }
        }
        assert_eq!(g.neighbors(0), &[(1, 1), (3, 4)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::from_edges(2, [e(0, 2, 1)]).unwrap_err(),
            GraphError::VertexOutOfRange { u: 0, v: 2, n: 2 }
        );
        assert_eq!(Graph::from_edges(2, [e(1, 1, 1)]).unwrap_err(), GraphError::SelfLoop(1));
    }
}
