use std::collections::HashMap;

use super::{prune_steiner_leaves, DisjointSets, Edge, Graph, Vertex};
use crate::instance::SteinerInstance;

/// A zero-edge-free instance together with the data needed to lift trees in
/// it back to the original graph.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub instance: SteinerInstance,
    vertex_map: Vec<Vertex>,
    edge_origin: HashMap<(Vertex, Vertex), (Vertex, Vertex)>,
    /// Zero-cost edges spanning the original vertices merged into each reduced vertex.
    zero_forest: Vec<Vec<(Vertex, Vertex)>>,
}

impl Contraction {
    pub fn is_identity(&self) -> bool {
        self.zero_forest.iter().all(Vec::is_empty)
    }

    /// Reduced vertex that original vertex `v` was merged into.
    pub fn map_vertex(&self, v: Vertex) -> Vertex {
        self.vertex_map[v as usize]
    }

    pub fn vertex_map(&self) -> &[Vertex] {
        &self.vertex_map
    }

    /// Maps a tree of the reduced instance to a tree of the original one with
    /// the same cost that spans all original terminals.
    pub fn lift(
        &self,
        original: &SteinerInstance,
        reduced_edges: &[(Vertex, Vertex)],
    ) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(reduced_edges.len());
        let mut touched = vec![false; self.zero_forest.len()];
        for &(a, b) in reduced_edges {
            let key = if a <= b { (a, b) } else { (b, a) };
            out.push(self.edge_origin[&key]);
            touched[a as usize] = true;
            touched[b as usize] = true;
        }
        for &t in original.terminals() {
            touched[self.map_vertex(t) as usize] = true;
        }
        for (r, zero_edges) in self.zero_forest.iter().enumerate() {
            if touched[r] {
                out.extend_from_slice(zero_edges);
            }
        }
        if self.is_identity() {
            out
        } else {
            prune_steiner_leaves(original.graph(), original.terminals(), out)
        }
    }
}

/// Merges the endpoints of every zero-cost edge. Parallel edges that arise
/// are collapsed to the cheapest; a reduced vertex is a terminal if any merged
/// vertex was, with terminals kept in order of first appearance.
pub fn contract_zero_edges(instance: &SteinerInstance) -> Contraction {
    let graph = instance.graph();
    let n = graph.vertex_count();
    let mut dsu = DisjointSets::new(n);
    let mut spanning_zero = Vec::new();
    for e in graph.edges() {
        if e.cost == 0 && dsu.union(e.u, e.v) {
            spanning_zero.push((e.u, e.v));
        }
    }

    let mut rep_to_new: HashMap<u32, Vertex> = HashMap::new();
    let mut vertex_map = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let rep = dsu.find(v);
        let next = rep_to_new.len() as Vertex;
        vertex_map.push(*rep_to_new.entry(rep).or_insert(next));
    }
    let reduced_n = rep_to_new.len();

    let mut zero_forest = vec![Vec::new(); reduced_n];
    for (u, v) in spanning_zero {
        zero_forest[vertex_map[u as usize] as usize].push((u, v));
    }

    let mut best: HashMap<(Vertex, Vertex), (usize, Edge)> = HashMap::new();
    let mut order = Vec::new();
    for e in graph.edges() {
        let (a, b) = (vertex_map[e.u as usize], vertex_map[e.v as usize]);
        if a == b {
            continue;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        match best.get_mut(&key) {
            Some((_, kept)) => {
                if e.cost < kept.cost {
                    *kept = *e;
                }
            }
            None => {
                best.insert(key, (order.len(), *e));
                order.push(key);
            }
        }
    }
    let mut edges = Vec::with_capacity(order.len());
    let mut edge_origin = HashMap::with_capacity(order.len());
    for key in order {
        let (_, orig) = best[&key];
        edges.push(Edge {
            u: key.0,
            v: key.1,
            cost: orig.cost,
        });
        edge_origin.insert(key, (orig.u, orig.v));
    }

    let mut terminals = Vec::new();
    let mut seen = vec![false; reduced_n];
    for &t in instance.terminals() {
        let r = vertex_map[t as usize];
        if !seen[r as usize] {
            seen[r as usize] = true;
            terminals.push(r);
        }
    }

    let reduced_graph = Graph::from_simple_edges(reduced_n, edges);
    let reduced = SteinerInstance::new(instance.name.clone(), reduced_graph, terminals)
        .expect("contraction preserves terminal validity");
    let reduced = match (instance.coordinates(), spanning_zero_is_empty(&zero_forest)) {
        (Some(c), true) => reduced
            .with_coordinates(c.clone())
            .expect("identity contraction keeps the vertex set"),
        _ => reduced,
    };
    Contraction {
        instance: reduced,
        vertex_map,
        edge_origin,
        zero_forest,
    }
}

fn spanning_zero_is_empty(forest: &[Vec<(Vertex, Vertex)>]) -> bool {
    forest.iter().all(Vec::is_empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_tree;

    fn inst(n: usize, edges: &[(Vertex, Vertex, u64)], terminals: Vec<Vertex>) -> SteinerInstance {
        let g = Graph::from_edges(n, edges.iter().map(|&(u, v, cost)| Edge { u, v, cost })).unwrap();
        SteinerInstance::new("t", g, terminals).unwrap()
    }

    #[test]
    fn no_zero_edges_is_identity() {
        let i = inst(3, &[(0, 1, 2), (1, 2, 3)], vec![0, 2]);
        let c = contract_zero_edges(&i);
        assert!(c.is_identity());
        assert_eq!(c.vertex_map(), &[0, 1, 2]);
        assert_eq!(c.instance.edge_count(), 2);
        assert_eq!(c.instance.terminals(), &[0, 2]);
        assert_eq!(c.lift(&i, &[(0, 1), (2, 1)]), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn zero_edge_between_terminals_merges_them() {
        let i = inst(3, &[(0, 1, 0), (1, 2, 5)], vec![0, 1]);
        let c = contract_zero_edges(&i);
        assert_eq!(c.instance.vertex_count(), 2);
        assert_eq!(c.instance.terminal_count(), 1);
        let lifted = c.lift(&i, &[]);
        assert_eq!(lifted, vec![(0, 1)]);
        assert_eq!(validate_tree(&i, &lifted), Ok(0));
    }

    #[test]
    fn parallel_edges_after_merge_keep_cheapest() {
        // 0 and 1 merge; both connect to 2 with costs 7 and 4
        let i = inst(3, &[(0, 1, 0), (0, 2, 7), (1, 2, 4)], vec![0, 2]);
        let c = contract_zero_edges(&i);
        assert_eq!(c.instance.edge_count(), 1);
        assert_eq!(c.instance.graph().edges()[0].cost, 4);
        assert!(c.instance.graph().edges().iter().all(|e| e.cost > 0));
        let lifted = c.lift(&i, &[(0, 1)]);
        assert_eq!(validate_tree(&i, &lifted), Ok(4));
    }
}
