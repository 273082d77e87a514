use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::{self, Cost, INFINITY};
use crate::graph::{Graph, Vertex};

use crate::graph::settle_from_heap;

/// Shortest-paths heuristic: start from `root` and repeatedly attach the
/// terminal closest to the current tree along a shortest path. Ties go to
/// the smaller vertex id. Returns the tree cost and its edges, or `None` if
/// some terminal is unreachable.
pub fn heuristic_upper_bound(
    graph: &Graph,
    terminals: &[Vertex],
    root: Vertex,
) -> Option<(Cost, Vec<(Vertex, Vertex)>)> {
    let n = graph.vertex_count();
    let mut dist = vec![INFINITY; n];
    let mut pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[root as usize] = 0;
    heap.push(Reverse((0, root)));
    let mut connected = vec![false; n];
    connected[root as usize] = true;
    let mut pending: Vec<Vertex> = terminals.iter().copied().filter(|&t| t != root).collect();
    let mut edges = Vec::new();
    let mut total: Cost = 0;

    while !pending.is_empty() {
        settle_from_heap(graph, &mut dist, &mut pred, &mut heap);
        let (pos, &t) = pending
            .iter()
            .enumerate()
            .min_by_key(|&(_, &t)| (dist[t as usize], t))
            .unwrap();
        if dist[t as usize] == INFINITY {
            return None;
        }
        pending.swap_remove(pos);
        let mut x = t;
        while !connected[x as usize] {
            let p = pred[x as usize].expect("reachable vertex has a predecessor");
            total = cost::add(total, graph.edge_cost(p, x).unwrap());
            edges.push((p, x));
            connected[x as usize] = true;
            dist[x as usize] = 0;
            heap.push(Reverse((0, x)));
            x = p;
        }
        pending.retain(|&u| !connected[u as usize]);
    }
    Some((total, edges))
}
