use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Graph, Vertex};
use crate::cost::{self, Cost, INFINITY};

/// Result of a single-source shortest path computation.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub dist: Vec<Cost>,
    pub pred: Vec<Option<Vertex>>,
}

impl ShortestPaths {
    /// Vertices of the stored shortest path from the source to `target`,
    /// source first. Empty if `target` is unreachable.
    pub fn path_to(&self, target: Vertex) -> Vec<Vertex> {
        if self.dist[target as usize] == INFINITY {
            return Vec::new();
        }
        let mut path = vec![target];
        let mut v = target;
        while let Some(p) = self.pred[v as usize] {
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    }
}

/// Dijkstra from `source` on a binary heap with lazy deletion.
pub fn shortest_paths_from(graph: &Graph, source: Vertex) -> ShortestPaths {
    let n = graph.vertex_count();
    let mut dist = vec![INFINITY; n];
    let mut pred = vec![None; n];
    dist[source as usize] = 0;
    settle(graph, &mut dist, &mut pred);
    ShortestPaths { dist, pred }
}

/// Runs Dijkstra treating every vertex with a finite `dist` entry as a source
/// with that initial label. Labels only ever decrease; `pred` is updated on
/// strict improvement, so among equal-cost paths the first one found wins.
/// Vertices are settled in `(distance, id)` order.
pub(crate) fn settle(graph: &Graph, dist: &mut [Cost], pred: &mut [Option<Vertex>]) {
    let mut heap: BinaryHeap<Reverse<(Cost, Vertex)>> = dist
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != INFINITY)
        .map(|(v, &d)| Reverse((d, v as Vertex)))
        .collect();
    settle_from_heap(graph, dist, pred, &mut heap);
}

pub(crate) fn settle_from_heap(
    graph: &Graph,
    dist: &mut [Cost],
    pred: &mut [Option<Vertex>],
    heap: &mut BinaryHeap<Reverse<(Cost, Vertex)>>,
) {
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v as usize] {
            continue;
        }
        for &(w, c) in graph.neighbors(v) {
            let nd = cost::add(d, c);
            if nd < dist[w as usize] {
                dist[w as usize] = nd;
                pred[w as usize] = Some(v);
                heap.push(Reverse((nd, w)));
            }
        }
    }
}
