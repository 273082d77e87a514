use std::collections::HashMap;

use super::{shortest_paths_from, Graph, Vertex};
use crate::cost::{self, Cost, INFINITY};
use crate::terminal_set::TerminalSet;

/// Shortest-path distances from every terminal to every vertex, plus cached
/// minimum spanning tree costs in the distance graph of terminal subsets.
///
/// Terminal `i` of the oracle is `terminals[i]`; sets are bitmasks over these
/// indices. Distance rows are immutable after construction. The MST cache is
/// owned by a single solver run.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    terminals: Vec<Vertex>,
    rows: Vec<Vec<Cost>>,
    mst_cache: HashMap<u64, Cost>,
}

impl DistanceOracle {
    pub fn new(graph: &Graph, terminals: &[Vertex]) -> Self {
        assert!(terminals.len() <= TerminalSet::CAPACITY);
        let rows = terminals
            .iter()
            .map(|&t| shortest_paths_from(graph, t).dist)
            .collect();
        DistanceOracle {
            terminals: terminals.to_vec(),
            rows,
            mst_cache: HashMap::new(),
        }
    }

    #[inline]
    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn terminals(&self) -> &[Vertex] {
        &self.terminals
    }

    #[inline]
    pub fn terminal(&self, i: usize) -> Vertex {
        self.terminals[i]
    }

    /// `d(t_i, v)`.
    #[inline]
    pub fn dist(&self, i: usize, v: Vertex) -> Cost {
        self.rows[i][v as usize]
    }

    /// `d(t_i, t_j)`.
    #[inline]
    pub fn terminal_dist(&self, i: usize, j: usize) -> Cost {
        self.rows[i][self.terminals[j] as usize]
    }

    pub fn row(&self, i: usize) -> &[Cost] {
        &self.rows[i]
    }

    /// `min_{t in set} d(t, v)` together with the smallest index attaining it.
    pub fn nearest_in(&self, v: Vertex, set: TerminalSet) -> (Cost, Option<usize>) {
        let mut best = (INFINITY, None);
        for i in set.iter() {
            let d = self.dist(i, v);
            if d < best.0 {
                best = (d, Some(i));
            }
        }
        best
    }

    /// `min_{x in a, y in b} d(x, y)` and the `b`-member attaining it.
    pub fn set_distance(&self, a: TerminalSet, b: TerminalSet) -> (Cost, Option<usize>) {
        let mut best = (INFINITY, None);
        for x in a.iter() {
            for y in b.iter() {
                let d = self.terminal_dist(x, y);
                if d < best.0 {
                    best = (d, Some(y));
                }
            }
        }
        best
    }

    /// Cost of a minimum spanning tree of the distance graph on `set`, cached.
    pub fn mst_cost(&mut self, set: TerminalSet) -> Cost {
        if set.len() <= 1 {
            return 0;
        }
        if let Some(&c) = self.mst_cache.get(&set.bits()) {
            return c;
        }
        let c = self.mst_cost_uncached(set);
        self.mst_cache.insert(set.bits(), c);
        c
    }

    pub fn cached_mst_count(&self) -> usize {
        self.mst_cache.len()
    }

    /// Dense Prim on the distance graph of `set`, `O(|set|^2)`.
    pub fn mst_cost_uncached(&self, set: TerminalSet) -> Cost {
        let members: Vec<usize> = set.iter().collect();
        if members.len() <= 1 {
            return 0;
        }
        let mut key: Vec<Cost> = members
            .iter()
            .map(|&j| self.terminal_dist(members[0], j))
            .collect();
        let mut in_tree = vec![false; members.len()];
        in_tree[0] = true;
        let mut total: Cost = 0;
        for _ in 1..members.len() {
            let (pick, _) = key
                .iter()
                .enumerate()
                .filter(|(i, _)| !in_tree[*i])
                .min_by_key(|&(i, &k)| (k, i))
                .expect("at least one vertex outside the tree");
            in_tree[pick] = true;
            total = cost::add(total, key[pick]);
            for (j, slot) in key.iter_mut().enumerate() {
                if !in_tree[j] {
                    let d = self.terminal_dist(members[pick], members[j]);
                    if d < *slot {
                        *slot = d;
                    }
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Graph {
        let mut edges = Vec::new();
        for v in 1..n as Vertex {
            let u = rng.gen_range(0..v);
            edges.push(Edge { u, v, cost: rng.gen_range(1..=20) });
        }
        for _ in 0..extra {
            let u = rng.gen_range(0..n as Vertex);
            let v = rng.gen_range(0..n as Vertex);
            if u != v {
                edges.push(Edge { u, v, cost: rng.gen_range(1..=20) });
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    /// Decodes a Prüfer sequence over `0..n` into the edge list of a labelled tree.
    fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
        let mut degree = vec![1usize; n];
        for &x in seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in seq {
            let leaf = (0..n).find(|&i| degree[i] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges
    }

    fn exhaustive_mst(oracle: &DistanceOracle, members: &[usize]) -> Cost {
        let n = members.len();
        if n <= 1 {
            return 0;
        }
        if n == 2 {
            return oracle.terminal_dist(members[0], members[1]);
        }
        let total = n.pow(n as u32 - 2);
        let mut best = INFINITY;
        for code in 0..total {
            let mut c = code;
            let seq: Vec<usize> = (0..n - 2)
                .map(|_| {
                    let d = c % n;
                    c /= n;
                    d
                })
                .collect();
            let cost: Cost = prufer_edges(&seq, n)
                .into_iter()
                .map(|(a, b)| oracle.terminal_dist(members[a], members[b]))
                .sum();
            best = best.min(cost);
        }
        best
    }

    #[test]
    fn trivial_msts() {
        let g = Graph::from_edges(3, [Edge { u: 0, v: 1, cost: 4 }, Edge { u: 1, v: 2, cost: 6 }])
            .unwrap();
        let mut o = DistanceOracle::new(&g, &[0, 2]);
        assert_eq!(o.mst_cost(TerminalSet::singleton(0)), 0);
        assert_eq!(o.mst_cost(TerminalSet::EMPTY), 0);
        assert_eq!(o.mst_cost(TerminalSet::full(2)), 10);
        assert_eq!(o.terminal_dist(0, 1), o.terminal_dist(1, 0));
        assert_eq!(o.dist(0, 0), 0);
    }

    #[test]
    fn mst_matches_prufer_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let g = random_connected(&mut rng, 15, 15);
            let terminals: Vec<Vertex> = {
                let mut all: Vec<Vertex> = (0..15).collect();
                for i in 0..6 {
                    let j = rng.gen_range(i..15);
                    all.swap(i, j);
                }
                all[..6].to_vec()
            };
            let mut o = DistanceOracle::new(&g, &terminals);
            for mask in 1u64..64 {
                let set = TerminalSet(mask);
                let members: Vec<usize> = set.iter().collect();
                assert_eq!(o.mst_cost(set), exhaustive_mst(&o, &members), "mask {mask:b}");
            }
            assert_eq!(o.cached_mst_count(), 64 - 1 - 6);
        }
    }

    #[test]
    fn metric_and_mst_growth_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let g = random_connected(&mut rng, 12, 10);
            let terminals: Vec<Vertex> = (0..8).collect();
            let mut o = DistanceOracle::new(&g, &terminals);
            for a in 0..8 {
                for b in 0..8 {
                    for c in 0..8 {
                        assert!(
                            o.terminal_dist(a, c) <= o.terminal_dist(a, b) + o.terminal_dist(b, c)
                        );
                    }
                }
            }
            for mask in 1u64..256 {
                let set = TerminalSet(mask);
                for y in 0..8 {
                    if set.contains(y) {
                        continue;
                    }
                    let max_d = set.iter().map(|x| o.terminal_dist(x, y)).max().unwrap();
                    let with_y = o.mst_cost(set.with(y));
                    assert!(o.mst_cost(set) <= with_y + 2 * max_d);
                }
            }
        }
    }

    #[test]
    fn nearest_and_set_distance() {
        let g = Graph::from_edges(
            4,
            [
                Edge { u: 0, v: 1, cost: 1 },
                Edge { u: 1, v: 2, cost: 2 },
                Edge { u: 2, v: 3, cost: 3 },
            ],
        )
        .unwrap();
        let o = DistanceOracle::new(&g, &[0, 3, 2]);
        assert_eq!(o.nearest_in(1, TerminalSet(0b110)), (2, Some(2)));
        assert_eq!(o.set_distance(TerminalSet(0b001), TerminalSet(0b110)), (3, Some(2)));
        assert_eq!(o.nearest_in(1, TerminalSet::EMPTY), (INFINITY, None));
    }
}
