use std::collections::HashMap;

use crate::cost::{self, Cost, INFINITY};
use crate::graph::{settle, DistanceOracle, Graph, Vertex};
use crate::terminal_set::TerminalSet;

/// Tables for the j-terminal bound: `smt({v} ∪ X)` for every vertex `v` and
/// every terminal set `X` that contains the root and at most `j - 1` other
/// terminals (plus the root-free sets of size `<= j - 1` needed to build them).
#[derive(Clone, Debug)]
pub struct JTermTables {
    j: usize,
    root: usize,
    rows: HashMap<u64, Vec<Cost>>,
    seconds: HashMap<u64, Cost>,
}

impl JTermTables {
    pub fn build(graph: &Graph, dist: &DistanceOracle, root: usize, j: usize) -> JTermTables {
        assert!((1..=3).contains(&j));
        let k = dist.terminal_count();
        let mut tables = JTermTables {
            j,
            root,
            rows: HashMap::new(),
            seconds: HashMap::new(),
        };
        let all: Vec<usize> = (0..k).collect();
        for size in 2..=j.min(k) {
            let mut sets = Vec::new();
            for_each_of_size(&all, size, &mut |s| {
                if size < j || s.contains(root) {
                    sets.push(s);
                }
            });
            for s in sets {
                let row = tables.compute_row(graph, dist, s);
                tables.rows.insert(s.bits(), row);
            }
        }
        tables
    }

    /// One subset-DP step: best split at each vertex, then a Dijkstra sweep.
    fn compute_row(&self, graph: &Graph, dist: &DistanceOracle, set: TerminalSet) -> Vec<Cost> {
        let n = graph.vertex_count();
        let low = TerminalSet::singleton(set.first().expect("nonempty"));
        let rest = set.difference(low);
        let mut row = vec![INFINITY; n];
        for b in rest.subsets() {
            // splits {a ∪ low, b} with b a nonempty subset of the rest
            let a = set.difference(b);
            for (v, slot) in row.iter_mut().enumerate() {
                let c = cost::add(
                    self.stored(dist, a, v as Vertex),
                    self.stored(dist, b, v as Vertex),
                );
                if c < *slot {
                    *slot = c;
                }
            }
        }
        let mut pred = vec![None; n];
        settle(graph, &mut row, &mut pred);
        row
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Stored `smt({v} ∪ X)`. Panics if `X` is not covered by the tables.
    pub fn stored(&self, dist: &DistanceOracle, x: TerminalSet, v: Vertex) -> Cost {
        match x.len() {
            0 => 0,
            1 => dist.dist(x.first().unwrap(), v),
            _ => self.rows.get(&x.bits()).expect("set outside the j-terminal tables")[v as usize],
        }
    }

    /// Doubled bound value at `(v, set)`; `set` must contain the root.
    pub fn evaluate2(&mut self, dist: &DistanceOracle, v: Vertex, set: TerminalSet) -> Cost {
        debug_assert!(set.contains(self.root));
        let root = TerminalSet::singleton(self.root);
        let others: Vec<usize> = set.without(self.root).iter().collect();
        // smt is monotone in the terminal set, so only the largest admissible
        // subsets matter in both maxima.
        let mut first = 0;
        for_each_of_size(&others, (self.j - 1).min(others.len()), &mut |s| {
            first = first.max(self.stored(dist, s.union(root), v));
        });
        let second = match self.seconds.get(&set.bits()) {
            Some(&c) => c,
            None => {
                let mut best = 0;
                for_each_of_size(&others, self.j.min(others.len()), &mut |s| {
                    best = best.max(match s.iter().last() {
                        None => 0,
                        Some(t) => self.stored(dist, s.without(t).union(root), dist.terminal(t)),
                    });
                });
                self.seconds.insert(set.bits(), best);
                best
            }
        };
        cost::add(first.max(second), first.max(second))
    }
}

/// Calls `f` on every `size`-element subset of `members`.
pub(crate) fn for_each_of_size(
    members: &[usize],
    size: usize,
    f: &mut dyn FnMut(TerminalSet),
) {
    fn go(
        members: &[usize],
        size: usize,
        acc: TerminalSet,
        f: &mut dyn FnMut(TerminalSet),
    ) {
        if size == 0 {
            f(acc);
            return;
        }
        for i in 0..members.len() {
            if members.len() - i < size {
                break;
            }
            go(&members[i + 1..], size - 1, acc.with(members[i]), f);
        }
    }
    go(members, size, TerminalSet::EMPTY, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_size_subsets() {
        let mut seen = Vec::new();
        for_each_of_size(&[0, 2, 5, 7], 2, &mut |s| seen.push(s.bits()));
        assert_eq!(seen.len(), 6);
        let mut c = 0;
        for_each_of_size(&[1, 2, 3], 0, &mut |s| {
            assert!(s.is_empty());
            c += 1
        });
        assert_eq!(c, 1);
        let mut none = 0;
        for_each_of_size(&[1], 2, &mut |_| none += 1);
        assert_eq!(none, 0);
    }
}
