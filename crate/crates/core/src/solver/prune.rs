use std::collections::HashMap;

use crate::cost::{self, Cost, INFINITY};
use crate::graph::{DistanceOracle, Vertex};
use crate::terminal_set::TerminalSet;

/// Per-set upper bounds for the set-based pruning rule.
///
/// `U(I)` is the cost of a subgraph that contains `I ∪ S(I)` and in which
/// every component reaches a terminal of `S(I)`, with `S(I)` disjoint from
/// `I`. A label for `I` costing more than `U(I)` is never part of an optimum
/// tree. Sets are over all terminals, root bit included.
#[derive(Clone, Debug, Default)]
pub struct PruneTracker {
    bounds: HashMap<u64, (Cost, TerminalSet)>,
    separation: HashMap<u64, (Cost, Option<usize>)>,
}

impl PruneTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn upper(&self, set: TerminalSet) -> Cost {
        self.bounds.get(&set.bits()).map_or(INFINITY, |b| b.0)
    }

    pub fn witnesses(&self, set: TerminalSet) -> TerminalSet {
        self.bounds.get(&set.bits()).map_or(TerminalSet::EMPTY, |b| b.1)
    }

    pub fn tracked_sets(&self) -> usize {
        self.bounds.len()
    }

    /// `dist(I, T \ I)` and the nearest outside terminal, computed once per set.
    fn separation(&mut self, dist: &DistanceOracle, set: TerminalSet, all: TerminalSet) -> (Cost, Option<usize>) {
        *self
            .separation
            .entry(set.bits())
            .or_insert_with(|| dist.set_distance(set, all.difference(set)))
    }

    fn offer(&mut self, set: TerminalSet, cost: Cost, witnesses: TerminalSet) -> bool {
        let slot = self.bounds.entry(set.bits()).or_insert((INFINITY, TerminalSet::EMPTY));
        if cost < slot.0 {
            *slot = (cost, witnesses);
            true
        } else {
            false
        }
    }

    /// Update after `(v, I)` became permanent with cost `l`: the label tree
    /// plus a shortest path from `I` or from `v` to the rest of the terminals.
    pub fn on_permanent(
        &mut self,
        dist: &DistanceOracle,
        all: TerminalSet,
        v: Vertex,
        set: TerminalSet,
        l: Cost,
    ) {
        let rest = all.difference(set);
        let (via_v, wv) = dist.nearest_in(v, rest);
        let (sep, ws) = self.separation(dist, set, all);
        let (extra, witness) = if sep <= via_v { (sep, ws) } else { (via_v, wv) };
        if let Some(w) = witness {
            self.offer(set, cost::add(l, extra), TerminalSet::singleton(w));
        }
    }

    /// Update when permanent labels for disjoint `a` and `b` are merged.
    pub fn on_merge(&mut self, a: TerminalSet, b: TerminalSet) {
        let (Some(&(ua, sa)), Some(&(ub, sb))) = (self.bounds.get(&a.bits()), self.bounds.get(&b.bits())) else {
            return;
        };
        if sa.is_disjoint(b) || sb.is_disjoint(a) {
            let union = a.union(b);
            let s = sa.union(sb).difference(union);
            self.offer(union, cost::add(ua, ub), s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Graph};

    /// Path 0 - 1 - 2 - 3 with costs 1, 5, 1; terminals at all four.
    fn oracle() -> DistanceOracle {
        let g = Graph::from_edges(4, [
            Edge { u: 0, v: 1, cost: 1 },
            Edge { u: 1, v: 2, cost: 5 },
            Edge { u: 2, v: 3, cost: 1 },
        ])
        .unwrap();
        DistanceOracle::new(&g, &[0, 1, 2, 3])
    }

    #[test]
    fn pop_rule_uses_the_nearer_connection() {
        let d = oracle();
        let all = TerminalSet::full(4);
        let mut t = PruneTracker::new();
        let i = TerminalSet(0b0001);
        t.on_permanent(&d, all, 0, i, 0);
        assert_eq!(t.upper(i), 1);
        assert_eq!(t.witnesses(i), TerminalSet::singleton(1));
        // a worse label never raises U
        t.on_permanent(&d, all, 3, i, 7);
        assert_eq!(t.upper(i), 1);
        let j = TerminalSet(0b0011);
        t.on_permanent(&d, all, 1, j, 1);
        assert_eq!(t.upper(j), 6);
        assert_eq!(t.witnesses(j), TerminalSet::singleton(2));
        assert!(t.witnesses(j).is_disjoint(j));
    }

    #[test]
    fn merge_rule() {
        let d = oracle();
        let all = TerminalSet::full(4);
        let mut t = PruneTracker::new();
        let a = TerminalSet(0b0001);
        let b = TerminalSet(0b0010);
        t.on_permanent(&d, all, 0, a, 0);
        t.on_permanent(&d, all, 1, b, 0);
        // S(a) = {1} lies in b and S(b) = {0} lies in a: no combination
        t.on_merge(a, b);
        assert_eq!(t.upper(a.union(b)), INFINITY);
        let c = TerminalSet(0b1000);
        t.on_permanent(&d, all, 3, c, 0);
        t.on_merge(a, c);
        assert_eq!(t.upper(a.union(c)), 2);
        assert_eq!(t.witnesses(a.union(c)), TerminalSet(0b0110));
    }
}
