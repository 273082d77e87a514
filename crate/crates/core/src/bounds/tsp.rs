use crate::cost::{self, Cost, INFINITY};
use crate::graph::{DistanceOracle, Vertex};
use crate::terminal_set::TerminalSet;

pub const DEFAULT_TSP_CAP: usize = 20;

/// Shortest Hamiltonian paths in the terminal distance graph: `hp(S, a, b)`
/// for every terminal set `S` and every pair `a < b` in `S`.
///
/// Entries for `S` are stored contiguously at `offset[S]`; the pair with
/// ranks `ia < ib` inside `S` sits at `ib * (ib - 1) / 2 + ia`.
#[derive(Clone, Debug)]
pub struct TspTable {
    k: usize,
    offset: Vec<usize>,
    paths: Vec<Cost>,
}

#[inline]
fn rank(set: u64, i: usize) -> usize {
    (set & ((1u64 << i) - 1)).count_ones() as usize
}

impl TspTable {
    pub fn build(dist: &DistanceOracle) -> TspTable {
        let k = dist.terminal_count();
        assert!(k < 32, "Hamiltonian-path table over {k} terminals");
        let sets = 1usize << k;
        let mut offset = Vec::with_capacity(sets + 1);
        let mut acc = 0usize;
        for s in 0..sets {
            offset.push(acc);
            let c = (s as u64).count_ones() as usize;
            acc += c * c.saturating_sub(1) / 2;
        }
        offset.push(acc);
        let mut table = TspTable {
            k,
            offset,
            paths: vec![INFINITY; acc],
        };
        let d: Vec<Vec<Cost>> = (0..k)
            .map(|i| (0..k).map(|j| dist.terminal_dist(i, j)).collect())
            .collect();

        // hp(S, a, b) = min over c in S \ {a, b} of hp(S \ {b}, a, c) + d(c, b);
        // S \ {b} < S numerically, so increasing mask order is a valid schedule.
        let mut members = Vec::with_capacity(k);
        for s in 1..sets as u64 {
            members.clear();
            members.extend(TerminalSet(s).iter());
            if members.len() < 2 {
                continue;
            }
            let base = table.offset[s as usize];
            if members.len() == 2 {
                table.paths[base] = d[members[0]][members[1]];
                continue;
            }
            for ib in 1..members.len() {
                for ia in 0..ib {
                    let (a, b) = (members[ia], members[ib]);
                    let best = table.best_extension(s, a, b, &members, &d);
                    table.paths[base + ib * (ib - 1) / 2 + ia] = best;
                }
            }
        }
        table
    }

    fn best_extension(&self, s: u64, a: usize, b: usize, members: &[usize], d: &[Vec<Cost>]) -> Cost {
        let without_b = s & !(1u64 << b);
        let mut best = INFINITY;
        for &c in members {
            if c == a || c == b {
                continue;
            }
            let c_ = cost::add(self.get(without_b, a, c), d[c][b]);
            if c_ < best {
                best = c_;
            }
        }
        best
    }

    pub fn terminal_count(&self) -> usize {
        self.k
    }

    pub fn entry_count(&self) -> usize {
        self.paths.len()
    }

    /// Shortest Hamiltonian path in the distance graph of `set` from `a` to `b`.
    pub fn get(&self, set: u64, a: usize, b: usize) -> Cost {
        debug_assert!(a != b && set >> a & 1 == 1 && set >> b & 1 == 1);
        let (ia, ib) = {
            let (x, y) = (rank(set, a), rank(set, b));
            if x < y {
                (x, y)
            } else {
                (y, x)
            }
        };
        self.paths[self.offset[set as usize] + ib * (ib - 1) / 2 + ia]
    }

    pub fn hamiltonian_path(&self, set: TerminalSet, a: usize, b: usize) -> Cost {
        if a == b {
            return if set.len() == 1 { 0 } else { INFINITY };
        }
        self.get(set.bits(), a, b)
    }

    /// Minimum tour through the terminals of `set`: 0 for one vertex, `2·d`
    /// for two.
    pub fn tour(&self, dist: &DistanceOracle, set: TerminalSet) -> Cost {
        let members: Vec<usize> = set.iter().collect();
        match members[..] {
            [] | [_] => 0,
            [a, b] => cost::add(dist.terminal_dist(a, b), dist.terminal_dist(a, b)),
            _ => {
                let m = members[0];
                members[1..]
                    .iter()
                    .map(|&b| cost::add(self.get(set.bits(), m, b), dist.terminal_dist(b, m)))
                    .min()
                    .unwrap()
            }
        }
    }

    /// Minimum tour through `set ∪ {v}`, by trying every pair of tour
    /// neighbours of `v`. A terminal `v` is absorbed by the set.
    pub fn tour_with(&self, dist: &DistanceOracle, v: Vertex, set: TerminalSet) -> Cost {
        let at_v = dist.terminals().iter().position(|&t| t == v);
        let set = match at_v {
            Some(i) if set.contains(i) => set.without(i),
            _ => set,
        };
        let members: Vec<usize> = set.iter().collect();
        match members[..] {
            [] => 0,
            [a] => cost::add(dist.dist(a, v), dist.dist(a, v)),
            _ => {
                let mut best = INFINITY;
                for (ib, &b) in members.iter().enumerate() {
                    let db = dist.dist(b, v);
                    for &a in &members[..ib] {
                        let c = cost::add(cost::add(dist.dist(a, v), db), self.get(set.bits(), a, b));
                        if c < best {
                            best = c;
                        }
                    }
                }
                best
            }
        }
    }
}
