//! Plain subset dynamic program used as ground truth.
//!
//! For every nonempty subset `X` of the given terminals and every vertex `v`
//! the table holds `smt(X ∪ {v})`, filled in order of increasing `|X|`: a
//! split at `v` into two smaller subsets, followed by a Dijkstra sweep that
//! lets the tree grow a path towards `v`. No bounds, no pruning, no label
//! store; it shares nothing with the solver beyond the graph type.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use thiserror::Error;

use crate::cost::{Cost, INFINITY};
use crate::graph::{prune_steiner_leaves, Graph, Vertex};
use crate::instance::SteinerInstance;

/// Table size is `2^(k-1) * n` entries.
pub const MAX_ORACLE_TERMINALS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaselineError {
    #[error("{0} terminals exceed the oracle limit of {MAX_ORACLE_TERMINALS}")]
    TooManyTerminalsForOracle(usize),
    #[error("terminals are not connected")]
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct BaselineSolution {
    pub cost: Cost,
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    Leaf,
    Pred(Vertex),
    Split(u32),
}

/// `smt(X ∪ {v})` for every nonempty subset `X` of the terminal list.
struct DwTable {
    n: usize,
    cost: Vec<Cost>,
    choice: Vec<Choice>,
}

impl DwTable {
    fn build(graph: &Graph, terminals: &[Vertex]) -> DwTable {
        let n = graph.vertex_count();
        let p = terminals.len();
        let sets = 1usize << p;
        let mut table = DwTable {
            n,
            cost: vec![INFINITY; sets * n],
            choice: vec![Choice::Leaf; sets * n],
        };
        let mut masks: Vec<u32> = (1..sets as u32).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for mask in masks {
            let base = mask as usize * n;
            if mask.count_ones() == 1 {
                let t = terminals[mask.trailing_zeros() as usize];
                table.cost[base + t as usize] = 0;
            } else {
                let low = mask & mask.wrapping_neg();
                let rest = mask ^ low;
                for v in 0..n {
                    let mut best = INFINITY;
                    let mut arg = 0;
                    // X1 ranges over the proper subsets containing the lowest bit.
                    let mut sub = rest;
                    loop {
                        let x1 = sub | low;
                        if x1 != mask {
                            let a = table.cost[x1 as usize * n + v];
                            let b = table.cost[(mask ^ x1) as usize * n + v];
                            let c = a.saturating_add(b);
                            if c < best {
                                best = c;
                                arg = x1;
                            }
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & rest;
                    }
                    table.cost[base + v] = best;
                    table.choice[base + v] = Choice::Split(arg);
                }
            }
            table.sweep(graph, mask);
        }
        table
    }

    fn sweep(&mut self, graph: &Graph, mask: u32) {
        let base = mask as usize * self.n;
        let cost = &mut self.cost[base..base + self.n];
        let choice = &mut self.choice[base..base + self.n];
        let mut heap: BinaryHeap<Reverse<(Cost, Vertex)>> = cost
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != INFINITY)
            .map(|(v, &c)| Reverse((c, v as Vertex)))
            .collect();
        let mut done = vec![false; self.n];
        while let Some(Reverse((c, v))) = heap.pop() {
            if done[v as usize] || c > cost[v as usize] {
                continue;
            }
            done[v as usize] = true;
            for &(w, ec) in graph.neighbors(v) {
                let nc = c.saturating_add(ec);
                if nc < cost[w as usize] && !done[w as usize] {
                    cost[w as usize] = nc;
                    choice[w as usize] = Choice::Pred(v);
                    heap.push(Reverse((nc, w)));
                }
            }
        }
    }

    fn get(&self, mask: u32, v: Vertex) -> Cost {
        self.cost[mask as usize * self.n + v as usize]
    }

    fn edges(&self, mask: u32, v: Vertex) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        let mut stack = vec![(mask, v)];
        while let Some((m, x)) = stack.pop() {
            match self.choice[m as usize * self.n + x as usize] {
                Choice::Leaf => {}
                Choice::Pred(w) => {
                    out.push((x.min(w), x.max(w)));
                    stack.push((m, w));
                }
                Choice::Split(m1) => {
                    stack.push((m1, x));
                    stack.push((m ^ m1, x));
                }
            }
        }
        out
    }
}

fn check_size(k: usize) -> Result<(), BaselineError> {
    if k > MAX_ORACLE_TERMINALS {
        Err(BaselineError::TooManyTerminalsForOracle(k))
    } else {
        Ok(())
    }
}

/// Optimum Steiner tree of `instance`, rooted at its last terminal.
pub fn solve_baseline(instance: &SteinerInstance) -> Result<BaselineSolution, BaselineError> {
    let k = instance.terminal_count();
    check_size(k)?;
    let terminals = instance.terminals();
    if k == 1 {
        return Ok(BaselineSolution {
            cost: 0,
            edges: Vec::new(),
        });
    }
    let (sources, root) = (&terminals[..k - 1], terminals[k - 1]);
    let graph = instance.graph();
    let table = DwTable::build(graph, sources);
    let full = (1u32 << (k - 1)) - 1;
    let cost = table.get(full, root);
    if cost == INFINITY {
        return Err(BaselineError::Infeasible);
    }
    let edges = spanning_subtree(graph, terminals, table.edges(full, root));
    Ok(BaselineSolution { cost, edges })
}

/// `smt(X)` for an arbitrary vertex set `X` of the graph.
pub fn smt_subset(graph: &Graph, vertices: &[Vertex]) -> Result<Cost, BaselineError> {
    let distinct: Vec<Vertex> = vertices.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    check_size(distinct.len())?;
    match distinct.split_last() {
        None => Ok(0),
        Some((_, [])) => Ok(0),
        Some((&root, sources)) => {
            let table = DwTable::build(graph, sources);
            let full = (1u32 << sources.len()) - 1;
            Ok(table.get(full, root))
        }
    }
}

/// `smt(X ∪ {v})` for every vertex `v`, from a single table over `X`.
pub fn smt_with_each_vertex(graph: &Graph, vertices: &[Vertex]) -> Result<Vec<Cost>, BaselineError> {
    let distinct: Vec<Vertex> = vertices.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    check_size(distinct.len())?;
    if distinct.is_empty() {
        return Ok(vec![0; graph.vertex_count()]);
    }
    let table = DwTable::build(graph, &distinct);
    let full = (1u32 << distinct.len()) - 1;
    Ok((0..graph.vertex_count() as Vertex).map(|v| table.get(full, v)).collect())
}

/// Kruskal over the union of the reconstructed subtrees, then leaf pruning.
/// With positive costs the union already is a tree; zero-cost edges may
/// create cycles, which this removes without changing the cost.
fn spanning_subtree(
    graph: &Graph,
    terminals: &[Vertex],
    mut edges: Vec<(Vertex, Vertex)>,
) -> Vec<(Vertex, Vertex)> {
    edges.sort_unstable();
    edges.dedup();
    edges.sort_by_key(|&(u, v)| graph.edge_cost(u, v).unwrap_or(INFINITY));
    let mut parent: Vec<Vertex> = (0..graph.vertex_count() as Vertex).collect();
    fn find(parent: &mut [Vertex], mut x: Vertex) -> Vertex {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut tree = Vec::new();
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a as usize] = b;
            tree.push((u, v));
        }
    }
    prune_steiner_leaves(graph, terminals, tree)
}
