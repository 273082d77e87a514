//! Valid lower bounds on the cost of completing a partial Steiner tree.
//!
//! A bound `L(v, J)` estimates the cost of connecting vertex `v` to the
//! terminal set `J`, where `J` always contains the root. Every value here is
//! returned doubled (`2·L`) so that the 1-tree and TSP halves stay integral.
//! Any set without the root evaluates to 0.
//!
//! Terminal indices follow the [`DistanceOracle`] the bound is built on; the
//! root is the last one.

mod jterm;
mod spec;
mod tsp;

pub use jterm::JTermTables;
pub use spec::{BoundParseError, BoundSpec, DEFAULT_JTERM};
pub use tsp::{TspTable, DEFAULT_TSP_CAP};

use std::collections::HashMap;

use thiserror::Error;

use crate::cost::{self, Cost};
use crate::graph::{DistanceOracle, Graph, Vertex};
use crate::terminal_set::TerminalSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("TSP table over {k} terminals exceeds the cap of {cap}")]
    TspTableTooLarge { k: usize, cap: usize },
    #[error("j-terminal bound needs j in 1..=3, got {0}")]
    JTermOrder(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct BoundOptions {
    pub tsp_cap: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            tsp_cap: DEFAULT_TSP_CAP,
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Zero,
    JTerm(usize),
    OneTree,
    Tsp,
    Max(Vec<Kind>),
}

/// Evaluates one [`BoundSpec`] and caches results per `(v, J)`.
#[derive(Clone, Debug)]
pub struct BoundOracle {
    dist: DistanceOracle,
    root: usize,
    kind: Kind,
    spec: BoundSpec,
    jterms: Vec<JTermTables>,
    tsp: Option<TspTable>,
    cache: HashMap<u128, Cost>,
    evaluations: u64,
}

impl BoundOracle {
    /// `dist` must list the root as its last terminal.
    pub fn new(
        graph: &Graph,
        dist: DistanceOracle,
        spec: &BoundSpec,
        options: BoundOptions,
    ) -> Result<BoundOracle, BoundError> {
        let k = dist.terminal_count();
        assert!(k >= 1);
        let root = k - 1;
        let orders = spec.jterm_orders();
        if let Some(&bad) = orders.iter().find(|&&j| !(1..=3).contains(&j)) {
            return Err(BoundError::JTermOrder(bad));
        }
        let jterms = orders
            .iter()
            .map(|&j| JTermTables::build(graph, &dist, root, j))
            .collect();
        let tsp = if spec.uses_tsp() {
            if k > options.tsp_cap {
                return Err(BoundError::TspTableTooLarge {
                    k,
                    cap: options.tsp_cap,
                });
            }
            Some(TspTable::build(&dist))
        } else {
            None
        };
        Ok(BoundOracle {
            kind: lower(spec, &orders),
            spec: spec.clone(),
            dist,
            root,
            jterms,
            tsp,
            cache: HashMap::new(),
            evaluations: 0,
        })
    }

    pub fn spec(&self) -> &BoundSpec {
        &self.spec
    }

    pub fn root_index(&self) -> usize {
        self.root
    }

    pub fn distances(&self) -> &DistanceOracle {
        &self.dist
    }

    pub fn distances_mut(&mut self) -> &mut DistanceOracle {
        &mut self.dist
    }

    pub fn into_distances(self) -> DistanceOracle {
        self.dist
    }

    /// Number of cache misses so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn jterm_tables(&self, j: usize) -> Option<&JTermTables> {
        self.jterms.iter().find(|t| t.j() == j)
    }

    pub fn tsp_table(&self) -> Option<&TspTable> {
        self.tsp.as_ref()
    }

    /// `2·L(v, set)`, cached.
    pub fn lower_bound2(&mut self, v: Vertex, set: TerminalSet) -> Cost {
        let key = (v as u128) << 64 | set.bits() as u128;
        if let Some(&c) = self.cache.get(&key) {
            return c;
        }
        let c = self.evaluate2(v, set);
        self.cache.insert(key, c);
        c
    }

    /// `2·L(v, set)` without touching the cache.
    pub fn evaluate2(&mut self, v: Vertex, set: TerminalSet) -> Cost {
        self.evaluations += 1;
        if !set.contains(self.root) {
            return 0;
        }
        let kind = std::mem::replace(&mut self.kind, Kind::Zero);
        let c = self.eval_kind(&kind, v, set);
        self.kind = kind;
        c
    }

    fn eval_kind(&mut self, kind: &Kind, v: Vertex, set: TerminalSet) -> Cost {
        match kind {
            Kind::Zero => 0,
            Kind::JTerm(i) => self.jterms[*i].evaluate2(&self.dist, v, set),
            Kind::OneTree => self.one_tree2(v, set),
            Kind::Tsp => self
                .tsp
                .as_ref()
                .expect("TSP table built for TSP bounds")
                .tour_with(&self.dist, v, set),
            Kind::Max(parts) => parts
                .iter()
                .map(|p| self.eval_kind(p, v, set))
                .max()
                .unwrap_or(0),
        }
    }

    /// Two smallest distances from `v` into the set plus `mst(set)`; twice
    /// the single distance when the set has one member.
    fn one_tree2(&mut self, v: Vertex, set: TerminalSet) -> Cost {
        let mut first = cost::INFINITY;
        let mut second = cost::INFINITY;
        for i in set.iter() {
            let d = self.dist.dist(i, v);
            if d < first {
                second = first;
                first = d;
            } else if d < second {
                second = d;
            }
        }
        if set.len() == 1 {
            return cost::add(first, first);
        }
        cost::add(cost::add(first, second), self.dist.mst_cost(set))
    }
}

fn lower(spec: &BoundSpec, orders: &[usize]) -> Kind {
    match spec {
        BoundSpec::Zero => Kind::Zero,
        BoundSpec::JTerm(j) => Kind::JTerm(orders.iter().position(|o| o == j).unwrap()),
        BoundSpec::OneTree => Kind::OneTree,
        BoundSpec::Tsp => Kind::Tsp,
        BoundSpec::Max(parts) => Kind::Max(parts.iter().map(|p| lower(p, orders)).collect()),
    }
}
