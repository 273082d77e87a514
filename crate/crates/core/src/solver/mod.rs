//! The Dijkstra-Steiner labeling algorithm.
//!
//! Labels are pairs `(v, I)` of a vertex and a set of source terminals (all
//! terminals but the root). The cost `l(v, I)` of a permanent label equals
//! `smt({v} ∪ I)`. Labels are selected by `l(v, I) + L(v, T \ I)` for a valid
//! lower bound `L`; the run ends when `(root, sources)` becomes permanent.
//!
//! Keys are kept doubled: `2·l + 2·L`, so that bounds with halves stay exact.

mod heuristic;
mod labels;
mod prune;

pub use heuristic::heuristic_upper_bound;
pub use labels::{Back, Label, LabelStore, LABEL_BYTES};
pub use prune::PruneTracker;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bounds::{BoundError, BoundOptions, BoundOracle, BoundSpec, DEFAULT_TSP_CAP};
use crate::cost::{self, Cost, INFINITY};
use crate::graph::{contract_zero_edges, shortest_paths_from, validate_tree, DistanceOracle, Graph, Vertex};
use crate::instance::SteinerInstance;
use crate::terminal_set::TerminalSet;

pub const DEFAULT_MEMORY_LIMIT: u64 = 4 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneMode {
    Off,
    /// Discard labels whose cost plus lower bound exceeds the heuristic tree.
    Bound,
    /// `Bound` plus the per-set upper bounds.
    Full,
}

impl PruneMode {
    pub const ALL: [PruneMode; 3] = [PruneMode::Off, PruneMode::Bound, PruneMode::Full];
}

impl fmt::Display for PruneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruneMode::Off => "off",
            PruneMode::Bound => "bound",
            PruneMode::Full => "full",
        })
    }
}

impl FromStr for PruneMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(PruneMode::Off),
            "bound" => Ok(PruneMode::Bound),
            "full" => Ok(PruneMode::Full),
            other => Err(format!("unknown prune mode {other:?}, expected off, bound or full")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootRule {
    /// Final terminal in instance order.
    Last,
    /// Terminal closest in L1 to the mean of all terminal coordinates.
    Center,
    /// Terminal at this position of the terminal list.
    Index(usize),
}

impl fmt::Display for RootRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootRule::Last => f.write_str("last"),
            RootRule::Center => f.write_str("center"),
            RootRule::Index(i) => write!(f, "index:{i}"),
        }
    }
}

impl FromStr for RootRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "last" => Ok(RootRule::Last),
            "center" => Ok(RootRule::Center),
            _ => match lower.strip_prefix("index:").map(str::parse) {
                Some(Ok(i)) => Ok(RootRule::Index(i)),
                _ => Err(format!("unknown root rule {s:?}, expected last, center or index:<i>")),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub bound: BoundSpec,
    pub prune: PruneMode,
    pub root: RootRule,
    pub time_limit: Option<Duration>,
    /// Bytes; labels are charged [`LABEL_BYTES`] each.
    pub memory_limit: Option<u64>,
    pub tsp_cap: usize,
    /// Record every permanent label in [`Solution::trace`].
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            bound: BoundSpec::OneTree,
            prune: PruneMode::Full,
            root: RootRule::Last,
            time_limit: None,
            memory_limit: Some(DEFAULT_MEMORY_LIMIT),
            tsp_cap: DEFAULT_TSP_CAP,
            trace: false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("terminal {0} is unreachable from the root")]
    Infeasible(Vertex),
    #[error("memory limit of {limit} bytes reached with {labels} labels")]
    MemoryLimit { labels: usize, limit: u64 },
    #[error("time limit of {0:?} reached")]
    TimeLimit(Duration),
    #[error("root rule `center` needs vertex coordinates")]
    CenterRuleNeedsCoordinates,
    #[error("root index {index} out of range for {k} terminals")]
    RootIndexOutOfRange { index: usize, k: usize },
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// A label made permanent, in order of selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PermanentEvent {
    pub vertex: Vertex,
    pub set: TerminalSet,
    pub cost: Cost,
    pub key: Cost,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub labels: u64,
    pub permanent: u64,
    pub heap_pushes: u64,
    pub stale_pops: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_set: u64,
    pub pruned_at_pop: u64,
    pub bound_evaluations: u64,
    pub merge_enumerations: u64,
    pub merge_scans: u64,
    pub upper_bound: Cost,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub cost: Cost,
    /// Edges of an optimum tree in the original instance.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Root terminal (original vertex id).
    pub root: Vertex,
    pub stats: SolveStats,
    /// Source terminals of the solved (zero-edge-free) instance; bit `i` of a
    /// trace set is `sources[i]`.
    pub sources: Vec<Vertex>,
    pub trace: Option<Vec<PermanentEvent>>,
    pub elapsed: Duration,
}

/// Position of the root in `instance.terminals()`.
pub fn choose_root(instance: &SteinerInstance, rule: RootRule) -> Result<usize, SolveError> {
    let k = instance.terminal_count();
    match rule {
        RootRule::Last => Ok(k - 1),
        RootRule::Index(index) if index < k => Ok(index),
        RootRule::Index(index) => Err(SolveError::RootIndexOutOfRange { index, k }),
        RootRule::Center => {
            let coords = instance.coordinates().ok_or(SolveError::CenterRuleNeedsCoordinates)?;
            let terms = instance.terminals();
            let dim = coords.dim();
            // compare k·|x - mean| = |k·x - sum| to stay in integers
            let sums: Vec<i128> = (0..dim)
                .map(|a| terms.iter().map(|&t| coords.of(t)[a] as i128).sum())
                .collect();
            let spread = |t: Vertex| -> i128 {
                (0..dim)
                    .map(|a| (k as i128 * coords.of(t)[a] as i128 - sums[a]).abs())
                    .sum()
            };
            Ok((0..k).min_by_key(|&i| (spread(terms[i]), terms[i])).unwrap())
        }
    }
}

pub fn solve(instance: &SteinerInstance, config: &SolverConfig) -> Result<Solution, SolveError> {
    let start = Instant::now();
    let root_pos = choose_root(instance, config.root)?;
    let root = instance.terminals()[root_pos];
    let reach = shortest_paths_from(instance.graph(), root).dist;
    if let Some(&t) = instance.terminals().iter().find(|&&t| reach[t as usize] == INFINITY) {
        return Err(SolveError::Infeasible(t));
    }

    let contraction = contract_zero_edges(instance);
    let reduced = &contraction.instance;
    let reduced_root = contraction.map_vertex(root);
    let mut order: Vec<Vertex> = reduced.terminals().iter().copied().filter(|&t| t != reduced_root).collect();
    let sources = order.clone();
    order.push(reduced_root);

    let (cost, reduced_edges, stats, trace) = if order.len() == 1 {
        (0, Vec::new(), SolveStats::default(), config.trace.then(Vec::new))
    } else {
        let mut run = Run::new(reduced.graph(), &order, config, start)?;
        let (cost, edges) = run.execute()?;
        run.stats.labels = run.store.len() as u64;
        run.stats.bound_evaluations = run.bound.evaluations();
        (cost, edges, run.stats, run.trace)
    };

    let edges = contraction.lift(instance, &reduced_edges);
    match validate_tree(instance, &edges) {
        Ok(c) if c == cost => {}
        Ok(c) => {
            return Err(SolveError::Internal(format!(
                "reconstructed tree costs {c}, label cost was {cost}"
            )))
        }
        Err(e) => return Err(SolveError::Internal(format!("reconstructed tree invalid: {e}"))),
    }
    Ok(Solution {
        cost,
        edges,
        root,
        stats,
        sources,
        trace,
        elapsed: start.elapsed(),
    })
}

type HeapEntry = Reverse<(Cost, Cost, Vertex, u64)>;

struct Run<'g> {
    graph: &'g Graph,
    config: &'g SolverConfig,
    start: Instant,
    k: usize,
    root: Vertex,
    sources: TerminalSet,
    all: TerminalSet,
    store: LabelStore,
    heap: BinaryHeap<HeapEntry>,
    bound: BoundOracle,
    tracker: PruneTracker,
    upper: Cost,
    stats: SolveStats,
    trace: Option<Vec<PermanentEvent>>,
    label_cap: usize,
}

impl<'g> Run<'g> {
    /// `terminals` lists the sources followed by the root.
    fn new(
        graph: &'g Graph,
        terminals: &[Vertex],
        config: &'g SolverConfig,
        start: Instant,
    ) -> Result<Self, SolveError> {
        let k = terminals.len();
        let root = terminals[k - 1];
        let dist = DistanceOracle::new(graph, terminals);
        let bound = BoundOracle::new(
            graph,
            dist,
            &config.bound,
            BoundOptions {
                tsp_cap: config.tsp_cap,
            },
        )?;
        let upper = match config.prune {
            PruneMode::Off => INFINITY,
            _ => {
                heuristic_upper_bound(graph, terminals, root)
                    .ok_or_else(|| SolveError::Internal("heuristic found no tree".into()))?
                    .0
            }
        };
        let label_cap = match config.memory_limit {
            Some(limit) => (limit / LABEL_BYTES as u64).min(usize::MAX as u64) as usize,
            None => usize::MAX,
        };
        Ok(Run {
            graph,
            config,
            start,
            k,
            root,
            sources: TerminalSet::full(k - 1),
            all: TerminalSet::full(k),
            store: LabelStore::new(graph.vertex_count()),
            heap: BinaryHeap::new(),
            bound,
            tracker: PruneTracker::new(),
            upper,
            stats: SolveStats {
                upper_bound: upper,
                ..SolveStats::default()
            },
            trace: config.trace.then(Vec::new),
            label_cap,
        })
    }

    fn check_time(&self) -> Result<(), SolveError> {
        match self.config.time_limit {
            Some(limit) if self.start.elapsed() > limit => Err(SolveError::TimeLimit(limit)),
            _ => Ok(()),
        }
    }

    /// `2·L(v, T \ I)`.
    fn bound2(&mut self, v: Vertex, set: TerminalSet) -> Cost {
        self.bound.lower_bound2(v, self.all.difference(set))
    }

    /// Prune checks for a label about to be created or selected. Returns the
    /// doubled key if the label survives.
    fn admit(&mut self, v: Vertex, set: TerminalSet, cost: Cost) -> Option<Cost> {
        let b2 = self.bound2(v, set);
        let key = cost::add(cost::add(cost, cost), b2);
        if self.config.prune != PruneMode::Off && self.upper != INFINITY && key > 2 * self.upper {
            self.stats.pruned_by_bound += 1;
            return None;
        }
        if self.config.prune == PruneMode::Full && cost > self.tracker.upper(set) {
            self.stats.pruned_by_set += 1;
            return None;
        }
        Some(key)
    }

    /// Offers `cost` for `(v, set)`; stores and queues it if it improves a
    /// non-permanent label and passes pruning.
    fn offer(&mut self, v: Vertex, set: TerminalSet, cost: Cost, back: Back) -> Result<(), SolveError> {
        if let Some(l) = self.store.get(v, set) {
            if l.permanent || cost >= l.cost {
                return Ok(());
            }
        }
        let Some(key) = self.admit(v, set, cost) else {
            return Ok(());
        };
        self.store.set(v, set, cost, back);
        if self.store.len() > self.label_cap {
            return Err(SolveError::MemoryLimit {
                labels: self.store.len(),
                limit: self.config.memory_limit.unwrap_or(u64::MAX),
            });
        }
        self.heap.push(Reverse((key, cost, v, set.bits())));
        self.stats.heap_pushes += 1;
        Ok(())
    }

    /// Pops until a live label is found and made permanent.
    fn select_next(&mut self) -> Result<Option<(Vertex, TerminalSet, Cost)>, SolveError> {
        while let Some(Reverse((key, cost, v, bits))) = self.heap.pop() {
            let set = TerminalSet(bits);
            let label = self.store.get(v, set).expect("queued labels are stored");
            if label.permanent || label.cost != cost {
                self.stats.stale_pops += 1;
                continue;
            }
            // bounds may have tightened since the label was queued; the label
            // keeps its cost, so anything no cheaper stays out as well
            if self.config.prune == PruneMode::Full && cost > self.tracker.upper(set) {
                self.stats.pruned_at_pop += 1;
                continue;
            }
            self.store.get_mut(v, set).unwrap().permanent = true;
            self.stats.permanent += 1;
            if let Some(t) = self.trace.as_mut() {
                t.push(PermanentEvent {
                    vertex: v,
                    set,
                    cost,
                    key,
                });
            }
            return Ok(Some((v, set, cost)));
        }
        Ok(None)
    }

    fn relax_edges(&mut self, v: Vertex, set: TerminalSet, cost: Cost) -> Result<(), SolveError> {
        let graph = self.graph;
        for &(w, c) in graph.neighbors(v) {
            self.offer(w, set, cost::add(cost, c), Back::Edge(v))?;
        }
        Ok(())
    }

    fn merge_labels(&mut self, v: Vertex, set: TerminalSet, cost: Cost) -> Result<(), SolveError> {
        let free = self.sources.difference(set);
        if free.is_empty() {
            return Ok(());
        }
        let existing = self.store.at(v).len();
        let enumerate = free.len() < 63 && (1u64 << free.len()) - 1 <= existing as u64;
        let mut partners: Vec<(TerminalSet, Cost)> = Vec::new();
        if enumerate {
            self.stats.merge_enumerations += 1;
            for j in free.subsets() {
                if let Some(l) = self.store.get(v, j) {
                    if l.permanent {
                        partners.push((j, l.cost));
                    }
                }
            }
        } else {
            self.stats.merge_scans += 1;
            partners.extend(
                self.store
                    .at(v)
                    .iter()
                    .filter(|l| l.permanent && l.set.is_disjoint(set) && !l.set.is_empty())
                    .map(|l| (l.set, l.cost)),
            );
        }
        for (j, cj) in partners {
            if self.config.prune == PruneMode::Full {
                self.tracker.on_merge(set, j);
            }
            self.offer(v, set.union(j), cost::add(cost, cj), Back::Merge(set))?;
        }
        Ok(())
    }

    fn execute(&mut self) -> Result<(Cost, Vec<(Vertex, Vertex)>), SolveError> {
        let n = self.graph.vertex_count();
        let cap = (n as u128) << (self.k - 1);
        for i in 0..self.k - 1 {
            let t = self.bound.distances().terminal(i);
            self.offer(t, TerminalSet::singleton(i), 0, Back::Leaf)?;
        }
        let target = (self.root, self.sources);
        let mut iterations: u128 = 0;
        loop {
            if iterations.is_multiple_of(1024) {
                self.check_time()?;
            }
            let Some((v, set, cost)) = self.select_next()? else {
                return Err(SolveError::Internal(
                    "queue exhausted before the root label became permanent".into(),
                ));
            };
            iterations += 1;
            if iterations > cap {
                return Err(SolveError::Internal(format!("more than n·2^(k-1) = {cap} permanent labels")));
            }
            if (v, set) == target {
                return Ok((cost, self.backtrack(v, set)));
            }
            if self.config.prune == PruneMode::Full {
                let dist = self.bound.distances();
                self.tracker.on_permanent(dist, self.all, v, set, cost);
            }
            self.relax_edges(v, set, cost)?;
            self.merge_labels(v, set, cost)?;
        }
    }

    /// Edge set of the tree behind a permanent label.
    fn backtrack(&self, v: Vertex, set: TerminalSet) -> Vec<(Vertex, Vertex)> {
        let mut edges = Vec::new();
        let mut stack = vec![(v, set)];
        while let Some((v, set)) = stack.pop() {
            let label = self.store.get(v, set).expect("backtrack reaches stored labels");
            debug_assert!(label.permanent);
            match label.back {
                Back::Leaf => {}
                Back::Edge(w) => {
                    edges.push((w, v));
                    stack.push((w, set));
                }
                Back::Merge(part) => {
                    stack.push((v, part));
                    stack.push((v, set.difference(part)));
                }
            }
        }
        edges
    }
}

#[cfg(test)]
mod tests;
