//! Seeded random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, Graph, Vertex};
use crate::instance::SteinerInstance;

#[derive(Clone, Copy, Debug)]
pub struct RandomParams {
    pub min_n: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub min_k: usize,
    pub max_k: usize,
    pub max_cost: u64,
    /// Probability that an edge costs 0.
    pub zero_cost_rate: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            min_n: 4,
            max_n: 25,
            max_m: 60,
            min_k: 2,
            max_k: 7,
            max_cost: 20,
            zero_cost_rate: 0.0,
        }
    }
}

/// A connected random instance: a random spanning tree plus extra edges,
/// costs uniform in `1..=max_cost`, terminals a random vertex sample.
pub fn random_instance(seed: u64, p: &RandomParams) -> SteinerInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(p.min_n.max(p.min_k)..=p.max_n);
    let k = rng.gen_range(p.min_k..=p.max_k.min(n));
    let max_m = p.max_m.max(n - 1).min(n * (n - 1) / 2);
    let m = rng.gen_range(n - 1..=max_m);
    let cost = |rng: &mut ChaCha8Rng| {
        if p.zero_cost_rate > 0.0 && rng.gen_bool(p.zero_cost_rate) {
            0
        } else {
            rng.gen_range(1..=p.max_cost)
        }
    };
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(m);
    let mut present = std::collections::HashSet::new();
    for i in 1..n {
        let u = order[rng.gen_range(0..i)];
        let v = order[i];
        present.insert((u.min(v), u.max(v)));
        edges.push(Edge { u, v, cost: cost(&mut rng) });
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n as Vertex);
        let v = rng.gen_range(0..n as Vertex);
        if u != v && present.insert((u.min(v), u.max(v))) {
            edges.push(Edge { u, v, cost: cost(&mut rng) });
        }
    }
    let graph = Graph::from_edges(n, edges).expect("generated edges are valid");
    let mut terminals: Vec<Vertex> = (0..n as Vertex).collect();
    terminals.shuffle(&mut rng);
    terminals.truncate(k);
    SteinerInstance::new(format!("random-{seed}"), graph, terminals).expect("valid terminals")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_parameters_and_is_deterministic() {
        let p = RandomParams::default();
        for seed in 0..200 {
            let a = random_instance(seed, &p);
            let b = random_instance(seed, &p);
            assert_eq!(a.graph().edges(), b.graph().edges());
            assert_eq!(a.terminals(), b.terminals());
            assert!(a.vertex_count() <= 25 && a.edge_count() <= 60);
            assert!((2..=7).contains(&a.terminal_count()));
            assert!(a.graph().edges().iter().all(|e| (1..=20).contains(&e.cost)));
            let d = crate::graph::shortest_paths_from(a.graph(), 0).dist;
            assert!(d.iter().all(|&x| x != crate::cost::INFINITY));
        }
    }
}
