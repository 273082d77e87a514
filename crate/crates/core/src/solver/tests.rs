use super::*;
use crate::baseline::{smt_subset, solve_baseline};
use crate::graph::Edge;
use crate::instance::Coordinates;
use crate::random::{random_instance, RandomParams};

fn inst(n: usize, edges: &[(Vertex, Vertex, Cost)], terminals: Vec<Vertex>) -> SteinerInstance {
    let g = Graph::from_edges(n, edges.iter().map(|&(u, v, cost)| Edge { u, v, cost })).unwrap();
    SteinerInstance::new("t", g, terminals).unwrap()
}

fn config(bound: &str, prune: PruneMode) -> SolverConfig {
    SolverConfig {
        bound: bound.parse().unwrap(),
        prune,
        trace: true,
        ..SolverConfig::default()
    }
}

const BOUNDS: [&str; 6] = ["zero", "jterm:2", "onetree", "tsp", "jterm:3", "max(jterm:2,onetree)"];

/// Star with center 0 and spokes 3, 4, 5 to terminals 1, 2, 3; the outer
/// ring is more expensive.
fn star() -> SteinerInstance {
    inst(
        4,
        &[(0, 1, 3), (0, 2, 4), (0, 3, 5), (1, 2, 8), (2, 3, 10), (1, 3, 9)],
        vec![1, 2, 3],
    )
}

#[test]
fn single_terminal() {
    let i = inst(2, &[(0, 1, 4)], vec![1]);
    let s = solve(&i, &SolverConfig::default()).unwrap();
    assert_eq!(s.cost, 0);
    assert!(s.edges.is_empty());
}

#[test]
fn two_terminals_is_a_shortest_path() {
    let i = inst(3, &[(0, 1, 2), (1, 2, 3), (0, 2, 9)], vec![0, 2]);
    for b in BOUNDS {
        for p in PruneMode::ALL {
            let s = solve(&i, &config(b, p)).unwrap();
            assert_eq!(s.cost, 5);
            assert_eq!(validate_tree(&i, &s.edges), Ok(5));
        }
    }
    let s = solve(&i, &config("onetree", PruneMode::Off)).unwrap();
    let first = s.trace.as_ref().unwrap()[0];
    assert_eq!((first.vertex, first.set, first.cost), (0, TerminalSet::singleton(0), 0));
    assert_eq!(first.key, 10);
    let last = *s.trace.as_ref().unwrap().last().unwrap();
    assert_eq!((last.vertex, last.set), (2, TerminalSet::singleton(0)));
}

#[test]
fn star_merges_at_the_center() {
    let i = star();
    for b in BOUNDS {
        for p in PruneMode::ALL {
            let s = solve(&i, &config(b, p)).unwrap();
            assert_eq!(s.cost, 12, "{b} {p}");
            let mut e = s.edges.clone();
            e.sort_unstable();
            assert_eq!(e, vec![(0, 1), (0, 2), (0, 3)]);
        }
    }
    let s = solve(&i, &config("zero", PruneMode::Off)).unwrap();
    let center = s
        .trace
        .unwrap()
        .into_iter()
        .find(|e| e.vertex == 0 && e.set == TerminalSet::full(2))
        .unwrap();
    assert_eq!(center.cost, 7);
}

#[test]
fn heuristic_matches_on_the_star() {
    let i = star();
    assert_eq!(heuristic_upper_bound(i.graph(), i.terminals(), 3).unwrap().0, 12);
    let s = solve(&i, &SolverConfig::default()).unwrap();
    assert_eq!(s.stats.upper_bound, 12);
}

#[test]
fn random_instances_match_the_baseline() {
    let p = RandomParams::default();
    for seed in 0..60 {
        let i = random_instance(seed, &p);
        let want = solve_baseline(&i).unwrap().cost;
        for b in ["zero", "onetree", "max(jterm:2,onetree)", "tsp"] {
            for pm in PruneMode::ALL {
                let s = solve(&i, &config(b, pm)).unwrap();
                assert_eq!(s.cost, want, "seed {seed} {b} {pm}");
                assert_eq!(validate_tree(&i, &s.edges), Ok(want));
                let cap = (i.vertex_count() as u64) << (i.terminal_count() - 1);
                assert!(s.stats.permanent <= cap);
            }
        }
    }
}

#[test]
fn zero_cost_edges_are_contracted() {
    let p = RandomParams {
        zero_cost_rate: 0.15,
        ..RandomParams::default()
    };
    for seed in 0..60 {
        let i = random_instance(500 + seed, &p);
        let want = solve_baseline(&i).unwrap().cost;
        for pm in PruneMode::ALL {
            let s = solve(&i, &config("max(jterm:2,onetree)", pm)).unwrap();
            assert_eq!(s.cost, want, "seed {seed}");
            assert_eq!(validate_tree(&i, &s.edges), Ok(want));
        }
    }
}

#[test]
fn permanent_labels_are_optimal() {
    let p = RandomParams {
        max_n: 15,
        max_m: 30,
        max_k: 5,
        ..RandomParams::default()
    };
    for seed in 0..25 {
        let i = random_instance(2000 + seed, &p);
        for b in ["zero", "onetree", "jterm:2"] {
            let s = solve(&i, &config(b, PruneMode::Off)).unwrap();
            for e in s.trace.unwrap() {
                let mut x: Vec<Vertex> = e.set.iter().map(|t| s.sources[t]).collect();
                x.push(e.vertex);
                assert_eq!(e.cost, smt_subset(i.graph(), &x).unwrap(), "seed {seed} {b} {e:?}");
            }
        }
    }
}

#[test]
fn popped_keys_never_decrease() {
    for seed in 0..40 {
        let i = random_instance(3000 + seed, &RandomParams::default());
        for b in BOUNDS {
            for pm in PruneMode::ALL {
                let s = solve(&i, &config(b, pm)).unwrap();
                let trace = s.trace.unwrap();
                for w in trace.windows(2) {
                    assert!(w[0].key <= w[1].key, "seed {seed} {b} {pm}: {:?}", w);
                }
                if b == "zero" {
                    assert!(trace.windows(2).all(|w| w[0].cost <= w[1].cost));
                }
            }
        }
    }
}

#[test]
fn root_choice_does_not_change_the_optimum() {
    let p = RandomParams {
        max_k: 6,
        ..RandomParams::default()
    };
    for seed in 0..30 {
        let i = random_instance(4000 + seed, &p);
        let want = solve_baseline(&i).unwrap().cost;
        for r in 0..i.terminal_count() {
            for pm in [PruneMode::Off, PruneMode::Full] {
                let c = SolverConfig {
                    root: RootRule::Index(r),
                    prune: pm,
                    ..SolverConfig::default()
                };
                let s = solve(&i, &c).unwrap();
                assert_eq!(s.cost, want);
                assert_eq!(s.root, i.terminals()[r]);
            }
        }
    }
}

/// Two tight clusters far apart. Labels that span one cluster and reach far
/// into the other side cost more than the cheap cluster trees, so set-based
/// pruning removes them.
fn two_clusters() -> SteinerInstance {
    let mut edges = Vec::new();
    let w = 6u32;
    // two 6x6 grids with unit edges, joined by a long path
    for c in 0..2u32 {
        let base = c * w * w;
        for r in 0..w {
            for q in 0..w {
                let v = base + r * w + q;
                if q + 1 < w {
                    edges.push((v, v + 1, 1));
                }
                if r + 1 < w {
                    edges.push((v, v + w, 1));
                }
            }
        }
    }
    let bridge_start = 2 * w * w;
    let len = 8;
    let mut prev = w - 1;
    for i in 0..len {
        edges.push((prev, bridge_start + i, 3));
        prev = bridge_start + i;
    }
    edges.push((prev, w * w, 3));
    let terminals = vec![0, 5, 30, 35, 14, 36, 41, 66, 71, 57];
    inst((2 * w * w + len) as usize, &edges, terminals)
}

#[test]
fn set_pruning_cuts_labels_on_two_clusters() {
    let i = two_clusters();
    let want = solve_baseline(&i).unwrap().cost;
    let off = solve(&i, &config("onetree", PruneMode::Off)).unwrap();
    let bound = solve(&i, &config("onetree", PruneMode::Bound)).unwrap();
    let full = solve(&i, &config("onetree", PruneMode::Full)).unwrap();
    assert_eq!((off.cost, bound.cost, full.cost), (want, want, want));
    assert!(full.stats.pruned_by_set > 0);
    assert!(full.stats.labels < bound.stats.labels);
    assert!(bound.stats.labels <= off.stats.labels);
    assert!(full.stats.permanent <= off.stats.permanent);
}

#[test]
fn errors() {
    let disconnected = inst(4, &[(0, 1, 1), (2, 3, 1)], vec![0, 3]);
    assert_eq!(solve(&disconnected, &SolverConfig::default()).unwrap_err(), SolveError::Infeasible(0));
    let i = star();
    let c = SolverConfig {
        root: RootRule::Center,
        ..SolverConfig::default()
    };
    assert_eq!(solve(&i, &c).unwrap_err(), SolveError::CenterRuleNeedsCoordinates);
    let c = SolverConfig {
        root: RootRule::Index(3),
        ..SolverConfig::default()
    };
    assert_eq!(solve(&i, &c).unwrap_err(), SolveError::RootIndexOutOfRange { index: 3, k: 3 });
    let big = random_instance(7, &RandomParams { min_k: 7, ..RandomParams::default() });
    let c = SolverConfig {
        memory_limit: Some(10 * LABEL_BYTES as u64),
        prune: PruneMode::Off,
        ..SolverConfig::default()
    };
    assert!(matches!(solve(&big, &c).unwrap_err(), SolveError::MemoryLimit { .. }));
    let c = SolverConfig {
        time_limit: Some(Duration::ZERO),
        ..SolverConfig::default()
    };
    assert!(matches!(solve(&big, &c).unwrap_err(), SolveError::TimeLimit(_)));
    let c = SolverConfig {
        bound: BoundSpec::Tsp,
        tsp_cap: 2,
        ..SolverConfig::default()
    };
    assert!(matches!(solve(&big, &c).unwrap_err(), SolveError::Bound(_)));
}

#[test]
fn center_root_rule() {
    let i = inst(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)], vec![0, 1, 2, 3])
        .with_coordinates(Coordinates::new(2, vec![0, 0, 4, 0, 5, 0, 10, 0]))
        .unwrap();
    // mean x = 4.75: terminal 2 at 5 is closest
    assert_eq!(choose_root(&i, RootRule::Center), Ok(2));
    let tied = inst(2, &[(0, 1, 1)], vec![1, 0])
        .with_coordinates(Coordinates::new(2, vec![0, 0, 2, 2]))
        .unwrap();
    assert_eq!(choose_root(&tied, RootRule::Center), Ok(1));
    assert_eq!(choose_root(&tied, RootRule::Last), Ok(1));
    assert_eq!(choose_root(&tied, RootRule::Index(0)), Ok(0));
}

#[test]
fn rule_and_mode_strings() {
    for s in ["last", "center", "index:4"] {
        assert_eq!(s.parse::<RootRule>().unwrap().to_string(), s);
    }
    assert!("index:".parse::<RootRule>().is_err());
    assert!("first".parse::<RootRule>().is_err());
    for m in PruneMode::ALL {
        assert_eq!(m.to_string().parse::<PruneMode>(), Ok(m));
    }
}
