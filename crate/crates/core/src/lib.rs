//! Exact Steiner tree solver for edge-weighted undirected graphs.
//!
//! The solver is a label-setting dynamic program over pairs of a vertex and a
//! subset of source terminals, driven by a future-cost estimate in the same
//! way that A* drives Dijkstra's algorithm. Labels that provably cannot be
//! part of an optimum tree are pruned.
//!
//! Module map:
//!
//! * [`graph`]: graphs, shortest paths, distance oracles, zero-edge
//!   contraction and tree validation.
//! * [`io`]: STP instance files and solution records.
//! * [`hanan`]: Hanan grids for d-dimensional rectilinear point sets.
//! * [`bounds`]: valid lower bounds (zero, j-terminal, 1-tree, TSP, max).
//! * [`solver`]: the labeling algorithm with pruning and backtracking.
//! * [`baseline`]: a separate subset dynamic program used as ground truth.

pub mod baseline;
pub mod bounds;
pub mod cost;
pub mod graph;
pub mod hanan;
pub mod instance;
pub mod io;
pub mod random;
pub mod solver;
pub mod terminal_set;

pub use bounds::{BoundOracle, BoundSpec};
pub use cost::{Cost, INFINITY};
pub use graph::{DistanceOracle, Graph};
pub use instance::SteinerInstance;
pub use solver::{solve, PruneMode, RootRule, Solution, SolveError, SolverConfig};
pub use terminal_set::TerminalSet;
