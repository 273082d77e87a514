//! Hanan grids: reduce a rectilinear point set in any dimension to a graph
//! instance whose optimum equals the rectilinear Steiner minimal tree length.
//!
//! For each axis take the sorted distinct coordinate values. The grid vertices
//! are the Cartesian product, numbered row-major by rank (the first axis
//! varies slowest), and axis-neighbouring vertices are joined by an edge
//! whose cost is their coordinate difference.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::instance::{Coordinates, InstanceError, SteinerInstance};

pub const DEFAULT_GRID_CAP: u64 = 1 << 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HananError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("point set is empty")]
    NoPoints,
    #[error("point {index} has {found} coordinates, expected {dim}")]
    Arity { index: usize, dim: usize, found: usize },
    #[error("Hanan grid would have {vertices} vertices, cap is {cap}")]
    GridTooLarge { vertices: u128, cap: u64 },
    #[error("point file line {line}: {message}")]
    PointFile { line: usize, message: String },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<i64>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self, HananError> {
        if dim < 2 {
            return Err(HananError::Dimension(dim));
        }
        if points.is_empty() {
            return Err(HananError::NoPoints);
        }
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(HananError::Arity {
                index,
                dim,
                found: p.len(),
            });
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    /// Sorted distinct values on each axis.
    pub fn axis_values(&self) -> Vec<Vec<i64>> {
        (0..self.dim)
            .map(|a| {
                let mut vals: Vec<i64> = self.points.iter().map(|p| p[a]).collect();
                vals.sort_unstable();
                vals.dedup();
                vals
            })
            .collect()
    }
}

/// Vertex and edge counts of the grid with `c_i` values on axis `i`.
pub fn grid_counts(axis_sizes: &[usize]) -> (u128, u128) {
    let vertices: u128 = axis_sizes.iter().map(|&c| c as u128).product();
    let edges = axis_sizes
        .iter()
        .map(|&c| {
            if c == 0 {
                0
            } else {
                (c as u128 - 1) * (vertices / c as u128)
            }
        })
        .sum();
    (vertices, edges)
}

#[derive(Clone, Debug)]
pub struct HananGrid {
    pub instance: SteinerInstance,
    /// Grid vertex of every input point, duplicates included.
    pub point_vertex: Vec<Vertex>,
}

pub fn build_hanan_grid(
    name: &str,
    points: &PointSet,
    cap: u64,
) -> Result<HananGrid, HananError> {
    let axes = points.axis_values();
    let sizes: Vec<usize> = axes.iter().map(Vec::len).collect();
    let (vertices, _) = grid_counts(&sizes);
    if vertices > cap as u128 || vertices > u32::MAX as u128 {
        return Err(HananError::GridTooLarge { vertices, cap });
    }
    let n = vertices as usize;
    let d = points.dim();

    let mut stride = vec![1usize; d];
    for a in (0..d - 1).rev() {
        stride[a] = stride[a + 1] * sizes[a + 1];
    }

    let mut edges = Vec::new();
    let mut coords = Vec::with_capacity(n * d);
    let mut rank = vec![0usize; d];
    for v in 0..n {
        for a in 0..d {
            coords.push(axes[a][rank[a]]);
            if rank[a] + 1 < sizes[a] {
                edges.push(Edge {
                    u: v as Vertex,
                    v: (v + stride[a]) as Vertex,
                    cost: axes[a][rank[a] + 1].abs_diff(axes[a][rank[a]]),
                });
            }
        }
        // advance the mixed-radix counter, last axis fastest
        for a in (0..d).rev() {
            rank[a] += 1;
            if rank[a] < sizes[a] {
                break;
            }
            rank[a] = 0;
        }
    }

    let mut point_vertex = Vec::with_capacity(points.len());
    let mut terminals = Vec::new();
    let mut seen = vec![false; n];
    for p in points.points() {
        let v: usize = (0..d)
            .map(|a| stride[a] * axes[a].binary_search(&p[a]).expect("value on its axis"))
            .sum();
        point_vertex.push(v as Vertex);
        if !seen[v] {
            seen[v] = true;
            terminals.push(v as Vertex);
        }
    }

    let graph = Graph::from_simple_edges(n, edges);
    let instance = SteinerInstance::new(name, graph, terminals)?
        .with_coordinates(Coordinates::new(d, coords))?;
    Ok(HananGrid {
        instance,
        point_vertex,
    })
}

/// `k` points with coordinates drawn uniformly from `0..=coord_max`.
pub fn generate_random_points(d: usize, k: usize, coord_max: i64, seed: u64) -> PointSet {
    assert!(coord_max >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..k)
        .map(|_| (0..d).map(|_| rng.gen_range(0..=coord_max)).collect())
        .collect();
    PointSet {
        dim: d,
        points,
    }
}

/// Reads a point file: a line `d k` followed by `k` lines of `d` integers.
pub fn parse_points(text: &str) -> Result<PointSet, HananError> {
    let bad = |line: usize, message: &str| HananError::PointFile {
        line,
        message: message.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| bad(1, "missing `d k` header"))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| bad(hline, "header must be two nonnegative integers"))?;
    let [d, k] = head[..] else {
        return Err(bad(hline, "header must be `d k`"));
    };
    let mut points = Vec::with_capacity(k);
    for (line, body) in lines {
        if points.len() == k {
            return Err(bad(line, "more points than declared"));
        }
        let p: Vec<i64> = body
            .split_whitespace()
            .map(|t| crate::io::parse_scaled(t, 0, line))
            .collect::<Result<_, _>>()
            .map_err(|_| bad(line, "coordinates must be integers"))?;
        if p.len() != d {
            return Err(bad(line, &format!("expected {d} coordinates, found {}", p.len())));
        }
        points.push(p);
    }
    if points.len() != k {
        return Err(bad(hline, &format!("declared {k} points, found {}", points.len())));
    }
    PointSet::new(d, points)
}

pub fn write_points(points: &PointSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", points.dim, points.len());
    for p in &points.points {
        let line: Vec<String> = p.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
