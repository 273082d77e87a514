use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Terminal sets are 64-bit masks and the solver reserves no spare bit, but
/// instances are limited to fewer than 64 terminals.
pub const MAX_TERMINALS: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance has no terminals")]
    NoTerminals,
    #[error("terminal {0} is not a vertex of the graph")]
    TerminalOutOfRange(Vertex),
    #[error("terminal {0} listed twice")]
    DuplicateTerminal(Vertex),
    #[error("{0} terminals, at most {MAX_TERMINALS} supported")]
    TooManyTerminals(usize),
    #[error("coordinate table has {found} values, expected {expected}")]
    CoordinateCount { expected: usize, found: usize },
}

/// Integer coordinates for every vertex, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    dim: usize,
    values: Vec<i64>,
}

impl Coordinates {
    pub fn new(dim: usize, values: Vec<i64>) -> Self {
        assert!(dim > 0);
        assert_eq!(values.len() % dim, 0);
        Coordinates { dim, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn of(&self, v: Vertex) -> &[i64] {
        let s = v as usize * self.dim;
        &self.values[s..s + self.dim]
    }
}

/// A graph, an ordered terminal list and optional vertex coordinates.
///
/// Terminal order is significant: the default root is the last terminal.
#[derive(Clone, Debug)]
pub struct SteinerInstance {
    pub name: String,
    graph: Graph,
    terminals: Vec<Vertex>,
    coordinates: Option<Coordinates>,
}

impl SteinerInstance {
    pub fn new(
        name: impl Into<String>,
        graph: Graph,
        terminals: Vec<Vertex>,
    ) -> Result<Self, InstanceError> {
        if terminals.is_empty() {
            return Err(InstanceError::NoTerminals);
        }
        if terminals.len() > MAX_TERMINALS {
            return Err(InstanceError::TooManyTerminals(terminals.len()));
        }
        let mut seen = vec![false; graph.vertex_count()];
        for &t in &terminals {
            let slot = seen
                .get_mut(t as usize)
                .ok_or(InstanceError::TerminalOutOfRange(t))?;
            if *slot {
                return Err(InstanceError::DuplicateTerminal(t));
            }
            *slot = true;
        }
        Ok(SteinerInstance {
            name: name.into(),
            graph,
            terminals,
            coordinates: None,
        })
    }

    pub fn with_coordinates(mut self, coordinates: Coordinates) -> Result<Self, InstanceError> {
        if coordinates.len() != self.graph.vertex_count() {
            return Err(InstanceError::CoordinateCount {
                expected: self.graph.vertex_count() * coordinates.dim(),
                found: coordinates.values.len(),
            });
        }
        self.coordinates = Some(coordinates);
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn terminals(&self) -> &[Vertex] {
        &self.terminals
    }

    pub fn coordinates(&self) -> Option<&Coordinates> {
        self.coordinates.as_ref()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    #[inline]
    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_terminal(&self, v: Vertex) -> bool {
        self.terminals.contains(&v)
    }
}
