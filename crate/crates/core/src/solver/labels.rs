use std::collections::HashMap;

use crate::cost::Cost;
use crate::graph::Vertex;
use crate::terminal_set::TerminalSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Back {
    /// A single source terminal sitting at itself.
    Leaf,
    /// Reached over the edge from this vertex, same terminal set.
    Edge(Vertex),
    /// Union of the labels for this subset and its complement in the set.
    Merge(TerminalSet),
}

#[derive(Clone, Copy, Debug)]
pub struct Label {
    pub set: TerminalSet,
    pub cost: Cost,
    pub back: Back,
    pub permanent: bool,
}

#[derive(Clone, Debug, Default)]
struct VertexLabels {
    labels: Vec<Label>,
    index: HashMap<u64, u32>,
}

/// Labels per vertex: an array for linear traversal and a hash index by set.
#[derive(Clone, Debug)]
pub struct LabelStore {
    per_vertex: Vec<VertexLabels>,
    total: usize,
}

/// Approximate bytes per stored label, used for the memory limit.
pub const LABEL_BYTES: usize = std::mem::size_of::<Label>() + 2 * std::mem::size_of::<u64>() + 32;

impl LabelStore {
    pub fn new(n: usize) -> Self {
        LabelStore {
            per_vertex: vec![VertexLabels::default(); n],
            total: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    #[inline]
    pub fn get(&self, v: Vertex, set: TerminalSet) -> Option<&Label> {
        let slot = &self.per_vertex[v as usize];
        slot.index.get(&set.bits()).map(|&i| &slot.labels[i as usize])
    }

    #[inline]
    pub fn get_mut(&mut self, v: Vertex, set: TerminalSet) -> Option<&mut Label> {
        let slot = &mut self.per_vertex[v as usize];
        match slot.index.get(&set.bits()) {
            Some(&i) => Some(&mut slot.labels[i as usize]),
            None => None,
        }
    }

    /// Sets cost and backtrack data, creating the label if needed.
    pub fn set(&mut self, v: Vertex, set: TerminalSet, cost: Cost, back: Back) {
        let slot = &mut self.per_vertex[v as usize];
        match slot.index.get(&set.bits()) {
            Some(&i) => {
                let l = &mut slot.labels[i as usize];
                debug_assert!(!l.permanent && cost < l.cost);
                l.cost = cost;
                l.back = back;
            }
            None => {
                slot.index.insert(set.bits(), slot.labels.len() as u32);
                slot.labels.push(Label {
                    set,
                    cost,
                    back,
                    permanent: false,
                });
                self.total += 1;
            }
        }
    }

    pub fn at(&self, v: Vertex) -> &[Label] {
        &self.per_vertex[v as usize].labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_and_index_agree() {
        let mut s = LabelStore::new(3);
        s.set(1, TerminalSet(0b01), 5, Back::Leaf);
        s.set(1, TerminalSet(0b11), 9, Back::Edge(0));
        s.set(1, TerminalSet(0b11), 7, Back::Merge(TerminalSet(0b01)));
        assert_eq!(s.len(), 2);
        assert_eq!(s.at(1).len(), 2);
        for l in s.at(1) {
            assert_eq!(s.get(1, l.set).unwrap().cost, l.cost);
        }
        assert_eq!(s.get(1, TerminalSet(0b11)).unwrap().back, Back::Merge(TerminalSet(0b01)));
        assert!(s.get(0, TerminalSet(0b01)).is_none());
        s.get_mut(1, TerminalSet(0b01)).unwrap().permanent = true;
        assert!(s.at(1)[0].permanent);
    }
}
