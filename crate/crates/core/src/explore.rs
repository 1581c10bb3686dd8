//! Breadth-first exploration with parent links, shared by the product
//! constructions that need shortest witnesses.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

pub(crate) struct Explorer<N, L> {
    nodes: Vec<N>,
    parents: Vec<Option<(usize, L)>>,
    index: HashMap<N, usize>,
    budget: usize,
}

impl<N: Clone + Eq + Hash, L: Clone> Explorer<N, L> {
    pub fn new(budget: usize) -> Self {
        Explorer {
            nodes: Vec::new(),
            parents: Vec::new(),
            index: HashMap::new(),
            budget,
        }
    }

    /// Registers `node`; returns its id and whether it is new.
    pub fn visit(&mut self, node: N, parent: Option<(usize, L)>) -> Result<(usize, bool)> {
        if let Some(&id) = self.index.get(&node) {
            return Ok((id, false));
        }
        if self.nodes.len() >= self.budget {
            return Err(Error::Budget { budget: self.budget });
        }
        let id = self.nodes.len();
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        self.parents.push(parent);
        Ok((id, true))
    }

    pub fn node(&self, id: usize) -> &N {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Labels along the path from the root to `id`.
    pub fn path(&self, mut id: usize) -> Vec<L> {
        let mut labels = Vec::new();
        while let Some((p, l)) = &self.parents[id] {
            labels.push(l.clone());
            id = *p;
        }
        labels.reverse();
        labels
    }
}

pub(crate) const UNBOUNDED: usize = usize::MAX;
