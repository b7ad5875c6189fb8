use std::cell::Cell;

use super::AgentView;
use crate::graph::Port;

/// Pass-through view that tallies every call and flags contract breaches:
/// moving through a port the current node does not have, and moving on after
/// the treasure has been reached.
#[derive(Debug)]
pub struct AuditedView<V> {
    inner: V,
    reads: Cell<u64>,
    moves: u64,
    checkpoints: u64,
    violations: Vec<String>,
}

impl<V: AgentView> AuditedView<V> {
    pub fn new(inner: V) -> Self {
        Self {
            inner,
            reads: Cell::new(0),
            moves: 0,
            checkpoints: 0,
            violations: Vec::new(),
        }
    }

    pub fn inner(&self) -> &V {
        &self.inner
    }

    pub fn into_inner(self) -> V {
        self.inner
    }

    /// Calls to the three observation methods.
    pub fn reads(&self) -> u64 {
        self.reads.get()
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }

    pub fn checkpoints(&self) -> u64 {
        self.checkpoints
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    fn tally(&self) {
        self.reads.set(self.reads.get() + 1);
    }
}

impl<V: AgentView> AgentView for AuditedView<V> {
    fn current_degree(&self) -> usize {
        self.tally();
        self.inner.current_degree()
    }

    fn pebble_here(&self) -> bool {
        self.tally();
        self.inner.pebble_here()
    }

    fn treasure_here(&self) -> bool {
        self.tally();
        self.inner.treasure_here()
    }

    fn move_via(&mut self, port: Port) -> Port {
        self.moves += 1;
        if self.inner.treasure_here() {
            self.violations.push(format!("move {} after the treasure was reached", self.moves));
        }
        let degree = self.inner.current_degree();
        if port >= degree {
            self.violations.push(format!("move {}: port {port} at a degree-{degree} node", self.moves));
            // stay put; the impossible arrival port makes any later use obvious
            return usize::MAX;
        }
        self.inner.move_via(port)
    }

    fn checkpoint(&mut self) {
        self.checkpoints += 1;
        self.inner.checkpoint();
    }
}
