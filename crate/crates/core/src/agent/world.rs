use super::AgentView;
use crate::graph::{Instance, NodeId, PebbleConfig, Port, PortLabeledGraph};

/// Simulated world: a graph with pebbles, a treasure and one agent.
///
/// Keeps its own traversal count and the node of every checkpoint so that the
/// harness can audit the agent without trusting its trace.
#[derive(Debug, Clone)]
pub struct World<'a> {
    graph: &'a PortLabeledGraph,
    pebbles: &'a PebbleConfig,
    treasure: NodeId,
    position: NodeId,
    traversals: u64,
    checkpoints: Vec<NodeId>,
}

impl<'a> World<'a> {
    /// Places the agent on the instance's start node.
    pub fn new(instance: &'a Instance, pebbles: &'a PebbleConfig) -> Self {
        Self {
            graph: &instance.graph,
            pebbles,
            treasure: instance.treasure,
            position: instance.start,
            traversals: 0,
            checkpoints: Vec::new(),
        }
    }

    pub fn position(&self) -> NodeId {
        self.position
    }

    pub fn traversals(&self) -> u64 {
        self.traversals
    }

    pub fn checkpoints(&self) -> &[NodeId] {
        &self.checkpoints
    }
}

impl AgentView for World<'_> {
    fn current_degree(&self) -> usize {
        self.graph.degree(self.position)
    }

    fn pebble_here(&self) -> bool {
        self.pebbles.has(self.position)
    }

    fn treasure_here(&self) -> bool {
        self.position == self.treasure
    }

    /// # Panics
    /// If `port` is not a port of the current node.
    fn move_via(&mut self, port: Port) -> Port {
        let (v, q) = self
            .graph
            .neighbor_via_port(self.position, port)
            .unwrap_or_else(|e| panic!("agent broke the view contract: {e}"));
        self.position = v;
        self.traversals += 1;
        q
    }

    fn checkpoint(&mut self) {
        self.checkpoints.push(self.position);
    }
}
