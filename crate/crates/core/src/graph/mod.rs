//! Port-labeled anonymous graphs.
//!
//! Nodes carry simulator-internal ids so that the oracle and the harness can
//! talk about them; the agent never sees an id (see [`crate::agent::AgentView`]).
//! At a node of degree `d` the incident edges are numbered `0..d`, and every
//! edge therefore has one port number at each endpoint.

mod generate;
mod io;

pub use generate::{generate, GeneratorKind, HubPathParams};

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

pub type NodeId = usize;
pub type Port = usize;

const UNREACHED: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("port {port} out of range at node {node} (degree {degree})")]
    PortRange {
        node: NodeId,
        port: Port,
        degree: usize,
    },
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("node {to} is not reachable from node {from}")]
    Disconnected { from: NodeId, to: NodeId },
    #[error("invalid generator parameters: {0}")]
    Param(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An undirected, simple, port-labeled graph.
///
/// `ports[u][p] == (v, q)` means that port `p` at `u` leads to `v`, arriving
/// through port `q` at `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortLabeledGraph {
    ports: Vec<Vec<(NodeId, Port)>>,
}

impl PortLabeledGraph {
    /// Builds a graph from explicit half-edge pairs `(u, p, v, q)`, one per
    /// edge, and checks every structural invariant.
    pub fn from_edges(
        node_count: usize,
        edges: &[(NodeId, Port, NodeId, Port)],
    ) -> Result<Self, GraphError> {
        let mut slots: Vec<Vec<Option<(NodeId, Port)>>> = vec![Vec::new(); node_count];
        for &(u, p, v, q) in edges {
            for (node, port) in [(u, p), (v, q)] {
                if node >= node_count {
                    return Err(GraphError::UnknownNode(node));
                }
                let list = &mut slots[node];
                if list.len() <= port {
                    list.resize(port + 1, None);
                }
            }
            if u == v {
                return Err(GraphError::Malformed(format!("self-loop at node {u}")));
            }
            if slots[u][p].is_some() {
                return Err(GraphError::Malformed(format!("port {p} at node {u} used twice")));
            }
            if slots[v][q].is_some() {
                return Err(GraphError::Malformed(format!("port {q} at node {v} used twice")));
            }
            slots[u][p] = Some((v, q));
            slots[v][q] = Some((u, p));
        }
        let mut ports = Vec::with_capacity(node_count);
        for (u, list) in slots.into_iter().enumerate() {
            let mut out = Vec::with_capacity(list.len());
            for (p, slot) in list.into_iter().enumerate() {
                match slot {
                    Some(half) => out.push(half),
                    None => {
                        return Err(GraphError::Malformed(format!(
                            "node {u} has a gap at port {p}"
                        )))
                    }
                }
            }
            ports.push(out);
        }
        let graph = Self { ports };
        graph.check_simple()?;
        Ok(graph)
    }

    /// Builds a graph from neighbor lists; port `i` at `u` is the `i`-th entry
    /// of `neighbors[u]`. Used by the generators.
    pub(crate) fn from_neighbor_lists(neighbors: &[Vec<NodeId>]) -> Result<Self, GraphError> {
        let mut ports: Vec<Vec<(NodeId, Port)>> = neighbors
            .iter()
            .map(|list| vec![(UNREACHED, UNREACHED); list.len()])
            .collect();
        for (u, list) in neighbors.iter().enumerate() {
            for (p, &v) in list.iter().enumerate() {
                if v >= neighbors.len() {
                    return Err(GraphError::UnknownNode(v));
                }
                if u < v {
                    let q = neighbors[v].iter().position(|&x| x == u).ok_or_else(|| {
                        GraphError::Malformed(format!("edge {u}-{v} missing its reverse"))
                    })?;
                    ports[u][p] = (v, q);
                    ports[v][q] = (u, p);
                }
            }
        }
        if let Some((u, p)) = ports
            .iter()
            .enumerate()
            .find_map(|(u, l)| l.iter().position(|h| h.0 == UNREACHED).map(|p| (u, p)))
        {
            return Err(GraphError::Malformed(format!("port {p} at node {u} unmatched")));
        }
        let graph = Self { ports };
        graph.check_simple()?;
        Ok(graph)
    }

    fn check_simple(&self) -> Result<(), GraphError> {
        let mut seen = BTreeSet::new();
        for (u, list) in self.ports.iter().enumerate() {
            seen.clear();
            for &(v, _) in list {
                if v == u {
                    return Err(GraphError::Malformed(format!("self-loop at node {u}")));
                }
                if !seen.insert(v) {
                    return Err(GraphError::Malformed(format!("multi-edge between {u} and {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.ports.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ports.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.ports[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.ports.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The half-edge reached by leaving `u` through port `p`.
    pub fn neighbor_via_port(&self, u: NodeId, p: Port) -> Result<(NodeId, Port), GraphError> {
        let list = self.ports.get(u).ok_or(GraphError::UnknownNode(u))?;
        list.get(p).copied().ok_or(GraphError::PortRange {
            node: u,
            port: p,
            degree: list.len(),
        })
    }

    /// Neighbor `u(p)` without the port at the far end. Panics on a bad port.
    pub fn neighbor(&self, u: NodeId, p: Port) -> NodeId {
        self.ports[u][p].0
    }

    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.ports[u].iter().map(|&(v, _)| v)
    }

    /// The port at `u` leading to `v`, if they are adjacent.
    pub fn port_to(&self, u: NodeId, v: NodeId) -> Option<Port> {
        self.ports[u].iter().position(|&(x, _)| x == v)
    }

    /// Every edge once, as `(u, p, v, q)` with `u < v`, ordered by `(u, p)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, Port, NodeId, Port)> + '_ {
        self.ports.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .enumerate()
                .filter(move |(_, &(v, _))| u < v)
                .map(move |(p, &(v, q))| (u, p, v, q))
        })
    }

    /// BFS distances from `s`, truncated at `limit` hops. Unreached nodes get
    /// `usize::MAX`.
    pub fn distances_within(&self, s: NodeId, limit: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.node_count()];
        let mut queue = VecDeque::new();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if dist[u] == limit {
                continue;
            }
            for v in self.neighbors(u) {
                if dist[v] == UNREACHED {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distances(&self, s: NodeId) -> Vec<usize> {
        self.distances_within(s, UNREACHED)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() == 0 || self.distances(0).iter().all(|&d| d != UNREACHED)
    }
}

/// Layers `L_0, L_1, …` of the BFS from `s`: `L_i` holds the nodes at distance
/// exactly `i`, each layer sorted by node id.
pub fn bfs_layers(graph: &PortLabeledGraph, s: NodeId) -> Vec<Vec<NodeId>> {
    let dist = graph.distances(s);
    let depth = dist.iter().filter(|&&d| d != UNREACHED).max().copied().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth + 1];
    for (v, &d) in dist.iter().enumerate() {
        if d != UNREACHED {
            layers[d].push(v);
        }
    }
    layers
}

/// A shortest `s`–`t` path and its outgoing ports. Among all shortest paths
/// the one with the lexicographically smallest port sequence is returned.
pub fn shortest_path_with_ports(
    graph: &PortLabeledGraph,
    s: NodeId,
    t: NodeId,
) -> Result<(Vec<NodeId>, Vec<Port>), GraphError> {
    for x in [s, t] {
        if x >= graph.node_count() {
            return Err(GraphError::UnknownNode(x));
        }
    }
    let to_target = graph.distances(t);
    if to_target[s] == UNREACHED {
        return Err(GraphError::Disconnected { from: s, to: t });
    }
    let mut nodes = vec![s];
    let mut ports = Vec::with_capacity(to_target[s]);
    let mut u = s;
    while u != t {
        let want = to_target[u] - 1;
        let p = (0..graph.degree(u))
            .find(|&p| to_target[graph.neighbor(u, p)] == want)
            .expect("a BFS predecessor always exists");
        u = graph.neighbor(u, p);
        nodes.push(u);
        ports.push(p);
    }
    Ok((nodes, ports))
}

/// Lexicographically smallest port sequence of length `dist(from, to)`.
pub fn lex_shortest_ports(
    graph: &PortLabeledGraph,
    from: NodeId,
    to: NodeId,
) -> Result<Vec<Port>, GraphError> {
    shortest_path_with_ports(graph, from, to).map(|(_, ports)| ports)
}

/// A treasure-hunt instance: a connected graph, a start node and a treasure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: PortLabeledGraph,
    pub start: NodeId,
    pub treasure: NodeId,
}

impl Instance {
    pub fn new(graph: PortLabeledGraph, start: NodeId, treasure: NodeId) -> Result<Self, GraphError> {
        for x in [start, treasure] {
            if x >= graph.node_count() {
                return Err(GraphError::UnknownNode(x));
            }
        }
        if start == treasure {
            return Err(GraphError::Malformed("start and treasure coincide".into()));
        }
        if graph.degree(start) < 2 {
            return Err(GraphError::Malformed(format!(
                "start node {start} has degree {} (< 2)",
                graph.degree(start)
            )));
        }
        if !graph.is_connected() {
            return Err(GraphError::Malformed("graph is not connected".into()));
        }
        Ok(Self {
            graph,
            start,
            treasure,
        })
    }

    /// `D = dist(start, treasure)`.
    pub fn distance(&self) -> usize {
        self.graph.distances(self.start)[self.treasure]
    }
}

/// The set of pebbled nodes. Being a set, it holds at most one pebble per node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PebbleConfig {
    pub pebbled: BTreeSet<NodeId>,
}

impl PebbleConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, node: NodeId) -> bool {
        self.pebbled.insert(node)
    }

    pub fn remove(&mut self, node: NodeId) -> bool {
        self.pebbled.remove(&node)
    }

    pub fn has(&self, node: NodeId) -> bool {
        self.pebbled.contains(&node)
    }

    pub fn len(&self) -> usize {
        self.pebbled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pebbled.is_empty()
    }
}

impl FromIterator<NodeId> for PebbleConfig {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        Self {
            pebbled: iter.into_iter().collect(),
        }
    }
}
