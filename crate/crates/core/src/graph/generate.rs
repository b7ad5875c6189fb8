//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphError, Instance, NodeId, PortLabeledGraph};

/// Cap on generated graph size; keeps desk-scale runs from exhausting memory.
const MAX_NODES: usize = 5_000_000;

/// Parameters for a path `s = v_0 … v_D = t` whose selected nodes are padded
/// with pendant leaves up to degree `delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubPathParams {
    pub delta: usize,
    pub depth: usize,
    /// Path indices that receive degree exactly `delta`.
    pub hubs: Vec<usize>,
    /// Path indices that get an extra off-path neighbor of degree `delta`.
    pub decoys: Vec<usize>,
    /// Light path nodes get between 0 and `max_branch` extra pendant leaves.
    pub max_branch: usize,
}

impl HubPathParams {
    pub fn new(delta: usize, depth: usize, hubs: Vec<usize>) -> Self {
        Self {
            delta,
            depth,
            hubs,
            decoys: Vec::new(),
            max_branch: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Root of degree `delta`, internal nodes of degree `delta`, height `depth`.
    /// The treasure is the `leaf`-th leaf in lexicographic port order.
    CompleteTree {
        delta: usize,
        depth: usize,
        leaf: usize,
    },
    HubPath(HubPathParams),
    /// Random spanning tree plus chords, all degrees at most `max_degree`.
    RandomConnected { nodes: usize, max_degree: usize },
}

/// Builds an instance; the same `(kind, seed)` always yields the same instance.
pub fn generate(kind: &GeneratorKind, seed: u64) -> Result<Instance, GraphError> {
    match kind {
        GeneratorKind::CompleteTree { delta, depth, leaf } => complete_tree(*delta, *depth, *leaf),
        GeneratorKind::HubPath(params) => hub_path(params, seed),
        GeneratorKind::RandomConnected { nodes, max_degree } => {
            random_connected(*nodes, *max_degree, seed)
        }
    }
}

pub(crate) fn complete_tree_leaf_count(delta: usize, depth: usize) -> Option<usize> {
    let mut leaves = delta;
    for _ in 1..depth {
        leaves = leaves.checked_mul(delta - 1)?;
    }
    Some(leaves)
}

fn complete_tree(delta: usize, depth: usize, leaf: usize) -> Result<Instance, GraphError> {
    if delta < 2 {
        return Err(GraphError::Param(format!("complete tree needs delta >= 2, got {delta}")));
    }
    if depth < 1 {
        return Err(GraphError::Param("complete tree needs depth >= 1".into()));
    }
    let leaves = complete_tree_leaf_count(delta, depth)
        .filter(|&l| l <= MAX_NODES)
        .ok_or_else(|| GraphError::Param(format!("complete tree ({delta}, {depth}) too large")))?;
    if leaf >= leaves {
        return Err(GraphError::Param(format!("leaf {leaf} out of range ({leaves} leaves)")));
    }

    // Children are created in port order, layer by layer, so the last layer
    // lists the leaves in lexicographic order of their root paths. Internal
    // nodes use ports 0..delta-1 for children and delta-1 for the parent.
    let mut neighbors: Vec<Vec<NodeId>> = vec![Vec::new()];
    let mut frontier = vec![0];
    for level in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * (delta - 1).max(1));
        for &u in &frontier {
            let children = if level == 0 { delta } else { delta - 1 };
            let mut kids = Vec::with_capacity(children);
            for _ in 0..children {
                let c = neighbors.len();
                neighbors.push(vec![u]);
                kids.push(c);
            }
            let parent = neighbors[u].pop();
            neighbors[u].extend(&kids);
            neighbors[u].extend(parent);
            next.extend(kids);
        }
        frontier = next;
    }
    let graph = PortLabeledGraph::from_neighbor_lists(&neighbors)?;
    Instance::new(graph, 0, frontier[leaf])
}

fn hub_path(params: &HubPathParams, seed: u64) -> Result<Instance, GraphError> {
    let HubPathParams {
        delta,
        depth,
        ref hubs,
        ref decoys,
        max_branch,
    } = *params;
    if delta < 3 {
        return Err(GraphError::Param(format!("hub path needs delta >= 3, got {delta}")));
    }
    if depth < 1 {
        return Err(GraphError::Param("hub path needs depth >= 1".into()));
    }
    if let Some(&bad) = hubs.iter().chain(decoys).find(|&&h| h > depth) {
        return Err(GraphError::Param(format!("position {bad} beyond path end {depth}")));
    }
    let estimate = (depth + 1) * (max_branch + 1) + (hubs.len() + decoys.len()) * delta;
    if estimate > MAX_NODES {
        return Err(GraphError::Param("hub path too large".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut neighbors: Vec<Vec<NodeId>> = vec![Vec::new(); depth + 1];
    let link = |nb: &mut Vec<Vec<NodeId>>, a: NodeId, b: NodeId| {
        nb[a].push(b);
        nb[b].push(a);
    };
    let leaf = |nb: &mut Vec<Vec<NodeId>>, a: NodeId| {
        let x = nb.len();
        nb.push(vec![a]);
        nb[a].push(x);
    };
    for i in 0..depth {
        link(&mut neighbors, i, i + 1);
    }
    for &d in decoys {
        let h = neighbors.len();
        neighbors.push(Vec::new());
        link(&mut neighbors, d, h);
        for _ in 1..delta {
            leaf(&mut neighbors, h);
        }
    }
    for i in 0..=depth {
        let current = neighbors[i].len();
        if hubs.contains(&i) {
            if current > delta {
                return Err(GraphError::Param(format!("hub {i} already has degree {current}")));
            }
            for _ in current..delta {
                leaf(&mut neighbors, i);
            }
        } else {
            let mut extra = rng.gen_range(0..=max_branch);
            if i == 0 && current + extra < 2 {
                extra = 2 - current;
            }
            for _ in 0..extra {
                leaf(&mut neighbors, i);
            }
        }
    }
    for list in neighbors.iter_mut() {
        list.shuffle(&mut rng);
    }
    let graph = PortLabeledGraph::from_neighbor_lists(&neighbors)?;
    Instance::new(graph, 0, depth)
}

fn random_connected(nodes: usize, max_degree: usize, seed: u64) -> Result<Instance, GraphError> {
    if nodes < 3 {
        return Err(GraphError::Param(format!("random graph needs >= 3 nodes, got {nodes}")));
    }
    if max_degree < 2 {
        return Err(GraphError::Param("random graph needs max degree >= 2".into()));
    }
    if nodes > MAX_NODES {
        return Err(GraphError::Param("random graph too large".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut neighbors: Vec<Vec<NodeId>> = vec![Vec::new(); nodes];
    for v in 1..nodes {
        // the previous node always has a free slot: it has at most one edge
        let u = loop {
            let u = rng.gen_range(0..v);
            if neighbors[u].len() < max_degree {
                break u;
            }
        };
        neighbors[u].push(v);
        neighbors[v].push(u);
    }
    for _ in 0..nodes / 2 {
        let a = rng.gen_range(0..nodes);
        let b = rng.gen_range(0..nodes);
        if a != b
            && neighbors[a].len() < max_degree
            && neighbors[b].len() < max_degree
            && !neighbors[a].contains(&b)
        {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
    }
    for list in neighbors.iter_mut() {
        list.shuffle(&mut rng);
    }
    let starts: Vec<NodeId> = (0..nodes).filter(|&u| neighbors[u].len() >= 2).collect();
    let start = starts[rng.gen_range(0..starts.len())];
    let treasure = loop {
        let t = rng.gen_range(0..nodes);
        if t != start {
            break t;
        }
    };
    let graph = PortLabeledGraph::from_neighbor_lists(&neighbors)?;
    Instance::new(graph, start, treasure)
}
