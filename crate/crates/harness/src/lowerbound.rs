//! Counting side of the lower bound on complete trees.
//!
//! An algorithm that sees one bit (pebble or not) per step can follow at most
//! `2^t` port sequences in `t` steps; a complete tree of height `D` has
//! `Δ(Δ-1)^{D-1}` leaves, so few steps cannot reach them all.

use std::collections::BTreeSet;

use anyhow::{bail, Result};
use num_bigint::BigUint;
use pebblehunt_core::graph::{generate, GeneratorKind, NodeId, Port};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundCounts {
    pub leaves: BigUint,
    pub t_threshold: u64,
    /// `2^t_threshold >= leaves`.
    pub feasible: bool,
}

/// Exact big-integer counts; `t = ⌊D·log₂(Δ-1)/2⌋` via the bit length of `(Δ-1)^D`.
pub fn lowerbound_counts(delta: usize, d: usize) -> Result<LowerBoundCounts> {
    if delta < 3 || d < 3 {
        bail!("lowerbound needs delta >= 3 and D >= 3, got ({delta}, {d})");
    }
    let base = BigUint::from(delta - 1);
    let leaves = BigUint::from(delta) * base.pow(d as u32 - 1);
    // ⌊log₂ N⌋ = bits(N) - 1, and ⌊x/2⌋ = ⌊⌊x⌋/2⌋
    let t_threshold = (base.pow(d as u32).bits() - 1) / 2;
    let feasible = BigUint::from(1u8) << t_threshold >= leaves;
    Ok(LowerBoundCounts {
        leaves,
        t_threshold,
        feasible,
    })
}

/// Depth-`t` binary decision tree, stored heap-style: internal node `i` has
/// children `2i+1` (pebble seen) and `2i+2` (no pebble) and carries the port
/// taken on each branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    pub depth: usize,
    pub nodes: Vec<(Port, Port)>,
}

impl DecisionTree {
    pub fn new(depth: usize, nodes: Vec<(Port, Port)>) -> Result<Self> {
        if nodes.len() != (1usize << depth) - 1 {
            bail!("depth {depth} needs {} internal nodes, got {}", (1usize << depth) - 1, nodes.len());
        }
        Ok(Self { depth, nodes })
    }

    /// Ports drawn uniformly from `0..max_port`.
    pub fn random(depth: usize, max_port: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes = (0..(1usize << depth) - 1)
            .map(|_| (rng.gen_range(0..max_port), rng.gen_range(0..max_port)))
            .collect();
        Self { depth, nodes }
    }

    /// All `2^depth` root-to-leaf port sequences.
    pub fn sequences(&self) -> Vec<Vec<Port>> {
        (0..1usize << self.depth)
            .map(|choice| {
                let mut i = 0;
                (0..self.depth)
                    .map(|level| {
                        let bit = (choice >> (self.depth - 1 - level)) & 1;
                        let port = if bit == 0 { self.nodes[i].0 } else { self.nodes[i].1 };
                        i = 2 * i + 1 + bit;
                        port
                    })
                    .collect()
            })
            .collect()
    }
}

/// Replays every sequence from the root of the height-`d` complete tree of
/// degree `delta`; a port that does not exist ends that walk where it stands.
pub fn enumerate_walks(tree: &DecisionTree, delta: usize, d: usize) -> Result<BTreeSet<NodeId>> {
    let inst = generate(&GeneratorKind::CompleteTree { delta, depth: d, leaf: 0 }, 0)?;
    let g = &inst.graph;
    Ok(tree
        .sequences()
        .into_iter()
        .map(|seq| {
            let mut at = inst.start;
            for p in seq {
                match g.neighbor_via_port(at, p) {
                    Ok((next, _)) => at = next,
                    Err(_) => break,
                }
            }
            at
        })
        .collect())
}

/// Leaves of the complete tree, i.e. the possible treasure positions.
pub fn tree_leaves(delta: usize, d: usize) -> Result<BTreeSet<NodeId>> {
    let inst = generate(&GeneratorKind::CompleteTree { delta, depth: d, leaf: 0 }, 0)?;
    let dist = inst.graph.distances(inst.start);
    Ok((0..inst.graph.node_count()).filter(|&v| dist[v] == d).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PigeonholeDemo {
    pub trees: usize,
    /// Most distinct endpoints any single tree reaches.
    pub max_reachable: usize,
    /// Most leaves any single tree reaches.
    pub max_leaves_reached: usize,
    pub leaves: usize,
}

/// Every depth-`t` decision tree with ports below `delta`, exhaustively.
/// Walks run on the height-`d` tree, so their endpoints are compared against
/// its leaves.
pub fn pigeonhole_demo(delta: usize, d: usize, t: usize) -> Result<PigeonholeDemo> {
    let internal = (1usize << t) - 1;
    let slots = 2 * internal;
    let total = delta.checked_pow(slots as u32).filter(|&n| n <= 1 << 20);
    let Some(total) = total else {
        bail!("{delta}^{slots} decision trees is too many to enumerate");
    };
    let leaves = tree_leaves(delta, d)?;
    let (mut max_reachable, mut max_leaves_reached) = (0, 0);
    for code in 0..total {
        let mut c = code;
        let mut ports = Vec::with_capacity(slots);
        for _ in 0..slots {
            ports.push(c % delta);
            c /= delta;
        }
        let nodes = ports.chunks(2).map(|p| (p[0], p[1])).collect();
        let reach = enumerate_walks(&DecisionTree::new(t, nodes)?, delta, d)?;
        max_reachable = max_reachable.max(reach.len());
        max_leaves_reached = max_leaves_reached.max(reach.intersection(&leaves).count());
    }
    Ok(PigeonholeDemo {
        trees: total,
        max_reachable,
        max_leaves_reached,
        leaves: leaves.len(),
    })
}
