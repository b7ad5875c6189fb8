//! The omniscient side: classification, milestones and pebble placement.
//!
//! Placement happens in three phases. Phase 1 writes the case markers on
//! `s(0)` and `s(1)`. Phase 2 encodes the path from the first milestone (or a
//! nearby origin) to the second milestone in the first milestone's
//! neighborhood. Phase 3 repeats the single-copy encoding at every later
//! milestone. Light stretches between encoded prefixes and suffixes are
//! bridged by trail pebbles.

mod check;

pub use check::{check_plan, PlanViolation};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::codec::{port_code, transform, BitString};
use crate::graph::{shortest_path_with_ports, GraphError, Instance, NodeId, PebbleConfig, Port, PortLabeledGraph};

/// Below this maximum degree no node is treated as heavy.
pub const MIN_MILESTONE_DELTA: usize = 1 << 10;

/// Number of redundant copies written around an L-H / L-L-H milestone.
pub const COPIES: usize = 5;

/// Trailing blank slots after the last redundant copy.
const FIVE_COPY_TAIL: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("classification inconsistency: {0}")]
    InternalClassification(String),
    #[error("host {host} has degree {degree} but its encoding needs {required} ports")]
    PlacementOverflow {
        host: NodeId,
        degree: usize,
        required: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which additive constant the heavy threshold uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ThresholdRule {
    /// `80⌊log₂Δ⌋ + 116`, the exact slot count of the largest five-copy layout.
    #[default]
    Recomputed,
    /// `80⌊log₂Δ⌋ + 106`, the original constant, ten slots short of the largest five-copy layout.
    Original,
}

impl fmt::Display for ThresholdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdRule::Recomputed => "recomputed",
            ThresholdRule::Original => "original",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleConfig {
    pub threshold: ThresholdRule,
}

pub fn floor_log2(x: usize) -> usize {
    assert!(x >= 1, "log of zero");
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

pub fn heavy_threshold(delta: usize, rule: ThresholdRule) -> usize {
    let c = match rule {
        ThresholdRule::Recomputed => 116,
        ThresholdRule::Original => 106,
    };
    80 * floor_log2(delta.max(1)) + c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    H,
    LH,
    LLH,
    LLL,
    AllLight,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [CaseTag::H, CaseTag::LH, CaseTag::LLH, CaseTag::LLL, CaseTag::AllLight];

    /// Expected pebbles on `(s(0), s(1))`.
    pub fn markers(self) -> (bool, bool) {
        match self {
            CaseTag::H => (true, true),
            CaseTag::LH => (true, false),
            CaseTag::LLH => (false, true),
            CaseTag::LLL | CaseTag::AllLight => (false, false),
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::H => "H",
            CaseTag::LH => "LH",
            CaseTag::LLH => "LLH",
            CaseTag::LLL => "LLL",
            CaseTag::AllLight => "AllLight",
        })
    }
}

impl FromStr for CaseTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseTag::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown case tag {s:?}"))
    }
}

/// Where a segment's transformed string sits among the host's neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One copy on ports `start_port..`, followed by two blank slots.
    Single { start_port: Port },
    /// Five copies in blocks of `z + 2` ports from port 0, then eight blanks;
    /// slots that are `s(0)` or `s(1)` are left alone.
    FiveCopy,
}

impl Layout {
    pub fn required_slots(self, z: usize) -> usize {
        match self {
            Layout::Single { start_port } => start_port + z + 2,
            Layout::FiveCopy => COPIES * z + 2 * (COPIES - 1) + FIVE_COPY_TAIL,
        }
    }
}

/// One encoded stretch of the path, `v_origin … v_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub host: NodeId,
    pub layout: Layout,
    /// Path index where the decoded moves begin.
    pub origin: usize,
    /// Path index of the next milestone, or `D` for the treasure.
    pub target: usize,
    pub min_distance: usize,
    pub is_final: bool,
    /// Path indices whose outgoing ports appear in Γ, in order.
    pub encoded: Vec<usize>,
    pub gamma: BitString,
    pub gamma_hat: BitString,
    /// Path indices that carry trail pebbles.
    pub trail: Vec<usize>,
    pub required_slots: usize,
}

impl Segment {
    pub fn marker(&self) -> (bool, bool) {
        (self.gamma.bits()[0], self.gamma.bits()[1])
    }

    pub fn is_far(&self) -> bool {
        self.marker() == (false, false)
    }
}

/// Why a node was touched by the placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Role {
    /// Phase-1 pebble on `s(0)` or `s(1)`.
    Marker,
    /// `s(0)` or `s(1)` that must stay empty.
    MarkerBlank,
    /// Pebble on `s` announcing a first milestone in `L_3`.
    StartFlag,
    /// Pebble guiding the agent from `s` toward the first milestone.
    Approach,
    Encoding { segment: usize, port: Port, bit: bool },
    /// Separator or terminator slot of an encoding.
    Separator { segment: usize, port: Port },
    Trail { segment: usize },
    /// Path node right after a trail end that must stay empty.
    TrailStop { segment: Option<usize> },
}

impl Role {
    pub fn wants_pebble(&self) -> bool {
        match self {
            Role::Marker | Role::StartFlag | Role::Approach | Role::Trail { .. } => true,
            Role::Encoding { bit, .. } => *bit,
            Role::MarkerBlank | Role::Separator { .. } | Role::TrailStop { .. } => false,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Marker => write!(f, "marker"),
            Role::MarkerBlank => write!(f, "marker-blank"),
            Role::StartFlag => write!(f, "start-flag"),
            Role::Approach => write!(f, "approach"),
            Role::Encoding { segment, port, bit } => {
                write!(f, "encoding[{segment}]@{port}={}", u8::from(*bit))
            }
            Role::Separator { segment, port } => write!(f, "separator[{segment}]@{port}"),
            Role::Trail { segment } => write!(f, "trail[{segment}]"),
            Role::TrailStop { segment: Some(k) } => write!(f, "trail-stop[{k}]"),
            Role::TrailStop { segment: None } => write!(f, "trail-stop[approach]"),
        }
    }
}

/// Conditions that do not stop placement but make an instance unreliable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifierWarning {
    RoleCollision { node: NodeId, roles: Vec<Role> },
    /// The agent's blind exploration would settle on a different node than
    /// the chosen first milestone.
    ExplorationMismatch { milestone: NodeId, explored: NodeId },
}

impl fmt::Display for VerifierWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifierWarning::RoleCollision { node, roles } => {
                write!(f, "role collision at node {node}:")?;
                for r in roles {
                    write!(f, " {r}")?;
                }
                Ok(())
            }
            VerifierWarning::ExplorationMismatch { milestone, explored } => write!(
                f,
                "exploration reaches node {explored} instead of milestone {milestone}"
            ),
        }
    }
}

/// Everything the oracle decided, kept for verification and debugging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilestonePlan {
    pub case: CaseTag,
    pub delta: usize,
    pub threshold: usize,
    pub rule: ThresholdRule,
    pub path: Vec<NodeId>,
    pub ports: Vec<Port>,
    /// Layer `j` of the first milestone in the L-L-L case.
    pub lll_layer: Option<usize>,
    /// L-L-L with `j = 4` and `v_1 ∈ {s(0), s(1)}`: the first segment is encoded from `s`.
    pub dual: bool,
    pub milestones: Vec<NodeId>,
    /// BFS layer of each milestone; from the second one on this is also its path index.
    pub milestone_layers: Vec<usize>,
    pub segments: Vec<Segment>,
    /// Path indices carrying approach pebbles (L-L-L and all-light).
    pub approach: Vec<usize>,
    pub start_flag: bool,
    pub claims: BTreeMap<NodeId, Vec<Role>>,
    pub warnings: Vec<VerifierWarning>,
    pub pebble_count: usize,
}

impl MilestonePlan {
    pub fn distance(&self) -> usize {
        self.ports.len()
    }

    /// Human-readable dump, one fact per line.
    pub fn to_text(&self) -> String {
        use fmt::Write as _;
        let join = |xs: &mut dyn Iterator<Item = usize>| {
            xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "case {}", self.case);
        let _ = writeln!(out, "delta {} threshold {} ({})", self.delta, self.threshold, self.rule);
        let _ = writeln!(out, "distance {}", self.distance());
        let _ = writeln!(out, "path {}", join(&mut self.path.iter().copied()));
        let _ = writeln!(out, "ports {}", join(&mut self.ports.iter().copied()));
        if let Some(j) = self.lll_layer {
            let _ = writeln!(out, "lll_layer {j}{}", if self.dual { " dual" } else { "" });
        }
        for (k, (m, l)) in self.milestones.iter().zip(&self.milestone_layers).enumerate() {
            let _ = writeln!(out, "milestone {} node {m} layer {l}", k + 1);
        }
        for (k, seg) in self.segments.iter().enumerate() {
            let layout = match seg.layout {
                Layout::Single { start_port } => format!("single@{start_port}"),
                Layout::FiveCopy => "five-copy".to_string(),
            };
            let (a, b) = seg.marker();
            let _ = writeln!(
                out,
                "segment {} host {} origin {} target {}{} min_distance {} marker {}{} layout {} slots {}",
                k + 1,
                seg.host,
                seg.origin,
                seg.target,
                if seg.is_final { " final" } else { "" },
                seg.min_distance,
                u8::from(a),
                u8::from(b),
                layout,
                seg.required_slots
            );
            let _ = writeln!(out, "  gamma {}", seg.gamma);
            let _ = writeln!(out, "  gamma_hat {}", seg.gamma_hat);
            if !seg.trail.is_empty() {
                let _ = writeln!(out, "  trail {}", join(&mut seg.trail.iter().map(|&i| self.path[i])));
            }
        }
        if self.start_flag {
            let _ = writeln!(out, "start_flag {}", self.path[0]);
        }
        if !self.approach.is_empty() {
            let _ = writeln!(out, "approach {}", join(&mut self.approach.iter().map(|&i| self.path[i])));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning {w}");
        }
        let _ = writeln!(out, "pebbles {}", self.pebble_count);
        out
    }
}

/// Shared facts about one instance.
struct Ctx<'a> {
    g: &'a PortLabeledGraph,
    s: NodeId,
    dist_s: Vec<usize>,
    path: Vec<NodeId>,
    ports: Vec<Port>,
    delta: usize,
    threshold: usize,
}

impl<'a> Ctx<'a> {
    fn new(instance: &'a Instance, config: &OracleConfig) -> Result<Self, OracleError> {
        let g = &instance.graph;
        let (path, ports) = shortest_path_with_ports(g, instance.start, instance.treasure)?;
        let delta = g.max_degree();
        Ok(Self {
            g,
            s: instance.start,
            dist_s: g.distances(instance.start),
            path,
            ports,
            delta,
            threshold: heavy_threshold(delta, config.threshold),
        })
    }

    fn d(&self) -> usize {
        self.ports.len()
    }

    fn heavy(&self, v: NodeId) -> bool {
        self.delta >= MIN_MILESTONE_DELTA && self.g.degree(v) >= self.threshold
    }

    fn layer(&self, k: usize) -> impl Iterator<Item = NodeId> + '_ {
        self.dist_s
            .iter()
            .enumerate()
            .filter(move |&(_, &d)| d == k)
            .map(|(v, _)| v)
    }

    fn classify(&self) -> (CaseTag, Option<usize>) {
        if self.delta < MIN_MILESTONE_DELTA {
            return (CaseTag::AllLight, None);
        }
        if self.heavy(self.s) {
            return (CaseTag::H, None);
        }
        if self.layer(1).any(|v| self.heavy(v)) {
            return (CaseTag::LH, None);
        }
        if self.layer(2).any(|v| self.heavy(v)) {
            return (CaseTag::LLH, None);
        }
        // v_{j-3} must be a path node other than t
        for j in 3..=self.d() + 2 {
            let around = self.g.distances_within(self.path[j - 3], 3);
            if self.layer(j).any(|v| around[v] == 3 && self.heavy(v)) {
                return (CaseTag::LLL, Some(j));
            }
        }
        (CaseTag::AllLight, None)
    }

    fn dual(&self, j: usize) -> bool {
        j == 4 && self.d() >= 1 && (self.g.neighbor(self.s, 0) == self.path[1] || self.g.neighbor(self.s, 1) == self.path[1])
    }

    /// First milestone plus the port walk the agent takes to reach it
    /// from the node where its search starts.
    fn milestone1(&self, case: CaseTag, lll: Option<usize>) -> Result<(NodeId, Vec<Port>), OracleError> {
        let missing = |what: &str| OracleError::InternalClassification(format!("no heavy candidate for {what}"));
        let found = match case {
            CaseTag::H => self.heavy(self.s).then(|| (self.s, Vec::new())),
            CaseTag::LH => best_walk(self.g, self.s, &[], 1, &|v| self.dist_s[v] == 1),
            CaseTag::LLH => best_walk(self.g, self.s, &[], 2, &|v| self.dist_s[v] == 2),
            CaseTag::LLL => {
                let j = lll.ok_or_else(|| missing("L-L-L without a layer"))?;
                if self.dual(j) {
                    best_dual_walk(self.g, self.s, &|v| self.dist_s[v] == 4)
                } else {
                    best_walk(self.g, self.path[j - 3], &[], 3, &|v| self.dist_s[v] == j)
                }
            }
            CaseTag::AllLight => None,
        };
        match found {
            Some((w, walk)) if self.heavy(w) => Ok((w, walk)),
            _ => Err(missing(&case.to_string())),
        }
    }
}

/// Among walks of exactly `len` edges from `from`, enumerated depth-first in
/// increasing port order, the first one ending at a node of strictly largest
/// degree that satisfies `keep`. This is the order the agent explores in.
fn best_walk(
    g: &PortLabeledGraph,
    from: NodeId,
    prefix: &[Port],
    len: usize,
    keep: &dyn Fn(NodeId) -> bool,
) -> Option<(NodeId, Vec<Port>)> {
    fn go(
        g: &PortLabeledGraph,
        u: NodeId,
        left: usize,
        walk: &mut Vec<Port>,
        keep: &dyn Fn(NodeId) -> bool,
        best: &mut Option<(usize, NodeId, Vec<Port>)>,
    ) {
        if left == 0 {
            let d = g.degree(u);
            if keep(u) && best.as_ref().is_none_or(|b| d > b.0) {
                *best = Some((d, u, walk.clone()));
            }
            return;
        }
        for p in 0..g.degree(u) {
            walk.push(p);
            go(g, g.neighbor(u, p), left - 1, walk, keep, best);
            walk.pop();
        }
    }
    let mut best = None;
    let mut walk = prefix.to_vec();
    go(g, from, len, &mut walk, keep, &mut best);
    best.map(|(_, v, w)| (v, w))
}

/// Length-3 walks from `s(0)` and then from `s(1)`, reported as length-4 walks from `s`.
fn best_dual_walk(g: &PortLabeledGraph, s: NodeId, keep: &dyn Fn(NodeId) -> bool) -> Option<(NodeId, Vec<Port>)> {
    let mut best: Option<(NodeId, Vec<Port>)> = None;
    for p0 in 0..2 {
        if let Some((v, walk)) = best_walk(g, g.neighbor(s, p0), &[p0], 3, keep) {
            if best.as_ref().is_none_or(|(b, _)| g.degree(v) > g.degree(*b)) {
                best = Some((v, walk));
            }
        }
    }
    best
}

/// Case tag of an instance under the default threshold.
pub fn classify(instance: &Instance) -> Result<CaseTag, OracleError> {
    classify_with(instance, &OracleConfig::default()).map(|(c, _)| c)
}

/// Case tag plus, for L-L-L, the layer `j` of the first milestone.
pub fn classify_with(instance: &Instance, config: &OracleConfig) -> Result<(CaseTag, Option<usize>), OracleError> {
    Ok(Ctx::new(instance, config)?.classify())
}

pub fn select_milestone1(instance: &Instance, case: CaseTag, config: &OracleConfig) -> Result<NodeId, OracleError> {
    let ctx = Ctx::new(instance, config)?;
    let (_, lll) = ctx.classify();
    ctx.milestone1(case, lll).map(|(w, _)| w)
}

/// Exact number of pebbles the plan places.
pub fn pebble_budget(plan: &MilestonePlan) -> usize {
    plan.pebble_count
}

pub fn place_pebbles(instance: &Instance) -> Result<(PebbleConfig, MilestonePlan), OracleError> {
    place_pebbles_with(instance, &OracleConfig::default())
}

struct Claims(BTreeMap<NodeId, Vec<Role>>);

impl Claims {
    fn add(&mut self, node: NodeId, role: Role) {
        self.0.entry(node).or_default().push(role);
    }
}

pub fn place_pebbles_with(
    instance: &Instance,
    config: &OracleConfig,
) -> Result<(PebbleConfig, MilestonePlan), OracleError> {
    let ctx = Ctx::new(instance, config)?;
    let g = ctx.g;
    let s = ctx.s;
    let d = ctx.d();
    let (case, lll_layer) = ctx.classify();
    let s0 = g.neighbor(s, 0);
    let s1 = g.neighbor(s, 1);
    let mut claims = Claims(BTreeMap::new());
    let mut warnings = Vec::new();

    let (m0, m1) = case.markers();
    claims.add(s0, if m0 { Role::Marker } else { Role::MarkerBlank });
    claims.add(s1, if m1 { Role::Marker } else { Role::MarkerBlank });

    let mut plan = MilestonePlan {
        case,
        delta: ctx.delta,
        threshold: ctx.threshold,
        rule: config.threshold,
        path: ctx.path.clone(),
        ports: ctx.ports.clone(),
        lll_layer,
        dual: lll_layer.is_some_and(|j| ctx.dual(j)),
        milestones: Vec::new(),
        milestone_layers: Vec::new(),
        segments: Vec::new(),
        approach: Vec::new(),
        start_flag: false,
        claims: BTreeMap::new(),
        warnings: Vec::new(),
        pebble_count: 0,
    };

    let first_pebbled = |k: usize| k >= 1 && ctx.path[k] != s0 && ctx.path[k] != s1;

    if case == CaseTag::AllLight {
        plan.approach = (1..d).filter(|&k| k >= 2 || first_pebbled(k)).collect();
        for &k in &plan.approach {
            claims.add(ctx.path[k], Role::Approach);
        }
    } else {
        let (w, _) = ctx.milestone1(case, lll_layer)?;
        let w_layer = ctx.dist_s[w];

        if case == CaseTag::LLL {
            let j = lll_layer.expect("L-L-L carries its layer");
            let origin = if plan.dual { s } else { ctx.path[j - 3] };
            let explored = if plan.dual {
                best_dual_walk(g, s, &|_| true)
            } else {
                best_walk(g, origin, &[], 3, &|_| true)
            };
            if let Some((x, _)) = explored.filter(|(x, _)| *x != w) {
                warnings.push(VerifierWarning::ExplorationMismatch { milestone: w, explored: x });
            }
            plan.start_flag = j == 3;
            if plan.start_flag {
                claims.add(s, Role::StartFlag);
            }
            plan.approach = (1..=j - 3).filter(|&k| k >= 2 || (j >= 4 && first_pebbled(k))).collect();
            for &k in &plan.approach {
                claims.add(ctx.path[k], Role::Approach);
            }
            claims.add(ctx.path[j - 2], Role::TrailStop { segment: None });
        }

        plan.milestones.push(w);
        plan.milestone_layers.push(w_layer);
        let mut last = w_layer;
        while let Some(k) = (last + 3..d).find(|&k| ctx.heavy(ctx.path[k])) {
            plan.milestones.push(ctx.path[k]);
            plan.milestone_layers.push(k);
            last = k;
        }

        for m in 0..plan.milestones.len() {
            let host = plan.milestones[m];
            let (origin, min_distance, layout) = if m > 0 {
                (plan.milestone_layers[m], 3, Layout::Single { start_port: 0 })
            } else {
                match case {
                    CaseTag::H => (0, 3, Layout::Single { start_port: 2 }),
                    CaseTag::LH => (0, 4, Layout::FiveCopy),
                    CaseTag::LLH => (0, 5, Layout::FiveCopy),
                    _ if plan.dual => (0, 7, Layout::Single { start_port: 0 }),
                    _ => (w_layer - 3, 6, Layout::Single { start_port: 0 }),
                }
            };
            let (target, is_final) = match plan.milestone_layers.get(m + 1) {
                Some(&k) => (k, false),
                None => (d, true),
            };
            let seg = build_segment(&ctx, host, layout, origin, target, min_distance, is_final)?;
            let idx = plan.segments.len();
            place_segment(&ctx, &seg, idx, [s0, s1], &mut claims)?;
            plan.segments.push(seg);
        }
    }

    let mut pebbles = PebbleConfig::new();
    for (&node, roles) in &claims.0 {
        if roles.iter().any(Role::wants_pebble) {
            pebbles.place(node);
        }
        // overlapping "keep empty" requirements are harmless
        if roles.len() > 1 && roles.iter().any(Role::wants_pebble) {
            warnings.push(VerifierWarning::RoleCollision { node, roles: roles.clone() });
        }
    }
    plan.claims = claims.0;
    plan.warnings = warnings;
    plan.pebble_count = pebbles.len();
    Ok((pebbles, plan))
}

/// Γ for the stretch `v_origin … v_target` decoded with `min_distance` leading moves.
fn build_segment(
    ctx: &Ctx<'_>,
    host: NodeId,
    layout: Layout,
    origin: usize,
    target: usize,
    i: usize,
    is_final: bool,
) -> Result<Segment, OracleError> {
    let len = target - origin;
    if !is_final && len < i {
        return Err(OracleError::InternalClassification(format!(
            "milestone at path index {target} only {len} steps after origin {origin} (need {i})"
        )));
    }
    let all: Vec<usize> = (origin..target).collect();
    let (marker, encoded, trail) = match len.saturating_sub(i) {
        _ if len <= i => ((true, true), all, Vec::new()),
        1 => ((true, false), all, Vec::new()),
        2 => ((false, true), all, Vec::new()),
        _ if is_final => ((false, false), (origin..origin + i).collect(), (origin + i + 1..target).collect()),
        _ => (
            (false, false),
            (origin..origin + i).chain(target - 3..target).collect(),
            (origin + i + 1..=target - 3).collect(),
        ),
    };
    let mut gamma = BitString::from_bits(vec![marker.0, marker.1]);
    for &k in &encoded {
        let code = port_code(ctx.ports[k], ctx.g.degree(ctx.path[k]))
            .expect("path ports are valid at their nodes");
        gamma.extend_from(&code);
    }
    let gamma_hat = transform(&gamma);
    let required_slots = layout.required_slots(gamma_hat.len());
    Ok(Segment {
        host,
        layout,
        origin,
        target,
        min_distance: i,
        is_final,
        encoded,
        gamma,
        gamma_hat,
        trail,
        required_slots,
    })
}

fn place_segment(
    ctx: &Ctx<'_>,
    seg: &Segment,
    idx: usize,
    markers: [NodeId; 2],
    claims: &mut Claims,
) -> Result<(), OracleError> {
    let g = ctx.g;
    let degree = g.degree(seg.host);
    if seg.required_slots > degree {
        return Err(OracleError::PlacementOverflow {
            host: seg.host,
            degree,
            required: seg.required_slots,
        });
    }
    let z = seg.gamma_hat.len();
    let bits = seg.gamma_hat.bits();
    match seg.layout {
        Layout::Single { start_port } => {
            for (x, &bit) in bits.iter().enumerate() {
                let port = start_port + x;
                claims.add(g.neighbor(seg.host, port), Role::Encoding { segment: idx, port, bit });
            }
            for port in start_port + z..start_port + z + 2 {
                claims.add(g.neighbor(seg.host, port), Role::Separator { segment: idx, port });
            }
        }
        Layout::FiveCopy => {
            let mut claim = |port: Port, role: Role| {
                let v = g.neighbor(seg.host, port);
                if !markers.contains(&v) {
                    claims.add(v, role);
                }
            };
            for c in 0..COPIES {
                let base = c * (z + 2);
                for (x, &bit) in bits.iter().enumerate() {
                    claim(base + x, Role::Encoding { segment: idx, port: base + x, bit });
                }
                if c + 1 < COPIES {
                    for port in base + z..base + z + 2 {
                        claim(port, Role::Separator { segment: idx, port });
                    }
                }
            }
            let tail = COPIES * z + 2 * (COPIES - 1);
            for port in tail..tail + FIVE_COPY_TAIL {
                claim(port, Role::Separator { segment: idx, port });
            }
        }
    }
    for &k in &seg.trail {
        claims.add(ctx.path[k], Role::Trail { segment: idx });
    }
    if seg.is_far() && !seg.is_final {
        claims.add(ctx.path[seg.target - 2], Role::TrailStop { segment: Some(idx) });
    }
    Ok(())
}
