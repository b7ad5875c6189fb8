//! Structural checks of a placement against its plan.
//!
//! Everything here is recomputed from the graph and the pebble set; the plan
//! is only trusted for *what* it claims, never for whether the claim holds.

use std::collections::BTreeSet;
use std::fmt;

use super::{CaseTag, Layout, MilestonePlan, COPIES};
use crate::codec::{decode_port, inverse_transform, port_width};
use crate::graph::{Instance, PebbleConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanViolation(pub String);

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Returns every invariant the placement breaks; empty means consistent.
pub fn check_plan(instance: &Instance, pebbles: &PebbleConfig, plan: &MilestonePlan) -> Vec<PlanViolation> {
    let g = &instance.graph;
    let mut out = Vec::new();
    let mut fail = |msg: String| out.push(PlanViolation(msg));
    let s = instance.start;
    let d = plan.distance();
    let heavy = |v| g.degree(v) >= plan.threshold;

    if plan.pebble_count != pebbles.len() {
        fail(format!("plan counts {} pebbles, placement has {}", plan.pebble_count, pebbles.len()));
    }
    let markers = (pebbles.has(g.neighbor(s, 0)), pebbles.has(g.neighbor(s, 1)));
    if markers != plan.case.markers() {
        fail(format!("markers {markers:?} do not match case {}", plan.case));
    }

    let y = plan.milestones.len();
    if y > d.div_ceil(3).max(1) {
        fail(format!("{y} milestones for distance {d}"));
    }
    for (k, &m) in plan.milestones.iter().enumerate() {
        if !heavy(m) {
            fail(format!("milestone {} (node {m}) is light", k + 1));
        }
    }
    for k in 1..y {
        let (a, b) = (plan.milestones[k - 1], plan.milestones[k]);
        if plan.milestone_layers[k] < plan.milestone_layers[k - 1] + 3 {
            fail(format!("milestones {k} and {} closer than 3", k + 1));
        }
        let na: BTreeSet<_> = g.neighbors(a).chain([a]).collect();
        if g.neighbors(b).chain([b]).any(|v| na.contains(&v)) {
            fail(format!("milestones {k} and {} share a neighbor", k + 1));
        }
        if plan.path[plan.milestone_layers[k]] != b {
            fail(format!("milestone {} is not on the path", k + 1));
        }
    }

    for (idx, seg) in plan.segments.iter().enumerate() {
        let tag = format!("segment {}", idx + 1);
        let deg = g.degree(seg.host);
        if seg.required_slots > deg {
            fail(format!("{tag}: needs {} slots, host degree {deg}", seg.required_slots));
        }
        if inverse_transform(&seg.gamma_hat).as_ref() != Ok(&seg.gamma) {
            fail(format!("{tag}: gamma_hat is not the transform of gamma"));
        }
        if seg.gamma_hat.contains_double_zero() {
            fail(format!("{tag}: gamma_hat contains 00"));
        }

        // band implied by the true length
        let len = seg.target - seg.origin;
        let i = seg.min_distance;
        let expect = match len {
            l if l <= i => (true, true),
            l if l == i + 1 => (true, false),
            l if l == i + 2 => (false, true),
            _ => (false, false),
        };
        if seg.marker() != expect {
            fail(format!("{tag}: marker {:?} for length {len}", seg.marker()));
        }

        // replay the decoder along the true path
        let mut offset = 2;
        for &k in &seg.encoded {
            let v = plan.path[k];
            match decode_port(&seg.gamma, offset, g.degree(v)) {
                Ok((p, next)) if p == plan.ports[k] => offset = next,
                other => {
                    fail(format!("{tag}: port of path index {k} decodes as {other:?}"));
                    break;
                }
            }
        }
        if offset != seg.gamma.len() {
            fail(format!("{tag}: {} undecoded bits", seg.gamma.len() - offset));
        }
        let width_sum: usize = seg.encoded.iter().map(|&k| port_width(g.degree(plan.path[k]))).sum();
        if width_sum + 2 != seg.gamma.len() {
            fail(format!("{tag}: gamma length {} != 2 + {width_sum}", seg.gamma.len()));
        }

        // what the host's neighbors actually spell
        let z = seg.gamma_hat.len();
        let read = |port: usize| port < deg && pebbles.has(g.neighbor(seg.host, port));
        match seg.layout {
            Layout::Single { start_port } => {
                let ok = seg.gamma_hat.bits().iter().enumerate().all(|(x, &b)| read(start_port + x) == b)
                    && !read(start_port + z)
                    && !read(start_port + z + 1);
                if !ok {
                    fail(format!("{tag}: host neighbors do not spell gamma_hat"));
                }
            }
            Layout::FiveCopy => {
                let intact = (0..COPIES)
                    .filter(|c| {
                        let base = c * (z + 2);
                        seg.gamma_hat.bits().iter().enumerate().all(|(x, &b)| read(base + x) == b)
                            && (c + 1 == COPIES || (!read(base + z) && !read(base + z + 1)))
                    })
                    .count();
                if intact < 3 {
                    fail(format!("{tag}: only {intact} intact copies"));
                }
            }
        }

        for &k in &seg.trail {
            if !pebbles.has(plan.path[k]) {
                fail(format!("{tag}: trail node at path index {k} is empty"));
            }
        }
        if seg.is_far() && !seg.is_final && pebbles.has(plan.path[seg.target - 2]) {
            fail(format!("{tag}: pebble two steps before the next milestone"));
        }
    }

    if plan.case == CaseTag::AllLight {
        for k in 1..d {
            let v = plan.path[k];
            let skip = k == 1 && (v == g.neighbor(s, 0) || v == g.neighbor(s, 1));
            if pebbles.has(v) == skip {
                fail(format!("all-light path index {k} has the wrong pebble state"));
            }
        }
    }
    if plan.case == CaseTag::LLL && pebbles.has(s) != (plan.lll_layer == Some(3)) {
        fail("start flag does not match the first milestone layer".into());
    }
    out
}
