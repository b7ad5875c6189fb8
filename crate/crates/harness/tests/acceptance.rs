//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use pebblehunt::bench::{grid, normalized_pebbles, normalized_time, summarize, BenchRecord, GridPreset};
use pebblehunt::lowerbound::{enumerate_walks, lowerbound_counts, pigeonhole_demo, DecisionTree};
use pebblehunt::verify::{verify, VerifyOptions, VerifyReport};
use pebblehunt_core::agent::{read_five_copy, AgentView};
use pebblehunt_core::codec::{decode_port, inverse_transform, port_code, transform};
use pebblehunt_core::graph::{generate, GeneratorKind, Instance, NodeId, Port};
use pebblehunt_core::oracle::{
    floor_log2, heavy_threshold, pebble_budget, place_pebbles_with, CaseTag, OracleConfig, OracleError,
    ThresholdRule,
};
use pebblehunt_core::{run, AgentConfig, BitString, World};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SWEEP_SEED: u64 = 0;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Sweep {
    points: Vec<(CaseTag, Instance)>,
    reports: Vec<VerifyReport>,
    seconds: f64,
}

fn sweep() -> Sweep {
    let started = Instant::now();
    let points: Vec<_> = grid(GridPreset::Acceptance, SWEEP_SEED)
        .into_iter()
        .map(|p| (p.case, p.instance().expect("grid instance")))
        .collect();
    let reports = points
        .par_iter()
        .map(|(_, inst)| verify(inst, &VerifyOptions::default()))
        .collect();
    Sweep {
        points,
        reports,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn records(s: &Sweep) -> Vec<BenchRecord> {
    s.points
        .iter()
        .zip(&s.reports)
        .map(|((case, _), r)| BenchRecord {
            delta: r.delta,
            d_dist: r.distance,
            case: *case,
            seed: 0,
            time: r.time,
            pebbles: r.pebbles,
            norm_time: normalized_time(r.time, r.delta, r.distance),
            norm_pebbles: normalized_pebbles(r.pebbles, r.delta, r.distance),
        })
        .collect()
}

fn correctness(s: &Sweep) -> Outcome {
    let n = s.reports.len();
    let failed: Vec<_> = s.reports.iter().enumerate().filter(|(_, r)| !r.passed()).map(|(i, _)| i).collect();
    let cases: BTreeSet<_> = s.reports.iter().filter_map(|r| r.case).map(|c| c.to_string()).collect();
    let mismatched = s.points.iter().zip(&s.reports).filter(|((c, _), r)| r.case != Some(*c)).count();
    let d_range = s.reports.iter().all(|r| (3..=40).contains(&r.distance));
    let warned = s.reports.iter().filter(|r| !r.warnings.is_empty()).count();
    outcome(
        n >= 500 && failed.is_empty() && cases.len() == 5 && mismatched == 0 && d_range && warned == 0,
        format!(
            "{}/{n} found, cases {cases:?}, {mismatched} misclassified, {warned} warned, {:.1}s{}",
            n - failed.len(),
            s.seconds,
            failed.first().map_or(String::new(), |i| format!("; first failure:\n{}", s.reports[*i]))
        ),
    )
}

fn time_bound(s: &Sweep) -> Outcome {
    let sum = summarize(&records(s));
    outcome(
        sum.max_norm_time <= 200.0 && sum.max_doubling_ratio <= 3.0,
        format!(
            "max normalized time {:.3} (cap 200), worst-case time(2D)/time(D) {:.3} (cap 3; per-instance {:.3})",
            sum.max_norm_time, sum.max_doubling_ratio, sum.max_instance_doubling_ratio
        ),
    )
}

fn pebble_bound(s: &Sweep) -> Outcome {
    let sum = summarize(&records(s));
    let mut over_budget = 0;
    for (_, inst) in &s.points {
        let (pebbles, plan) = place_pebbles_with(inst, &OracleConfig::default()).expect("placement");
        let d = inst.distance();
        let l = floor_log2(inst.graph.max_degree());
        if pebble_budget(&plan) != pebbles.len() || pebbles.len() > 12 * d * (1 + l) + 64 {
            over_budget += 1;
        }
    }
    outcome(
        sum.max_norm_pebbles <= 15.0 && over_budget == 0,
        format!(
            "max normalized pebbles {:.3} (cap 15), {over_budget} instances over 12·D·(1+⌊log Δ⌋)+64",
            sum.max_norm_pebbles
        ),
    )
}

/// Independent codec oracles.
fn oracle_transform(bits: &[bool]) -> Vec<bool> {
    bits.iter().flat_map(|&b| [true, b]).collect()
}

fn oracle_port_bits(port: usize, deg: usize) -> Vec<bool> {
    let mut width = 1;
    while (1usize << width) <= deg {
        width += 1;
    }
    (0..width).rev().map(|k| (port >> k) & 1 == 1).collect()
}

fn codec_suite() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0usize;
    for _ in 0..10_000 {
        let len = rng.gen_range(0..=512);
        let raw: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        let g = BitString::from_bits(raw.clone());
        let gh = transform(&g);
        let ok = gh.bits() == oracle_transform(&raw).as_slice()
            && !gh.bits().windows(2).any(|w| !w[0] && !w[1])
            && inverse_transform(&gh).as_ref() == Ok(&g);
        bad += usize::from(!ok);
    }
    let mut port_checks = 0u64;
    for deg in 1..=1usize << 12 {
        let sample: Vec<usize> = if deg <= 1000 {
            (0..deg).collect()
        } else {
            (0..1000).map(|_| rng.gen_range(0..deg)).collect()
        };
        for p in sample {
            let code = port_code(p, deg).expect("in range");
            let mut padded = BitString::from_bits(vec![true, false]);
            padded.extend_from(&code);
            let ok = code.bits() == oracle_port_bits(p, deg).as_slice()
                && decode_port(&padded, 2, deg) == Ok((p, padded.len()));
            bad += usize::from(!ok);
            port_checks += 1;
        }
    }
    let secs = started.elapsed().as_secs_f64();
    outcome(
        bad == 0 && secs < 30.0,
        format!("10000 strings, {port_checks} port codes, {bad} mismatches, {secs:.1}s"),
    )
}

/// A star: center 0 with one leaf per layout slot, leaf pebbled iff its bit is set.
struct Star {
    bits: Vec<bool>,
    at: Option<usize>,
}

impl AgentView for Star {
    fn current_degree(&self) -> usize {
        if self.at.is_some() {
            1
        } else {
            self.bits.len()
        }
    }
    fn pebble_here(&self) -> bool {
        self.at.is_some_and(|i| self.bits[i])
    }
    fn treasure_here(&self) -> bool {
        false
    }
    fn move_via(&mut self, port: Port) -> Port {
        match self.at {
            None => {
                self.at = Some(port);
                0
            }
            Some(i) => {
                self.at = None;
                i
            }
        }
    }
}

fn five_copy_layout(gh: &[bool]) -> Vec<bool> {
    let mut out = Vec::new();
    for c in 0..5 {
        out.extend_from_slice(gh);
        if c < 4 {
            out.extend([false, false]);
        }
    }
    out.extend([false; 8]);
    out
}

fn majority_robustness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fails = Vec::new();
    let mut modes = [0usize; 4];
    for trial in 0..1000 {
        let len = rng.gen_range(2..=48);
        let g = BitString::from_bits((0..len).map(|_| rng.gen()).collect());
        let gh = transform(&g);
        let z = gh.len();
        let mut layout = five_copy_layout(gh.bits());
        let copy_start = |c: usize| c * (z + 2);
        // the four ways stray pebbles/blanks hit the layout
        let mode = trial % 4;
        modes[mode] += 1;
        match mode {
            // one flipped bit in one copy
            0 => {
                let c = rng.gen_range(0..5);
                let x = copy_start(c) + rng.gen_range(0..z);
                layout[x] = !layout[x];
            }
            // one flipped bit in each of two copies
            1 => {
                let c1 = rng.gen_range(0..5);
                let c2 = (c1 + rng.gen_range(1..5)) % 5;
                for c in [c1, c2] {
                    let x = copy_start(c) + rng.gen_range(0..z);
                    layout[x] = !layout[x];
                }
            }
            // a separator turned on, merging two neighboring copies
            2 => {
                let c = rng.gen_range(0..4);
                layout[copy_start(c) + z + rng.gen_range(0..2)] = true;
            }
            // two erased slots anywhere (skipped marker neighbors)
            _ => {
                for _ in 0..2 {
                    let x = rng.gen_range(0..layout.len());
                    layout[x] = false;
                }
            }
        }
        let mut star = Star {
            bits: layout,
            at: None,
        };
        let got = read_five_copy(&mut star).ok().flatten().map(|(s, _)| s);
        if got.as_ref() != Some(&gh) {
            fails.push(format!("trial {trial} mode {mode}: {gh} read as {got:?}"));
        }
    }
    outcome(
        fails.is_empty(),
        format!(
            "1000 trials (modes {modes:?}), {} failures{}",
            fails.len(),
            fails.first().map_or(String::new(), |f| format!("; {f}"))
        ),
    )
}

fn milestone_invariants(s: &Sweep) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut worst_slots_over_original: i64 = i64::MIN;
    for (_, inst) in &s.points {
        let g = &inst.graph;
        let plan = match place_pebbles_with(inst, &OracleConfig::default()) {
            Ok((_, plan)) => plan,
            Err(e @ OracleError::PlacementOverflow { .. }) => {
                bad.push(format!("overflow: {e}"));
                continue;
            }
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        if plan.case == CaseTag::AllLight {
            continue;
        }
        checked += 1;
        for k in 1..plan.milestones.len() {
            let (a, b) = (plan.milestones[k - 1], plan.milestones[k]);
            if plan.milestone_layers[k] < plan.milestone_layers[k - 1] + 3 {
                bad.push(format!("milestones {a},{b} too close"));
            }
            let na: BTreeSet<NodeId> = g.neighbors(a).collect();
            if g.neighbors(b).any(|v| na.contains(&v)) {
                bad.push(format!("milestones {a},{b} share a neighbor"));
            }
        }
        let original = heavy_threshold(plan.delta, ThresholdRule::Original) as i64;
        for seg in &plan.segments {
            if seg.required_slots > g.degree(seg.host) {
                bad.push(format!("segment at {} needs {} slots", seg.host, seg.required_slots));
            }
            worst_slots_over_original = worst_slots_over_original.max(seg.required_slots as i64 - original);
        }
    }

    // rerun the whole sweep with the smaller constant
    let original_options = VerifyOptions {
        oracle: OracleConfig {
            threshold: ThresholdRule::Original,
        },
        ..Default::default()
    };
    let original_failures = s
        .points
        .par_iter()
        .filter(|(_, inst)| !verify(inst, &original_options).passed())
        .count();
    let suffices = original_failures == 0 && worst_slots_over_original <= 0;
    outcome(
        bad.is_empty() && checked > 0,
        format!(
            "{checked} milestone-case plans, {} violations{}; 80⌊log Δ⌋+106 suffices on this sweep: {} \
             (largest slots minus that threshold {worst_slots_over_original}, {original_failures} failures when used)",
            bad.len(),
            bad.first().map_or(String::new(), |b| format!(" ({b})")),
            if suffices { "yes" } else { "no" }
        ),
    )
}

fn small_tree_sweep() -> Outcome {
    let mut found = 0;
    let mut same = 0;
    for leaf in 0..36 {
        let inst = generate(&GeneratorKind::CompleteTree { delta: 4, depth: 3, leaf }, 0).expect("tree");
        let report = verify(&inst, &VerifyOptions::default());
        found += usize::from(report.passed());
        let (pebbles, _) = place_pebbles_with(&inst, &OracleConfig::default()).expect("placement");
        let a = run(&mut World::new(&inst, &pebbles), &AgentConfig::default());
        let b = run(&mut World::new(&inst, &pebbles), &AgentConfig::default());
        same += usize::from(a.is_ok() && a == b);
    }
    outcome(found == 36 && same == 36, format!("{found}/36 found, {same}/36 identical reruns"))
}

/// Reachable endpoints by direct recursion over the heap-indexed tree.
fn oracle_reach(tree: &DecisionTree, inst: &Instance, node: usize, at: NodeId, level: usize, out: &mut BTreeSet<NodeId>) {
    if level == tree.depth {
        out.insert(at);
        return;
    }
    let (p0, p1) = tree.nodes[node];
    for (branch, p) in [(0, p0), (1, p1)] {
        match inst.graph.neighbor_via_port(at, p) {
            Ok((next, _)) => oracle_reach(tree, inst, 2 * node + 1 + branch, next, level + 1, out),
            Err(_) => {
                out.insert(at);
            }
        }
    }
}

fn lower_bound_workbench() -> Outcome {
    let started = Instant::now();
    let mut feasible = 0;
    let mut wrong_leaves = 0;
    for delta in 3..=1usize << 12 {
        let mut expect = BigUint::from(delta);
        for d in 3..=64usize {
            if d == 3 {
                expect *= BigUint::from(delta - 1).pow(2);
            } else {
                expect *= BigUint::from(delta - 1);
            }
            let c = lowerbound_counts(delta, d).expect("in range");
            feasible += usize::from(c.feasible);
            wrong_leaves += usize::from(c.leaves != expect);
        }
    }

    let mut over = 0;
    let mut disagree = 0;
    let mut largest = [0usize; 3];
    for (slot, t) in [4usize, 8, 12].into_iter().enumerate() {
        let inst = generate(&GeneratorKind::CompleteTree { delta: 3, depth: t, leaf: 0 }, 0).expect("tree");
        for seed in 0..100 {
            // ports up to 3 so some walks hit a missing port and stop
            let tree = DecisionTree::random(t, 4, seed * 31 + t as u64);
            let reach = enumerate_walks(&tree, 3, t).expect("walks");
            let mut expect = BTreeSet::new();
            oracle_reach(&tree, &inst, 0, inst.start, 0, &mut expect);
            over += usize::from(reach.len() > 1 << t);
            disagree += usize::from(reach != expect);
            largest[slot] = largest[slot].max(reach.len());
        }
    }

    let demo = pigeonhole_demo(3, 4, 2).expect("demo");
    let gap = demo.max_reachable <= 4 && demo.leaves == 24 && demo.max_leaves_reached < demo.leaves;
    let secs = started.elapsed().as_secs_f64();
    outcome(
        feasible == 0 && wrong_leaves == 0 && over == 0 && disagree == 0 && gap && secs < 60.0,
        format!(
            "{feasible} feasible (Δ,D) pairs, {wrong_leaves} leaf-count mismatches; walks over bound {over}, \
             oracle disagreements {disagree}, max endpoints t=4/8/12: {largest:?}; \
             pigeonhole over {} trees: at most {} endpoints vs {} leaves; {secs:.1}s",
            demo.trees, demo.max_reachable, demo.leaves
        ),
    )
}

fn locality_audit(s: &Sweep) -> Outcome {
    let contract: usize = s
        .reports
        .iter()
        .map(|r| r.errors.iter().filter(|e| e.starts_with("contract")).count())
        .sum();
    outcome(
        contract == 0 && !s.reports.is_empty(),
        format!("{contract} out-of-contract accesses over {} runs", s.reports.len()),
    )
}

fn main() -> ExitCode {
    let s = sweep();
    let criteria: Vec<Criterion> = vec![
        ("correctness sweep", Box::new(|| correctness(&s))),
        ("time bound", Box::new(|| time_bound(&s))),
        ("pebble bound", Box::new(|| pebble_bound(&s))),
        ("codec suite", Box::new(codec_suite)),
        ("majority robustness", Box::new(majority_robustness)),
        ("milestone invariants", Box::new(|| milestone_invariants(&s))),
        ("exhaustive small-tree sweep", Box::new(small_tree_sweep)),
        ("lower-bound workbench", Box::new(lower_bound_workbench)),
        ("locality audit", Box::new(|| locality_audit(&s))),
    ];
    let mut all = true;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        all &= o.pass;
        println!("criterion {} {name}: {} — {}", n + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
