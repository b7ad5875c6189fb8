use pebblehunt_core::agent::{run, AgentConfig, AgentError, AuditedView, World};
use pebblehunt_core::graph::{generate, GeneratorKind, HubPathParams, Instance, PebbleConfig, PortLabeledGraph};
use pebblehunt_core::oracle::{check_plan, place_pebbles, CaseTag, Layout, MilestonePlan};

/// Places, checks the plan, runs the agent and cross-checks the simulator.
fn solve(inst: &Instance) -> (MilestonePlan, u64) {
    let (pebbles, plan) = place_pebbles(inst).unwrap();
    let violations = check_plan(inst, &pebbles, &plan);
    assert!(violations.is_empty(), "{violations:?}\n{}", plan.to_text());
    let mut view = AuditedView::new(World::new(inst, &pebbles));
    let out = run(&mut view, &AgentConfig::default())
        .unwrap_or_else(|e| panic!("{e}\n{}", plan.to_text()));
    assert!(out.found);
    assert!(view.violations().is_empty(), "{:?}", view.violations());
    let world = view.into_inner();
    assert_eq!(world.position(), inst.treasure);
    assert_eq!(world.traversals(), out.time);
    assert_eq!(out.trace.len() as u64, out.time);
    assert!(out.trace.last().unwrap().treasure);
    // encodings are read at the milestones, in order, until the treasure
    // turns up (possibly early, e.g. during a length-3 exploration)
    let cps = world.checkpoints();
    assert!(plan.milestones.starts_with(cps), "{cps:?}\n{}", plan.to_text());
    (plan, out.time)
}

fn hub_path(delta: usize, depth: usize, hubs: &[usize], decoys: &[usize], seed: u64) -> Instance {
    let mut p = HubPathParams::new(delta, depth, hubs.to_vec());
    p.decoys = decoys.to_vec();
    generate(&GeneratorKind::HubPath(p), seed).unwrap()
}

#[test]
fn every_case_on_hub_paths() {
    let mut seen = std::collections::BTreeSet::new();
    let layouts: &[(&[usize], &[usize])] = &[
        (&[0], &[]),
        (&[0, 3], &[]),
        (&[0, 4, 9, 13], &[]),
        (&[0, 6], &[]),
        (&[1], &[]),
        (&[1, 5], &[]),
        (&[1, 7, 8, 20], &[]),
        (&[], &[0]),
        (&[2], &[]),
        (&[2, 6, 30], &[]),
        (&[], &[1]),
        (&[3], &[]),
        (&[4], &[]),
        (&[5, 8, 11, 14], &[]),
        (&[9, 25], &[]),
        (&[], &[7]),
        (&[], &[]),
        (&[33], &[]),
    ];
    for delta in [1 << 10, 1 << 11] {
        for &(hubs, decoys) in layouts {
            for depth in [3, 5, 8, 17, 34] {
                if hubs.iter().chain(decoys).any(|&h| h > depth) {
                    continue;
                }
                for seed in 0..3 {
                    let inst = hub_path(delta, depth, hubs, decoys, seed);
                    let (plan, _) = solve(&inst);
                    seen.insert(plan.case);
                }
            }
        }
    }
    assert_eq!(seen.len(), 5, "{seen:?}");
}

#[test]
fn dual_lll_start() {
    let mut dual = 0;
    for seed in 0..60 {
        let inst = hub_path(1024, 12, &[4], &[], seed);
        let (plan, _) = solve(&inst);
        assert_eq!(plan.case, CaseTag::LLL);
        if plan.dual {
            dual += 1;
            assert_eq!(plan.segments[0].min_distance, 7);
        }
    }
    assert!(dual > 0);
}

#[test]
fn far_band_trail_length_two() {
    // H with the next milestone at distance 8: 3 moves, 2 trail hops, 3 moves
    let inst = hub_path(1024, 12, &[0, 8], &[], 5);
    let (plan, _) = solve(&inst);
    let seg = &plan.segments[0];
    assert!(seg.is_far());
    assert_eq!(seg.trail, vec![4, 5]);
    assert_eq!(seg.encoded, vec![0, 1, 2, 5, 6, 7]);
}

#[test]
fn final_segment_short_and_far() {
    let (plan, _) = solve(&hub_path(1024, 9, &[0, 7], &[], 2));
    let last = plan.segments.last().unwrap();
    assert!(last.is_final && last.marker() == (true, true) && last.encoded == vec![7, 8]);
    let (plan, _) = solve(&hub_path(1024, 20, &[0, 7], &[], 2));
    let last = plan.segments.last().unwrap();
    assert!(last.is_far());
    assert_eq!(last.encoded, vec![7, 8, 9]);
    assert_eq!(last.trail, (11..20).collect::<Vec<_>>());
}

#[test]
fn all_light_families() {
    for delta in 3..=6 {
        for depth in 1..=4 {
            let leaves = delta * (delta - 1usize).pow(depth as u32 - 1);
            for leaf in (0..leaves).step_by(leaves / 7 + 1) {
                let inst = generate(&GeneratorKind::CompleteTree { delta, depth, leaf }, 0).unwrap();
                let (plan, _) = solve(&inst);
                assert_eq!(plan.case, CaseTag::AllLight);
            }
        }
    }
    for seed in 0..40 {
        let inst = generate(&GeneratorKind::RandomConnected { nodes: 60, max_degree: 5 }, seed).unwrap();
        solve(&inst);
    }
}

#[test]
fn deterministic_traces() {
    let inst = hub_path(2048, 30, &[2, 9, 17], &[], 11);
    let (pebbles, _) = place_pebbles(&inst).unwrap();
    let a = run(&mut World::new(&inst, &pebbles), &AgentConfig::default()).unwrap();
    let b = run(&mut World::new(&inst, &pebbles), &AgentConfig::default()).unwrap();
    assert_eq!(a, b);
}

/// Start `s` with neighbors a = s(0), b = s(1), a heavy w and the path head.
/// w is adjacent to a and b through the given ports, so both markers fall
/// inside w's five-copy layout.
fn crowded(heavy_layer: usize, pa: usize, pb: usize, depth: usize) -> Instance {
    let delta = 1024;
    let (s, a, b, w) = (0, 1, 2, 3);
    let mut edges = vec![(s, 0, a, 0), (s, 1, b, 0)];
    let mut next = 4;
    // path s -> x_1 -> ... -> x_depth
    let mut prev = (s, 2 + usize::from(heavy_layer == 1));
    let mut path = Vec::new();
    for _ in 0..depth {
        let x = next;
        next += 1;
        edges.push((prev.0, prev.1, x, 0));
        path.push(x);
        prev = (x, 1);
    }
    let mut w_ports: Vec<Option<usize>> = vec![None; delta];
    w_ports[pa] = Some(a);
    w_ports[pb] = Some(b);
    let parent_port = (0..delta).find(|p| w_ports[*p].is_none()).unwrap();
    if heavy_layer == 1 {
        edges.push((s, 2, w, parent_port));
    } else {
        // w two steps out: s -> c -> w, with a and b as extra neighbors
        let c = next;
        next += 1;
        edges.push((s, 3, c, 0));
        edges.push((c, 1, w, parent_port));
    }
    w_ports[parent_port] = Some(usize::MAX);
    edges.push((a, 1, w, pa));
    edges.push((b, 1, w, pb));
    for (p, slot) in w_ports.iter().enumerate() {
        if slot.is_none() {
            edges.push((w, p, next, 0));
            next += 1;
        }
    }
    Instance::new(PortLabeledGraph::from_edges(next, &edges).unwrap(), s, *path.last().unwrap()).unwrap()
}

fn crowded_sweep(heavy_layer: usize, case: CaseTag) {
    let probe = crowded(heavy_layer, 900, 901, 14);
    let (_, plan) = place_pebbles(&probe).unwrap();
    assert_eq!(plan.case, case);
    let seg = &plan.segments[0];
    assert_eq!(seg.layout, Layout::FiveCopy);
    let slots = seg.required_slots;
    let mut runs = 0;
    for pa in 0..slots {
        for pb in (0..slots).filter(|pb| (pb + pa) % 5 == 0 && *pb != pa) {
            let inst = crowded(heavy_layer, pa, pb, 14);
            let (pebbles, plan) = place_pebbles(&inst).unwrap();
            assert_eq!(plan.segments[0].required_slots, slots);
            let out = run(&mut World::new(&inst, &pebbles), &AgentConfig::default());
            assert!(out.is_ok(), "s(0) at {pa}, s(1) at {pb}: {:?}", out.err().map(|e| e.error));
            runs += 1;
        }
    }
    assert!(runs > 100);
}

#[test]
fn five_copy_survives_both_markers_lh() {
    crowded_sweep(1, CaseTag::LH);
}

#[test]
fn five_copy_survives_both_markers_llh() {
    crowded_sweep(2, CaseTag::LLH);
}

#[test]
fn removed_pebble_fails_gracefully() {
    let inst = hub_path(1024, 16, &[0, 6], &[], 3);
    let (pebbles, plan) = place_pebbles(&inst).unwrap();
    let mut failures = 0;
    for &v in &pebbles.pebbled {
        let mut broken = pebbles.clone();
        broken.remove(v);
        if !check_plan(&inst, &broken, &plan).is_empty() {
            let cfg = AgentConfig { step_cap: 200_000 };
            match run(&mut World::new(&inst, &broken), &cfg) {
                Ok(out) => assert!(out.found),
                Err(e) => {
                    assert!(!e.trace.is_empty() || matches!(e.error, AgentError::Codec(_)));
                    failures += 1;
                }
            }
        }
    }
    assert!(failures > 0);
}

#[test]
fn no_pebbles_means_no_milestones_found() {
    let inst = hub_path(1024, 10, &[0], &[], 0);
    let empty = PebbleConfig::new();
    let out = run(&mut World::new(&inst, &empty), &AgentConfig { step_cap: 100_000 });
    // case L-L-L guess from an empty start: it explores and then fails to decode
    assert!(out.is_err());
}
