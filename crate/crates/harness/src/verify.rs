//! End-to-end check of one instance: place, audit the plan, run, audit the run.

use std::fmt::{self, Write as _};

use pebblehunt_core::agent::{run, AgentConfig, AuditedView, World};
use pebblehunt_core::graph::{Instance, NodeId, PebbleConfig};
use pebblehunt_core::oracle::{check_plan, place_pebbles_with, CaseTag, OracleConfig};

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub oracle: OracleConfig,
    pub agent: AgentConfig,
    /// Run the agent on these pebbles instead of the oracle's.
    pub pebbles: Option<PebbleConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub case: Option<CaseTag>,
    pub delta: usize,
    pub distance: usize,
    pub found: bool,
    pub time: u64,
    pub pebbles: usize,
    pub milestones: Vec<NodeId>,
    pub checkpoints: Vec<NodeId>,
    /// Largest slot count any encoding needed.
    pub max_required_slots: usize,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

impl VerifyReport {
    /// Every milestone reached so far was the planned one, in order.
    pub fn milestones_ok(&self) -> bool {
        self.milestones.starts_with(&self.checkpoints)
    }

    pub fn passed(&self) -> bool {
        self.found && self.milestones_ok() && self.violations.is_empty() && self.errors.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let case = self.case.map_or("-".to_string(), |c| c.to_string());
        let _ = writeln!(out, "case {case} delta {} distance {}", self.delta, self.distance);
        let _ = writeln!(out, "found {} time {} pebbles {}", self.found, self.time, self.pebbles);
        let _ = writeln!(
            out,
            "milestones {}/{} reached in order: {}",
            self.checkpoints.len(),
            self.milestones.len(),
            if self.milestones_ok() { "yes" } else { "no" }
        );
        for (tag, list) in [("violation", &self.violations), ("warning", &self.warnings), ("error", &self.errors)] {
            for line in list {
                let _ = writeln!(out, "{tag} {line}");
            }
        }
        let _ = write!(out, "{}", if self.passed() { "PASS" } else { "FAIL" });
        f.write_str(&out)
    }
}

/// Never panics on bad placements: every failure ends up in the report.
pub fn verify(instance: &Instance, options: &VerifyOptions) -> VerifyReport {
    let mut report = VerifyReport {
        delta: instance.graph.max_degree(),
        distance: instance.distance(),
        ..Default::default()
    };
    let (oracle_pebbles, plan) = match place_pebbles_with(instance, &options.oracle) {
        Ok(x) => x,
        Err(e) => {
            report.errors.push(format!("placement: {e}"));
            return report;
        }
    };
    report.case = Some(plan.case);
    report.milestones = plan.milestones.clone();
    report.max_required_slots = plan.segments.iter().map(|s| s.required_slots).max().unwrap_or(0);
    report.warnings = plan.warnings.iter().map(|w| w.to_string()).collect();
    let pebbles = options.pebbles.as_ref().unwrap_or(&oracle_pebbles);
    report.pebbles = pebbles.len();
    report.violations = check_plan(instance, pebbles, &plan).iter().map(|v| v.to_string()).collect();

    let mut view = AuditedView::new(World::new(instance, pebbles));
    let outcome = run(&mut view, &options.agent);
    report.errors.extend(view.violations().iter().map(|v| format!("contract: {v}")));
    let world = view.into_inner();
    report.checkpoints = world.checkpoints().to_vec();
    match outcome {
        Ok(out) => {
            report.found = out.found && world.position() == instance.treasure;
            report.time = out.time;
            if out.time != world.traversals() {
                report.errors.push(format!("trace has {} steps, world counted {}", out.time, world.traversals()));
            }
        }
        Err(failure) => {
            report.time = failure.trace.len() as u64;
            report.errors.push(format!("agent: {failure}"));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use pebblehunt_core::graph::{generate, GeneratorKind, HubPathParams};

    #[test]
    fn tree_instance_passes() {
        let inst = generate(&GeneratorKind::CompleteTree { delta: 3, depth: 4, leaf: 20 }, 0).unwrap();
        let report = verify(&inst, &VerifyOptions::default());
        assert!(report.passed(), "{report}");
        assert!(report.warnings.is_empty());
        assert_eq!(report.case, Some(CaseTag::AllLight));
    }

    #[test]
    fn h_reaches_second_milestone_at_three() {
        let inst = generate(&GeneratorKind::HubPath(HubPathParams::new(1024, 9, vec![0, 3])), 4).unwrap();
        let report = verify(&inst, &VerifyOptions::default());
        assert!(report.passed(), "{report}");
        assert_eq!(report.checkpoints, vec![0, 3]);
    }

    #[test]
    fn corrupted_pebbles_fail() {
        let inst = generate(&GeneratorKind::HubPath(HubPathParams::new(1024, 9, vec![0, 3])), 4).unwrap();
        let (mut pebbles, _) = pebblehunt_core::place_pebbles(&inst).unwrap();
        let s = inst.start;
        let victim = (2..).map(|p| inst.graph.neighbor(s, p)).find(|v| pebbles.has(*v)).unwrap();
        pebbles.remove(victim);
        let options = VerifyOptions {
            pebbles: Some(pebbles),
            agent: AgentConfig { step_cap: 1_000_000 },
            ..Default::default()
        };
        let report = verify(&inst, &options);
        assert!(!report.passed());
        assert!(!report.violations.is_empty());
        assert!(report.to_string().ends_with("FAIL"));
    }
}
