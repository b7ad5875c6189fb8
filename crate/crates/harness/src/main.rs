use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pebblehunt::bench::{grid, run_grid, summarize, write_csv, GridPreset};
use pebblehunt::lowerbound::{enumerate_walks, lowerbound_counts, DecisionTree};
use pebblehunt::verify::{verify, VerifyOptions};
use pebblehunt_core::graph::{generate, GeneratorKind, HubPathParams, Instance, PebbleConfig};
use pebblehunt_core::{place_pebbles, run, AgentConfig, World};

#[derive(Parser)]
#[command(name = "pebblehunt", version, about = "Pebble-guided treasure hunt: generate, place, run, verify, bench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    CompleteTree,
    HubPath,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        delta: usize,
        /// Tree height, path length, or node count for `random`.
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treasure leaf for complete trees.
        #[arg(long, default_value_t = 0)]
        leaf: usize,
        /// Comma-separated hub positions for hub paths.
        #[arg(long, value_delimiter = ',')]
        hubs: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        decoys: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the oracle's placement.
    Place {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out_pebbles: PathBuf,
        #[arg(long)]
        out_plan: Option<PathBuf>,
    },
    /// Run the agent on a given placement.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        pebbles: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = AgentConfig::default().step_cap)]
        step_cap: u64,
    },
    /// Place, check and run; optionally against a substitute pebble file.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        pebbles: Option<PathBuf>,
    },
    /// Parameter sweep with CSV output.
    Bench {
        #[arg(long, default_value = "acceptance")]
        grid: GridPreset,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Leaf counts versus reachable sequences on complete trees.
    Lowerbound {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        dmax: usize,
        /// Also replay 100 random decision trees of this depth.
        #[arg(long)]
        enumerate: Option<usize>,
    },
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_pebbles(path: &Path) -> Result<PebbleConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PebbleConfig::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Ok(true) iff every check passed.
fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Generate { kind, delta, depth, seed, leaf, hubs, decoys, out } => {
            let kind = match kind {
                Kind::CompleteTree => GeneratorKind::CompleteTree { delta, depth, leaf },
                Kind::HubPath => {
                    let mut p = HubPathParams::new(delta, depth, hubs);
                    p.decoys = decoys;
                    GeneratorKind::HubPath(p)
                }
                Kind::Random => GeneratorKind::RandomConnected { nodes: depth, max_degree: delta },
            };
            let inst = generate(&kind, seed)?;
            write(&out, &inst.to_text())?;
            println!(
                "{} nodes, max degree {}, distance {}",
                inst.graph.node_count(),
                inst.graph.max_degree(),
                inst.distance()
            );
            Ok(true)
        }
        Command::Place { instance, out_pebbles, out_plan } => {
            let inst = read_instance(&instance)?;
            let (pebbles, plan) = place_pebbles(&inst)?;
            write(&out_pebbles, &pebbles.to_text())?;
            if let Some(p) = out_plan {
                write(&p, &plan.to_text())?;
            }
            println!("case {} pebbles {} warnings {}", plan.case, pebbles.len(), plan.warnings.len());
            Ok(true)
        }
        Command::Run { instance, pebbles, trace, step_cap } => {
            let inst = read_instance(&instance)?;
            let pebbles = read_pebbles(&pebbles)?;
            let mut world = World::new(&inst, &pebbles);
            let (found, steps) = match run(&mut world, &AgentConfig { step_cap }) {
                Ok(out) => {
                    println!("found {} time {}", out.found, out.time);
                    (out.found && world.position() == inst.treasure, out.trace)
                }
                Err(failure) => {
                    println!("failed: {failure}");
                    (false, failure.trace)
                }
            };
            if let Some(p) = trace {
                write(&p, &pebblehunt_core::agent::trace_text(&steps))?;
            }
            Ok(found)
        }
        Command::Verify { instance, pebbles } => {
            let inst = read_instance(&instance)?;
            let options = VerifyOptions {
                pebbles: pebbles.as_deref().map(read_pebbles).transpose()?,
                ..Default::default()
            };
            let report = verify(&inst, &options);
            println!("{report}");
            Ok(report.passed())
        }
        Command::Bench { grid: preset, seed, csv } => {
            let points = grid(preset, seed);
            let records = run_grid(&points, &VerifyOptions::default())?;
            match csv {
                Some(p) => {
                    let file = fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                    write_csv(&records, file)?;
                }
                None => write_csv(&records, std::io::stdout())?,
            }
            let s = summarize(&records);
            eprintln!(
                "{} instances, max norm_time {:.3}, max norm_pebbles {:.3}, \
                 worst-case time(2D)/time(D) {:.3} (per instance {:.3})",
                s.instances, s.max_norm_time, s.max_norm_pebbles, s.max_doubling_ratio, s.max_instance_doubling_ratio
            );
            Ok(true)
        }
        Command::Lowerbound { delta, dmax, enumerate } => {
            let mut ok = true;
            for d in 3..=dmax {
                let c = lowerbound_counts(delta, d)?;
                println!(
                    "delta {delta} D {d} leaves {} t {} feasible {}",
                    c.leaves, c.t_threshold, c.feasible
                );
                ok &= !c.feasible;
            }
            if let Some(t) = enumerate {
                let d = t.max(1);
                let mut worst = 0;
                for seed in 0..100 {
                    let tree = DecisionTree::random(t, delta, seed);
                    worst = worst.max(enumerate_walks(&tree, delta, d)?.len());
                }
                println!("depth {t}: at most {worst} endpoints over 100 trees (bound {})", 1u64 << t);
                ok &= worst <= 1 << t;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
