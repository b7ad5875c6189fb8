//! Parameter sweeps measuring time and pebbles against the asymptotic bounds.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use pebblehunt_core::graph::{generate, GeneratorKind, HubPathParams, Instance};
use pebblehunt_core::oracle::{floor_log2, CaseTag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::verify::{verify, VerifyOptions};

/// One grid cell. The hub layout depends only on `(case, d_dist)`; the seed
/// drives the light branching, port shuffles and the optional decoy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoint {
    pub case: CaseTag,
    pub delta: usize,
    pub d_dist: usize,
    pub seed: u64,
}

/// Spacing of the periodic hubs after the first milestone.
const HUB_PERIOD: usize = 7;

impl GridPoint {
    pub fn instance(&self) -> Result<Instance> {
        let d = self.d_dist;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        let with_decoy = rng.gen_bool(0.5);
        let (first, decoys) = match self.case {
            CaseTag::H => (Some(0), vec![]),
            CaseTag::LH if with_decoy => (None, vec![0]),
            CaseTag::LH => (Some(1), vec![]),
            CaseTag::LLH if with_decoy => (None, vec![1]),
            CaseTag::LLH => (Some(2), vec![]),
            CaseTag::LLL => (Some(5.min(d)), vec![]),
            CaseTag::AllLight => {
                // light "hubs" of degree delta < 2^10 on every third node
                let hubs = (1..d).step_by(3).collect();
                let params = HubPathParams::new(self.delta, d, hubs);
                return generate(&GeneratorKind::HubPath(params), self.seed).context("generator");
            }
        };
        let start = first.unwrap_or_else(|| decoys[0] + 1);
        let mut hubs: Vec<usize> = first.into_iter().collect();
        hubs.extend((start + HUB_PERIOD..d).step_by(HUB_PERIOD));
        let mut params = HubPathParams::new(self.delta, d, hubs);
        params.decoys = decoys;
        generate(&GeneratorKind::HubPath(params), self.seed).context("generator")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub delta: usize,
    pub d_dist: usize,
    pub case: CaseTag,
    pub seed: u64,
    pub time: u64,
    pub pebbles: usize,
    pub norm_time: f64,
    pub norm_pebbles: f64,
}

/// `time / (D⌊log₂Δ⌋ + ⌊log₂Δ⌋³)`.
pub fn normalized_time(time: u64, delta: usize, d: usize) -> f64 {
    let l = floor_log2(delta) as f64;
    time as f64 / (d as f64 * l + l.powi(3))
}

/// `pebbles / (D⌊log₂Δ⌋)`.
pub fn normalized_pebbles(pebbles: usize, delta: usize, d: usize) -> f64 {
    pebbles as f64 / (d as f64 * floor_log2(delta) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridPreset {
    /// ≥ 500 instances over every case, Δ ∈ {2¹⁰, 2¹¹, 2¹²} (3..16 for all-light), D ∈ [3, 40].
    Acceptance,
    Smoke,
}

impl FromStr for GridPreset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acceptance" => Ok(GridPreset::Acceptance),
            "smoke" => Ok(GridPreset::Smoke),
            other => bail!("unknown grid {other:?} (expected acceptance or smoke)"),
        }
    }
}

/// Distances used by the acceptance grid; contains the pairs (D, 2D) for the ratio check.
pub const ACCEPTANCE_DISTANCES: [usize; 10] = [3, 5, 8, 10, 13, 16, 20, 26, 32, 40];

pub fn grid(preset: GridPreset, seed: u64) -> Vec<GridPoint> {
    let (deltas, light_deltas, dists, seeds): (&[usize], &[usize], &[usize], u64) = match preset {
        GridPreset::Acceptance => (&[1 << 10, 1 << 11, 1 << 12], &[3, 4, 6, 8, 12, 16], &ACCEPTANCE_DISTANCES, 3),
        GridPreset::Smoke => (&[1 << 10], &[5], &[4, 8], 1),
    };
    let mut points = Vec::new();
    for case in CaseTag::ALL {
        let ds = if case == CaseTag::AllLight { light_deltas } else { deltas };
        for &delta in ds {
            for &d_dist in dists {
                for k in 0..seeds {
                    points.push(GridPoint {
                        case,
                        delta,
                        d_dist,
                        seed: seed.wrapping_add(k),
                    });
                }
            }
        }
    }
    points
}

/// Verifies every point in parallel; records come back in grid order.
/// The first failing point aborts the batch and is named in the error.
pub fn run_grid(points: &[GridPoint], options: &VerifyOptions) -> Result<Vec<BenchRecord>> {
    points
        .par_iter()
        .map(|p| {
            let inst = p.instance()?;
            let report = verify(&inst, options);
            if !report.passed() {
                bail!(
                    "{:?} Δ={} D={} seed={} failed:\n{report}",
                    p.case,
                    p.delta,
                    p.d_dist,
                    p.seed
                );
            }
            let case = report.case.expect("placed");
            if case != p.case {
                bail!("{:?} Δ={} D={} seed={} classified as {case}", p.case, p.delta, p.d_dist, p.seed);
            }
            Ok(BenchRecord {
                delta: report.delta,
                d_dist: report.distance,
                case,
                seed: p.seed,
                time: report.time,
                pebbles: report.pebbles,
                norm_time: normalized_time(report.time, report.delta, report.distance),
                norm_pebbles: normalized_pebbles(report.pebbles, report.delta, report.distance),
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["delta", "d_dist", "case", "seed", "time", "pebbles", "norm_time", "norm_pebbles"])?;
    for r in records {
        w.write_record([
            r.delta.to_string(),
            r.d_dist.to_string(),
            r.case.to_string(),
            r.seed.to_string(),
            r.time.to_string(),
            r.pebbles.to_string(),
            format!("{:.6}", r.norm_time),
            format!("{:.6}", r.norm_pebbles),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub instances: usize,
    pub max_norm_time: f64,
    pub max_norm_pebbles: f64,
    /// Largest `T(Δ, 2D) / T(Δ, D)` where `T` is the worst time over all
    /// instances sharing `(Δ, D)`.
    pub max_doubling_ratio: f64,
    /// Same ratio per (case, Δ, seed) instance pair. Not bounded: a small-D
    /// instance may end early, e.g. when the treasure is itself a hub.
    pub max_instance_doubling_ratio: f64,
}

pub fn summarize(records: &[BenchRecord]) -> Summary {
    let max = |f: fn(&BenchRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
    let mut worst: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for r in records {
        let t = worst.entry((r.delta, r.d_dist)).or_default();
        *t = (*t).max(r.time);
    }
    let ratio = worst
        .iter()
        .filter_map(|(&(delta, d), &t)| worst.get(&(delta, 2 * d)).map(|&t2| t2 as f64 / t as f64))
        .fold(0.0, f64::max);
    let mut per_instance: f64 = 0.0;
    for a in records {
        for b in records {
            if a.case == b.case && a.delta == b.delta && a.seed == b.seed && b.d_dist == 2 * a.d_dist {
                per_instance = per_instance.max(b.time as f64 / a.time as f64);
            }
        }
    }
    Summary {
        instances: records.len(),
        max_norm_time: max(|r| r.norm_time),
        max_norm_pebbles: max(|r| r.norm_pebbles),
        max_doubling_ratio: ratio,
        max_instance_doubling_ratio: per_instance,
    }
}
