//! The mobile agent.
//!
//! The agent sees the world only through [`AgentView`]: the degree of the node
//! it stands on, whether that node holds a pebble or the treasure, and the
//! port it arrived through. Time is the number of edge traversals; looking at
//! a neighbor costs two (there and back).

mod audit;
mod world;

pub use audit::AuditedView;
pub use world::World;

use std::convert::Infallible;
use std::fmt::Write as _;

use thiserror::Error;

use crate::codec::{decode_port, inverse_transform, split_on_double_zero, BitString, CodecError};
use crate::graph::Port;

/// What an agent may observe and do. Nothing here identifies a node.
pub trait AgentView {
    fn current_degree(&self) -> usize;
    fn pebble_here(&self) -> bool;
    fn treasure_here(&self) -> bool;
    /// Leaves through `port` and returns the port of arrival at the new node.
    fn move_via(&mut self, port: Port) -> Port;
    /// Write-only notice that the agent is about to read an encoding here.
    /// Simulators may record where that happens; nothing flows back.
    fn checkpoint(&mut self) {}
}

impl<V: AgentView + ?Sized> AgentView for &mut V {
    fn current_degree(&self) -> usize {
        (**self).current_degree()
    }
    fn pebble_here(&self) -> bool {
        (**self).pebble_here()
    }
    fn treasure_here(&self) -> bool {
        (**self).treasure_here()
    }
    fn move_via(&mut self, port: Port) -> Port {
        (**self).move_via(port)
    }
    fn checkpoint(&mut self) {
        (**self).checkpoint()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentConfig {
    /// Traversals allowed before the run is abandoned.
    pub step_cap: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self { step_cap: 1_000_000_000 }
    }
}

/// One traversal as the agent experienced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub out_port: Port,
    pub in_port: Port,
    pub pebble: bool,
    pub treasure: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub found: bool,
    pub time: u64,
    pub trace: Vec<TraceStep>,
}

impl RunOutcome {
    pub fn trace_text(&self) -> String {
        trace_text(&self.trace)
    }
}

/// `step <n> out <p> in <q> pebble <0|1> treasure <0|1>`, one line per traversal.
pub fn trace_text(trace: &[TraceStep]) -> String {
    let mut out = String::new();
    for (n, t) in trace.iter().enumerate() {
        let _ = writeln!(
            out,
            "step {} out {} in {} pebble {} treasure {}",
            n + 1,
            t.out_port,
            t.in_port,
            u8::from(t.pebble),
            u8::from(t.treasure)
        );
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgentError {
    #[error("step budget of {0} traversals exhausted")]
    BudgetExhausted(u64),
    #[error("scan ran past the last port of a degree-{degree} host")]
    ScanOverrun { degree: usize },
    #[error("{count} pebbled neighbors while following a trail")]
    AmbiguousTrail { count: usize },
    #[error("start node has degree {0}, need at least 2")]
    StartDegree(usize),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{error} (after {} traversals)", trace.len())]
pub struct AgentFailure {
    pub error: AgentError,
    pub trace: Vec<TraceStep>,
}

/// Why the walk stopped early.
enum Halt {
    Found,
    Failed(AgentError),
}

impl From<CodecError> for Halt {
    fn from(e: CodecError) -> Self {
        Halt::Failed(e.into())
    }
}

impl From<AgentError> for Halt {
    fn from(e: AgentError) -> Self {
        Halt::Failed(e)
    }
}

type Flow<T> = Result<T, Halt>;

/// Runs the treasure hunt from the view's current node.
pub fn run<V: AgentView + ?Sized>(view: &mut V, config: &AgentConfig) -> Result<RunOutcome, AgentFailure> {
    let mut w = Walker {
        view,
        trace: Vec::new(),
        cap: config.step_cap,
    };
    let halt = if w.view.treasure_here() {
        Halt::Found
    } else {
        match w.hunt() {
            Err(h) => h,
            Ok(never) => match never {},
        }
    };
    match halt {
        Halt::Found => Ok(RunOutcome {
            found: true,
            time: w.trace.len() as u64,
            trace: w.trace,
        }),
        Halt::Failed(error) => Err(AgentFailure { error, trace: w.trace }),
    }
}

/// Reads neighbor pebbles from `start_port` upward in aligned pairs until
/// `stop_blanks` consecutive empty neighbors. Returns the bits before the
/// blank run and the number of neighbors probed, or `None` if the treasure
/// turned up during the scan.
pub fn scan_neighbor_string<V: AgentView + ?Sized>(
    view: &mut V,
    start_port: Port,
    stop_blanks: usize,
) -> Result<Option<(BitString, usize)>, AgentError> {
    let mut w = Walker {
        view,
        trace: Vec::new(),
        cap: u64::MAX,
    };
    match w.scan(start_port, stop_blanks.div_ceil(2).max(1), false) {
        Ok(r) => Ok(Some(r)),
        Err(Halt::Found) => Ok(None),
        Err(Halt::Failed(e)) => Err(e),
    }
}

/// Reads a five-copy layout starting at port 0 of the current node and
/// returns the majority segment with its count (`None`: treasure seen).
pub fn read_five_copy<V: AgentView + ?Sized>(view: &mut V) -> Result<Option<(BitString, usize)>, AgentError> {
    let mut w = Walker {
        view,
        trace: Vec::new(),
        cap: u64::MAX,
    };
    match w.scan(0, 2, true) {
        Ok((raw, _)) => Ok(Some(
            pick_majority(&split_on_double_zero(&raw)).ok_or(CodecError::EmptyInput)?,
        )),
        Err(Halt::Found) => Ok(None),
        Err(Halt::Failed(e)) => Err(e),
    }
}

/// Most frequent segment; ties go to the longer segment, then to the earlier one.
/// Returns the winner and its count.
fn pick_majority(segments: &[BitString]) -> Option<(BitString, usize)> {
    let mut best: Option<(&BitString, usize)> = None;
    for (i, seg) in segments.iter().enumerate() {
        if segments[..i].contains(seg) {
            continue;
        }
        let count = segments[i..].iter().filter(|s| *s == seg).count();
        let better = match best {
            None => true,
            Some((b, c)) => count > c || (count == c && seg.len() > b.len()),
        };
        if better {
            best = Some((seg, count));
        }
    }
    best.map(|(s, c)| (s.clone(), c))
}

struct Walker<'v, V: ?Sized> {
    view: &'v mut V,
    trace: Vec<TraceStep>,
    cap: u64,
}

impl<V: AgentView + ?Sized> Walker<'_, V> {
    fn degree(&self) -> usize {
        self.view.current_degree()
    }

    fn step(&mut self, port: Port) -> Flow<Port> {
        if self.trace.len() as u64 >= self.cap {
            return Err(AgentError::BudgetExhausted(self.cap).into());
        }
        let in_port = self.view.move_via(port);
        let treasure = self.view.treasure_here();
        self.trace.push(TraceStep {
            out_port: port,
            in_port,
            pebble: self.view.pebble_here(),
            treasure,
        });
        if treasure {
            Err(Halt::Found)
        } else {
            Ok(in_port)
        }
    }

    /// Looks at neighbor `port` and comes back: (pebble there, its degree).
    fn probe(&mut self, port: Port) -> Flow<(bool, usize)> {
        let back = self.step(port)?;
        let seen = (self.view.pebble_here(), self.degree());
        self.step(back)?;
        Ok(seen)
    }

    /// Follows `walk`, returning the arrival ports for the way back.
    fn follow(&mut self, walk: &[Port]) -> Flow<Vec<Port>> {
        walk.iter().map(|&p| self.step(p)).collect()
    }

    fn retrace(&mut self, back: &[Port]) -> Flow<()> {
        for &q in back.iter().rev() {
            self.step(q)?;
        }
        Ok(())
    }

    fn hunt(&mut self) -> Flow<Infallible> {
        let deg = self.degree();
        if deg < 2 {
            return Err(AgentError::StartDegree(deg).into());
        }
        let (b0, _) = self.probe(0)?;
        let (b1, _) = self.probe(1)?;
        match (b0, b1) {
            (true, true) => self.subroutine_h(),
            (true, false) => self.subroutine_lh(),
            (false, true) => self.subroutine_llh(),
            (false, false) => self.subroutine_lll(),
        }
    }

    fn subroutine_h(&mut self) -> Flow<Infallible> {
        self.view.checkpoint();
        let (gh, _) = self.scan(2, 1, false)?;
        let gamma = inverse_transform(&gh)?;
        self.find_next_milestone(&gamma, 3)?;
        self.progress()
    }

    fn subroutine_lh(&mut self) -> Flow<Infallible> {
        let walk = self.explore(1)?;
        let gamma = self.read_remote(&walk, true)?;
        self.find_next_milestone(&gamma, 4)?;
        self.progress()
    }

    fn subroutine_llh(&mut self) -> Flow<Infallible> {
        let walk = self.explore(2)?;
        let gamma = self.read_remote(&walk, true)?;
        self.find_next_milestone(&gamma, 5)?;
        self.progress()
    }

    fn subroutine_lll(&mut self) -> Flow<Infallible> {
        // s(0) and s(1) are already known to be empty
        let (_, moved) = self.follow_trail(None, 2)?;
        if moved || self.view.pebble_here() {
            return self.phase_from_origin();
        }
        // v_1 may be s(0) or s(1), which cannot carry a pebble
        for p0 in 0..2 {
            let back = self.step(p0)?;
            let (_, moved) = self.follow_trail(Some(back), 0)?;
            if moved {
                return self.phase_from_origin();
            }
            self.step(back)?;
        }
        let mut best: Option<(usize, Vec<Port>)> = None;
        for p0 in 0..2 {
            let back = self.step(p0)?;
            let mut walk = vec![p0];
            self.explore_into(3, &mut walk, &mut best)?;
            self.step(back)?;
        }
        let walk = best.expect("s(0) has at least one neighbor").1;
        let gamma = self.read_remote(&walk, false)?;
        self.find_next_milestone(&gamma, 7)?;
        self.progress()
    }

    /// From the end of the approach trail: the first milestone is the
    /// heaviest node three steps away.
    fn phase_from_origin(&mut self) -> Flow<Infallible> {
        let walk = self.explore(3)?;
        let gamma = self.read_remote(&walk, false)?;
        self.find_next_milestone(&gamma, 6)?;
        self.progress()
    }

    fn progress(&mut self) -> Flow<Infallible> {
        loop {
            self.view.checkpoint();
            let (gh, _) = self.scan(0, 1, false)?;
            let gamma = inverse_transform(&gh)?;
            self.find_next_milestone(&gamma, 3)?;
        }
    }

    /// Walks to the host at the end of `walk`, reads its encoding and walks back.
    fn read_remote(&mut self, walk: &[Port], five_copy: bool) -> Flow<BitString> {
        let back = self.follow(walk)?;
        self.view.checkpoint();
        let gh = if five_copy {
            let (raw, _) = self.scan(0, 2, true)?;
            let segments = split_on_double_zero(&raw);
            pick_majority(&segments).ok_or(CodecError::EmptyInput)?.0
        } else {
            self.scan(0, 1, false)?.0
        };
        self.retrace(&back)?;
        Ok(inverse_transform(&gh)?)
    }

    /// Every walk of `len` edges from here, depth-first in port order; returns
    /// the first walk that ends on a node of maximum degree.
    fn explore(&mut self, len: usize) -> Flow<Vec<Port>> {
        let mut best = None;
        self.explore_into(len, &mut Vec::new(), &mut best)?;
        Ok(best.map(|(_, w)| w).unwrap_or_default())
    }

    fn explore_into(&mut self, len: usize, walk: &mut Vec<Port>, best: &mut Option<(usize, Vec<Port>)>) -> Flow<()> {
        for p in 0..self.degree() {
            let back = self.step(p)?;
            walk.push(p);
            if len == 1 {
                let d = self.degree();
                if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
                    *best = Some((d, walk.clone()));
                }
            } else {
                self.explore_into(len - 1, walk, best)?;
            }
            walk.pop();
            self.step(back)?;
        }
        Ok(())
    }

    /// Pair-aligned scan; see [`scan_neighbor_string`]. With `five_copy`, a
    /// blank run only ends the scan once some segment has appeared three
    /// times, or after four blank pairs.
    fn scan(&mut self, start: Port, stop_pairs: usize, five_copy: bool) -> Flow<(BitString, usize)> {
        let degree = self.degree();
        let mut bits = Vec::new();
        let mut run = 0;
        let mut port = start;
        loop {
            if port + 2 > degree {
                return Err(AgentError::ScanOverrun { degree }.into());
            }
            let (a, _) = self.probe(port)?;
            let (b, _) = self.probe(port + 1)?;
            port += 2;
            bits.extend([a, b]);
            run = if a || b { 0 } else { run + 1 };
            if run >= stop_pairs {
                let body = BitString::from_bits(bits[..bits.len() - 2 * run].to_vec());
                let settled = !five_copy
                    || run >= 2 * stop_pairs
                    || pick_majority(&split_on_double_zero(&body)).is_some_and(|(_, c)| c >= 3);
                if settled {
                    return Ok((body, port - start));
                }
            }
        }
    }

    /// Repeatedly probes every neighbor except the arrival edge and moves to
    /// the single pebbled one. Returns the last arrival port and whether any
    /// move happened. `first_port` applies to the first node only.
    fn follow_trail(&mut self, mut arrival: Option<Port>, first_port: Port) -> Flow<(Option<Port>, bool)> {
        let mut from = first_port;
        let mut moved = false;
        loop {
            let mut hits = Vec::new();
            for p in from..self.degree() {
                if Some(p) != arrival && self.probe(p)?.0 {
                    hits.push(p);
                }
            }
            from = 0;
            match hits[..] {
                [] => return Ok((arrival, moved)),
                [p] => {
                    arrival = Some(self.step(p)?);
                    moved = true;
                }
                _ => return Err(AgentError::AmbiguousTrail { count: hits.len() }.into()),
            }
        }
    }

    fn decode_step(&mut self, gamma: &BitString, offset: &mut usize) -> Flow<Port> {
        let (p, next) = decode_port(gamma, *offset, self.degree())?;
        *offset = next;
        self.step(p)
    }

    fn find_next_milestone(&mut self, gamma: &BitString, min_distance: usize) -> Flow<()> {
        let (a, b) = match (gamma.get(0), gamma.get(1)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(CodecError::CodeUnderrun {
                    offset: 0,
                    needed: 2,
                    len: gamma.len(),
                }
                .into())
            }
        };
        let mut offset = 2;
        let lead = match (a, b) {
            (true, true) | (false, false) => min_distance,
            (true, false) => min_distance + 1,
            (false, true) => min_distance + 2,
        };
        let mut arrival = None;
        for _ in 0..lead {
            arrival = Some(self.decode_step(gamma, &mut offset)?);
        }
        if (a, b) == (false, false) {
            self.follow_trail(arrival, 0)?;
            for _ in 0..3 {
                self.decode_step(gamma, &mut offset)?;
            }
        }
        Ok(())
    }
}
