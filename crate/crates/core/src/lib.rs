//! Pebble-guided treasure hunt in anonymous port-labeled graphs.
//!
//! The crate is split along the two sides of the problem:
//!
//! * [`oracle`] knows the whole graph, the start node and the treasure, and
//!   marks nodes with pebbles (at most one per node) so that the pebbles spell
//!   out the port sequence of a shortest path.
//! * [`agent`] is a walker that only sees the degree of its current node,
//!   whether a pebble or the treasure is there, and the port it arrived on. It
//!   decodes the pebbles back into moves.
//!
//! [`graph`] holds the port-labeled world model, generators and the flat text
//! formats; [`codec`] holds the bit-string machinery shared by both sides.

pub mod agent;
pub mod codec;
pub mod graph;
pub mod oracle;

pub use agent::{run, AgentConfig, AgentError, AgentFailure, AgentView, RunOutcome, World};
pub use codec::BitString;
pub use graph::{Instance, NodeId, PebbleConfig, Port, PortLabeledGraph};
pub use oracle::{place_pebbles, CaseTag, MilestonePlan, OracleConfig, ThresholdRule};
