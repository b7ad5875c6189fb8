//! Verification, benchmarking and the lower-bound workbench.

pub mod bench;
pub mod lowerbound;
pub mod verify;

pub use bench::{grid, run_grid, summarize, write_csv, BenchRecord, GridPoint, GridPreset, Summary};
pub use lowerbound::{enumerate_walks, lowerbound_counts, DecisionTree, LowerBoundCounts};
pub use verify::{verify, VerifyOptions, VerifyReport};
