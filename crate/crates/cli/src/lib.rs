//! File formats, brute-force enumeration oracles and the command layer for
//! the `toric-flops` binary.

pub mod commands;
pub mod enumerate;
pub mod format;
pub mod graph;

pub use enumerate::{enumerate_all_triangulations, enumerate_triangulations, EnumerateError};
pub use format::{ProblemInput, QueryInput, SequenceJson};
pub use graph::{flop_graph, FlopGraph};
