//! Exact fixed-parameter solver for d-bounded-degree vertex deletion: delete
//! at most `k` vertices so that every remaining vertex has degree at most `d`.
//!
//! The search in [`search`] branches on the structures found by
//! [`structures`]; [`analysis`] computes branching factors of the resulting
//! recurrences and [`oracle`] provides brute-force ground truth and instance
//! generators for testing.

pub mod analysis;
pub mod cli;
pub mod graph;
pub mod oracle;
pub mod search;
pub mod structures;

pub use graph::{validate_solution, Graph, GraphError, Instance, Solution, UndoToken, Vertex};
pub use search::{solve_decision, solve_minimum, solve_minimum_bounded, Outcome, SearchStats};
