//! Adaptive causal structure learning with Meek separators.
//!
//! The crate simulates an experimenter who may intervene on single variables
//! of a hidden causal DAG and observe which edge orientations become
//! identifiable. It provides the graph machinery (essential graphs, Meek rule
//! closure, chordal utilities), the interventional oracle, the search
//! algorithms, exact verification numbers for evaluation, random instance
//! generators and an experiment harness.
//!
//! Vertices are `0..n`. Parallel loops run on rayon with the default
//! `parallel` feature and fall back to plain iteration without it.

pub mod algorithms;
pub mod chordal;
pub mod error;
pub mod experiments;
pub mod gen;
pub mod graph;
pub mod io;
pub mod meek;
pub mod oracle;
pub mod par;
pub mod props;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{Dag, EdgeSet, Mark, Pdag, VertexId};
pub use meek::InterventionSet;
pub use oracle::{InterventionOracle, ShiftAssignment, ShiftSem};
