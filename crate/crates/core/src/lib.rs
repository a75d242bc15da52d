//! Exact minimum-size path and tree decompositions of bounded width.
//!
//! The solver evaluates the good-pair recurrences for the minimum number of
//! bags, memoizing every subproblem under a canonical form of its
//! isomorphism class so that isomorphic subproblems are solved once. The
//! crate also carries brute-force reference solvers, decomposition
//! validators, and generators for clique-chain gadgets and the
//! 3-dimensional matching hard-instance pipeline.
//!
//! The crate is `no_std` (it needs `alloc`); file formats and the command
//! line live in the `fewbags` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod canon;
pub mod decomp;
pub mod gadgets;
pub mod graph;
pub mod oracle;
pub mod solver;

pub use canon::{CanonKey, Certificate, ColoredGraph, GoodPair};
pub use decomp::{Fingerprint, PathDecomposition, TreeDecomposition, Violation};
pub use graph::{Graph, GraphError, VertexSet};
pub use solver::{Size, SolveStats, Solver, SolverConfig};
