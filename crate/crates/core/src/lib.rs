//! Exact solvers for the minimum consistent subset problem on vertex-colored
//! graphs under the shortest-path metric.
//!
//! Given a connected graph with a vertex coloring, a subset `S` is
//! *consistent* when every vertex finds its own color among its nearest
//! neighbors in `S`. This crate computes smallest consistent subsets with
//!
//! * [`oracle`]: exhaustive search for small graphs,
//! * [`vc`]: a guess-and-hit algorithm whose cost is governed by the vertex
//!   cover number,
//! * [`nd`]: a label-coding algorithm whose cost is governed by the number of
//!   twin classes (neighborhood diversity).
//!
//! Every reported solution is re-checked by [`graph::is_consistent`].
//!
//! ```
//! use mcs_core::graph::build_graph;
//! use mcs_core::vc::solve_vc;
//!
//! // 0 - 1 - 2 colored red, blue, red: every vertex is needed.
//! let g = build_graph(&[(0, 1), (1, 2)], &[1, 2, 1]).unwrap();
//! let s = solve_vc(&g, None).unwrap();
//! assert_eq!(s.vertices, vec![0, 1, 2]);
//! ```

pub mod graph;
pub mod hitting_set;
pub mod instance;
pub mod nd;
pub mod oracle;
pub mod solution;
pub mod structural;
pub mod vc;

pub use graph::{build_graph, ColoredGraph, DistanceMatrix, Vertex};
pub use solution::{Deadline, Method, Solution, SolveError};
