use std::cmp::Ordering;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Vc,
    Nd,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "brute",
            Method::Vc => "vc",
            Method::Nd => "nd",
        })
    }
}

/// A certified consistent subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Ascending.
    pub vertices: Vec<Vertex>,
    pub method: Method,
    /// Checker verdict on `vertices`.
    pub verified: bool,
    /// False when the producing search was cut short or randomized.
    pub optimal: bool,
    /// Search nodes visited: subsets, guesses or scenarios depending on `method`.
    pub explored: u64,
}

impl Solution {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance has {n} vertices, limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("parameter {name} = {value} exceeds limit {limit}")]
    ParameterTooLarge {
        name: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("no guess produced a verified candidate")]
    NoFeasibleGuess,
    #[error("time limit reached")]
    Timeout { best: Option<Solution> },
}

/// Optional wall-clock limit shared by the solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Self(None)
    }

    pub fn after(budget: Duration) -> Self {
        Self(Some(Instant::now() + budget))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}

/// Canonical order on candidate sets: smaller first, then lexicographic on the
/// ascending vertex lists. Reductions over parallel work use this so that
/// results do not depend on scheduling.
pub fn canonical_cmp(a: &[Vertex], b: &[Vertex]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Keeps the canonically smaller of two optional candidates.
pub(crate) fn keep_best(a: Option<Vec<Vertex>>, b: Option<Vec<Vertex>>) -> Option<Vec<Vertex>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if canonical_cmp(&b, &a).is_lt() { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}
