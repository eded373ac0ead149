//! Exhaustive reference solver.
//!
//! Subsets are scanned by increasing size starting at `c` (a consistent subset
//! meets every color class), lexicographically within a size. Candidates that
//! miss a color are skipped before the distance check.

use crate::graph::{all_pairs_distances, is_consistent, ColoredGraph, DistanceMatrix, Vertex};
use crate::solution::{Deadline, Method, Solution, SolveError};

pub const DEFAULT_LIMIT: usize = 20;
pub const DEFAULT_ENUMERATE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub limit: usize,
    pub deadline: Deadline,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            limit: DEFAULT_LIMIT,
            deadline: Deadline::none(),
        }
    }
}

pub fn brute_force_mcs(g: &ColoredGraph) -> Result<Solution, SolveError> {
    brute_force_mcs_with(g, &all_pairs_distances(g), &OracleConfig::default())
}

pub fn brute_force_mcs_with(
    g: &ColoredGraph,
    dist: &DistanceMatrix,
    config: &OracleConfig,
) -> Result<Solution, SolveError> {
    let n = g.n();
    if n > config.limit {
        return Err(SolveError::TooLarge {
            n,
            limit: config.limit,
        });
    }
    let scan = Scanner::new(g, dist);
    let mut explored = 0u64;
    for size in g.num_colors()..=n {
        let mut found = None;
        let outcome = for_each_combination(n, size, |subset| {
            explored += 1;
            if explored.is_multiple_of(4096) && config.deadline.expired() {
                return Step::Abort;
            }
            if scan.consistent(subset) {
                found = Some(subset.to_vec());
                return Step::Stop;
            }
            Step::Continue
        });
        if outcome == Step::Abort {
            return Err(SolveError::Timeout { best: None });
        }
        if let Some(vertices) = found {
            let verified = is_consistent(g, dist, &vertices).consistent;
            return Ok(Solution {
                vertices,
                method: Method::Oracle,
                verified,
                optimal: true,
                explored,
            });
        }
    }
    unreachable!("the full vertex set is always consistent")
}

/// Every minimum consistent subset, lexicographically sorted.
pub fn enumerate_optimal_mcs(g: &ColoredGraph) -> Result<Vec<Solution>, SolveError> {
    enumerate_optimal_mcs_with(g, &all_pairs_distances(g), DEFAULT_ENUMERATE_LIMIT)
}

pub fn enumerate_optimal_mcs_with(
    g: &ColoredGraph,
    dist: &DistanceMatrix,
    limit: usize,
) -> Result<Vec<Solution>, SolveError> {
    let n = g.n();
    if n > limit {
        return Err(SolveError::TooLarge { n, limit });
    }
    let scan = Scanner::new(g, dist);
    let mut explored = 0u64;
    for size in g.num_colors()..=n {
        let mut found = Vec::new();
        for_each_combination(n, size, |subset| {
            explored += 1;
            if scan.consistent(subset) {
                found.push(subset.to_vec());
            }
            Step::Continue
        });
        if !found.is_empty() {
            return Ok(found
                .into_iter()
                .map(|vertices| Solution {
                    vertices,
                    method: Method::Oracle,
                    verified: true,
                    optimal: true,
                    explored,
                })
                .collect());
        }
    }
    unreachable!("the full vertex set is always consistent")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Continue,
    Stop,
    Abort,
}

/// Visits the `size`-subsets of `0..n` in lexicographic order.
fn for_each_combination(n: usize, size: usize, mut visit: impl FnMut(&[Vertex]) -> Step) -> Step {
    if size > n {
        return Step::Continue;
    }
    let mut idx: Vec<Vertex> = (0..size).collect();
    loop {
        match visit(&idx) {
            Step::Continue => {}
            other => return other,
        }
        let Some(i) = (0..size).rev().find(|&i| idx[i] != i + n - size) else {
            return Step::Continue;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct Scanner<'a> {
    g: &'a ColoredGraph,
    dist: &'a DistanceMatrix,
    all_colors: u64,
}

impl<'a> Scanner<'a> {
    fn new(g: &'a ColoredGraph, dist: &'a DistanceMatrix) -> Self {
        let all_colors = (1..=g.num_colors() as u32).fold(0u64, |acc, c| acc | color_bit(c));
        Self {
            g,
            dist,
            all_colors,
        }
    }

    fn consistent(&self, subset: &[Vertex]) -> bool {
        let present = subset
            .iter()
            .fold(0u64, |acc, &u| acc | color_bit(self.g.color(u)));
        if present & self.all_colors != self.all_colors {
            return false;
        }
        (0..self.g.n()).all(|v| {
            let row = self.dist.row(v);
            let own = self.g.color(v);
            let (mut any, mut same) = (u32::MAX, u32::MAX);
            for &u in subset {
                any = any.min(row[u]);
                if self.g.color(u) == own {
                    same = same.min(row[u]);
                }
            }
            any == same
        })
    }
}

/// Colors above 64 share a bit; the mask is only a pre-filter.
fn color_bit(c: u32) -> u64 {
    1u64 << ((c - 1) % 64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::graph::fixtures::*;

    #[test]
    fn combination_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |s| {
            seen.push(s.to_vec());
            Step::Continue
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn oracle_examples() {
        let s = brute_force_mcs(&p3_rbr()).unwrap();
        assert_eq!(s.vertices, vec![0, 1, 2]);
        assert!(s.verified);

        assert_eq!(brute_force_mcs(&star(R, B)).unwrap().size(), 4);
        assert_eq!(
            brute_force_mcs(&complete(5, &[R; 5])).unwrap().vertices,
            vec![0]
        );
    }

    #[test]
    fn enumeration_examples() {
        let single = build_graph(&[], &[R]).unwrap();
        let all: Vec<_> = enumerate_optimal_mcs(&single)
            .unwrap()
            .into_iter()
            .map(|s| s.vertices)
            .collect();
        assert_eq!(all, vec![vec![0]]);

        let k2 = complete(2, &[R, B]);
        let all: Vec<_> = enumerate_optimal_mcs(&k2)
            .unwrap()
            .into_iter()
            .map(|s| s.vertices)
            .collect();
        assert_eq!(all, vec![vec![0, 1]]);

        let k3 = complete(3, &[R; 3]);
        let all: Vec<_> = enumerate_optimal_mcs(&k3)
            .unwrap()
            .into_iter()
            .map(|s| s.vertices)
            .collect();
        assert_eq!(all, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn size_limit() {
        let big = path(&[R; 21]);
        assert_eq!(
            brute_force_mcs(&big),
            Err(SolveError::TooLarge { n: 21, limit: 20 })
        );
        assert!(matches!(
            enumerate_optimal_mcs(&path(&[R; 17])),
            Err(SolveError::TooLarge { .. })
        ));
    }
}
