//! Vertex-colored graphs, the shortest-path metric and the consistency checker.
//!
//! Every solver in this crate hands its candidates to [`is_consistent`] before
//! reporting them, so this module is the single source of truth for what a
//! consistent subset is: a nonempty `S` such that every vertex `v` has, among
//! its nearest neighbors in `S`, a vertex of its own color.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Vertex identifier, `0..n`.
pub type Vertex = usize;

/// Color identifier. After construction colors are always `1..=c`.
pub type Color = u32;

/// Distance sentinel for "unreachable" / "empty set".
pub const INF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    Disconnected(Vertex),
    #[error("nearest neighbors of an empty set")]
    EmptySet,
}

/// A simple, undirected, connected graph with a total vertex coloring.
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    adjacency: Vec<Vec<Vertex>>,
    colors: Vec<Color>,
    num_colors: usize,
    num_edges: usize,
}

impl fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoredGraph")
            .field("n", &self.n())
            .field("colors", &self.colors)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Builds and validates an instance. The vertex count is `colors.len()`.
///
/// Colors may be arbitrary identifiers; they are renumbered to `1..=c` in order
/// of first appearance.
pub fn build_graph(
    edges: &[(Vertex, Vertex)],
    colors: &[Color],
) -> Result<ColoredGraph, GraphError> {
    ColoredGraph::new(edges, colors)
}

impl ColoredGraph {
    pub fn new(edges: &[(Vertex, Vertex)], colors: &[Color]) -> Result<Self, GraphError> {
        let n = colors.len();
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adjacency[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(GraphError::Disconnected(v));
        }

        let mut renumber: HashMap<Color, Color> = HashMap::new();
        let colors: Vec<Color> = colors
            .iter()
            .map(|&c| {
                let next = renumber.len() as Color + 1;
                *renumber.entry(c).or_insert(next)
            })
            .collect();

        Ok(Self {
            adjacency,
            num_colors: renumber.len(),
            colors,
            num_edges: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn m(&self) -> usize {
        self.num_edges
    }

    /// Number of distinct colors, `c`.
    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Vertices of color `color`, ascending.
    pub fn color_class(&self, color: Color) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| self.colors[v] == color).collect()
    }
}

/// All-pairs hop distances, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

/// BFS from every vertex.
pub fn all_pairs_distances(g: &ColoredGraph) -> DistanceMatrix {
    use rayon::prelude::*;

    let n = g.n();
    let mut dist = vec![INF; n * n];
    dist.par_chunks_mut(n)
        .enumerate()
        .for_each(|(source, row)| {
            let mut queue = VecDeque::with_capacity(n);
            row[source] = 0;
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                let next = row[u] + 1;
                for &w in g.neighbors(u) {
                    if row[w] == INF {
                        row[w] = next;
                        queue.push_back(w);
                    }
                }
            }
        });
    DistanceMatrix { n, dist }
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    /// Largest finite entry.
    pub fn diameter(&self) -> u32 {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d != INF)
            .max()
            .unwrap_or(0)
    }

    /// `d(v, S)`; [`INF`] when `set` is empty.
    pub fn to_set(&self, v: Vertex, set: &[Vertex]) -> u32 {
        let row = self.row(v);
        set.iter().map(|&u| row[u]).min().unwrap_or(INF)
    }

    /// `NN(v, S)`, ascending.
    pub fn nearest(&self, v: Vertex, set: &[Vertex]) -> Result<Vec<Vertex>, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let best = self.to_set(v, set);
        let row = self.row(v);
        let mut out: Vec<Vertex> = set.iter().copied().filter(|&u| row[u] == best).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// `d(v, S)` as a free function.
pub fn distance_to_set(dist: &DistanceMatrix, v: Vertex, set: &[Vertex]) -> u32 {
    dist.to_set(v, set)
}

pub fn nearest_neighbors(
    dist: &DistanceMatrix,
    v: Vertex,
    set: &[Vertex],
) -> Result<Vec<Vertex>, GraphError> {
    dist.nearest(v, set)
}

/// A vertex whose color is missing from its nearest neighbors in `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub vertex: Vertex,
    /// Colors of `NN(vertex, S)`, ascending and deduplicated. Empty when `S` is empty.
    pub nearest_colors: Vec<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub consistent: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn ok() -> Self {
        Self {
            consistent: true,
            witness: None,
        }
    }
}

/// Checks `S` against the definition; on failure the witness is the
/// smallest violating vertex.
pub fn is_consistent(g: &ColoredGraph, dist: &DistanceMatrix, set: &[Vertex]) -> Verdict {
    if set.is_empty() {
        return Verdict {
            consistent: false,
            witness: Some(Witness {
                vertex: 0,
                nearest_colors: Vec::new(),
            }),
        };
    }
    for v in 0..g.n() {
        let row = dist.row(v);
        let mut best_any = INF;
        let mut best_own = INF;
        for &u in set {
            let d = row[u];
            best_any = best_any.min(d);
            if g.color(u) == g.color(v) {
                best_own = best_own.min(d);
            }
        }
        if best_own != best_any {
            let mut nearest_colors: Vec<Color> = set
                .iter()
                .filter(|&&u| row[u] == best_any)
                .map(|&u| g.color(u))
                .collect();
            nearest_colors.sort_unstable();
            nearest_colors.dedup();
            return Verdict {
                consistent: false,
                witness: Some(Witness {
                    vertex: v,
                    nearest_colors,
                }),
            };
        }
    }
    Verdict::ok()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn builds_p3() {
        let g = p3_rbr();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.num_colors(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_graph(&[(0, 0)], &[R]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            build_graph(&[(0, 1)], &[R, B, 3]),
            Err(GraphError::Disconnected(2))
        );
        assert_eq!(
            build_graph(&[(0, 1), (1, 0)], &[R, B]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(build_graph(&[], &[]), Err(GraphError::EmptyGraph));
        assert_eq!(
            build_graph(&[(0, 5)], &[R, B]),
            Err(GraphError::VertexOutOfRange { vertex: 5, n: 2 })
        );
    }

    #[test]
    fn colors_normalized_by_first_appearance() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3)], &[7, 3, 7, 9]).unwrap();
        assert_eq!(g.colors(), &[1, 2, 1, 3]);
        assert_eq!(g.num_colors(), 3);
    }

    #[test]
    fn distances() {
        let d = all_pairs_distances(&p3_rbr());
        assert_eq!(d.get(0, 2), 2);
        assert!((0..3).all(|v| d.get(v, v) == 0));
        let star = all_pairs_distances(&star(R, B));
        assert_eq!(star.get(1, 2), 2);
    }

    #[test]
    fn set_distance_and_nearest() {
        let d = all_pairs_distances(&p3_rbr());
        assert_eq!(d.to_set(0, &[0, 2]), 0);
        assert_eq!(d.to_set(0, &[]), INF);
        assert_eq!(d.to_set(0, &[2]), 2);
        assert_eq!(d.nearest(1, &[0, 2]).unwrap(), vec![0, 2]);
        assert_eq!(d.nearest(2, &[2, 0]).unwrap(), vec![2]);
        assert_eq!(d.nearest(0, &[]), Err(GraphError::EmptySet));
        let s = all_pairs_distances(&star(R, B));
        assert_eq!(s.nearest(1, &[0, 2]).unwrap(), vec![0]);
    }

    #[test]
    fn checker_examples() {
        let g = p3_rbr();
        let d = all_pairs_distances(&g);
        assert!(is_consistent(&g, &d, &[0, 1, 2]).consistent);
        let verdict = is_consistent(&g, &d, &[1]);
        assert!(!verdict.consistent);
        assert_eq!(
            verdict.witness,
            Some(Witness {
                vertex: 0,
                nearest_colors: vec![B]
            })
        );

        let mono = complete(4, &[R; 4]);
        let dm = all_pairs_distances(&mono);
        assert!(is_consistent(&mono, &dm, &[2]).consistent);
        assert!(!is_consistent(&mono, &dm, &[]).consistent);
    }
}
