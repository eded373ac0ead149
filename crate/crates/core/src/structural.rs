//! Structural parameters: minimum vertex cover and the twin-class
//! (neighborhood diversity) decomposition.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{ColoredGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("minimum vertex cover exceeds budget {budget}")]
    BudgetExceeded { budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCoverResult {
    /// The cover `M`, ascending.
    pub cover: Vec<Vertex>,
    /// The independent complement `I = V \ M`, ascending.
    pub independent: Vec<Vertex>,
}

impl VertexCoverResult {
    pub fn k(&self) -> usize {
        self.cover.len()
    }

    pub fn from_cover(n: usize, mut cover: Vec<Vertex>) -> Self {
        cover.sort_unstable();
        cover.dedup();
        let independent = (0..n).filter(|v| cover.binary_search(v).is_err()).collect();
        Self { cover, independent }
    }

    pub fn is_cover_of(&self, g: &ColoredGraph) -> bool {
        g.edges().all(|(u, v)| {
            self.cover.binary_search(&u).is_ok() || self.cover.binary_search(&v).is_ok()
        })
    }
}

/// Exact minimum vertex cover by a bounded search tree.
///
/// The budget is raised from a maximal-matching lower bound until the search
/// succeeds. With `budget = Some(b)` the search stops with
/// [`StructuralError::BudgetExceeded`] once every cover of size `<= b` is ruled out.
pub fn minimum_vertex_cover(
    g: &ColoredGraph,
    budget: Option<usize>,
) -> Result<VertexCoverResult, StructuralError> {
    let n = g.n();
    let limit = budget.unwrap_or(n);
    let mut lower = matching_lower_bound(g);
    let mut search = CoverSearch {
        g,
        removed: vec![false; n],
        cover: Vec::new(),
    };
    while lower <= limit {
        if search.branch(lower) {
            return Ok(VertexCoverResult::from_cover(n, search.cover));
        }
        lower += 1;
    }
    Err(StructuralError::BudgetExceeded { budget: limit })
}

fn matching_lower_bound(g: &ColoredGraph) -> usize {
    let mut matched = vec![false; g.n()];
    let mut size = 0;
    for (u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            size += 1;
        }
    }
    size
}

struct CoverSearch<'a> {
    g: &'a ColoredGraph,
    removed: Vec<bool>,
    cover: Vec<Vertex>,
}

impl CoverSearch<'_> {
    fn residual_degree(&self, v: Vertex) -> usize {
        self.g
            .neighbors(v)
            .iter()
            .filter(|&&w| !self.removed[w])
            .count()
    }

    fn take(&mut self, vs: &[Vertex]) {
        for &v in vs {
            self.removed[v] = true;
            self.cover.push(v);
        }
    }

    fn untake(&mut self, vs: &[Vertex]) {
        for &v in vs {
            self.removed[v] = false;
            self.cover.pop();
        }
    }

    /// Branches on the max-degree vertex `v`: either `v` joins the cover or all
    /// of its remaining neighbors do (every edge at `v` must be covered).
    fn branch(&mut self, budget: usize) -> bool {
        let mut best: Option<(usize, Vertex)> = None;
        let mut residual_edges = 0;
        for v in 0..self.g.n() {
            if self.removed[v] {
                continue;
            }
            let d = self.residual_degree(v);
            residual_edges += d;
            if d > 0 && best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, v));
            }
        }
        let Some((max_degree, v)) = best else {
            return true;
        };
        residual_edges /= 2;
        if budget == 0 || residual_edges > budget * max_degree {
            return false;
        }

        self.take(&[v]);
        if self.branch(budget - 1) {
            return true;
        }
        self.untake(&[v]);

        if max_degree <= budget {
            let nbrs: Vec<Vertex> = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| !self.removed[w])
                .collect();
            self.take(&nbrs);
            if self.branch(budget - nbrs.len()) {
                return true;
            }
            self.untake(&nbrs);
        }
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeKind {
    /// Pairwise adjacent members. Single-vertex classes are reported as cliques.
    Clique,
    Independent,
}

/// Partition of the vertices into twin classes ("types").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecomposition {
    /// Classes, each ascending, ordered by smallest member.
    pub types: Vec<Vec<Vertex>>,
    pub type_of: Vec<usize>,
    pub kinds: Vec<TypeKind>,
    /// `adjacency[s][t]` for `s != t`: every vertex of `s` is adjacent to every vertex of `t`.
    pub adjacency: Vec<Vec<bool>>,
}

impl TypeDecomposition {
    pub fn r(&self) -> usize {
        self.types.len()
    }
}

/// Groups vertices into twin classes: `u ~ v` iff `N(u) = N(v)` or `N[u] = N[v]`.
pub fn neighborhood_decomposition(g: &ColoredGraph) -> TypeDecomposition {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let mut open: HashMap<&[Vertex], Vertex> = HashMap::new();
    let mut closed: HashMap<Vec<Vertex>, Vertex> = HashMap::new();
    for v in 0..n {
        let nbrs = g.neighbors(v);
        if let Some(&u) = open.get(nbrs) {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        } else {
            open.insert(nbrs, v);
        }
        let mut key = nbrs.to_vec();
        let pos = key.binary_search(&v).unwrap_err();
        key.insert(pos, v);
        if let Some(&u) = closed.get(&key) {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        } else {
            closed.insert(key, v);
        }
    }

    let mut type_of = vec![usize::MAX; n];
    let mut types: Vec<Vec<Vertex>> = Vec::new();
    let mut index_of_root: HashMap<usize, usize> = HashMap::new();
    for (v, slot) in type_of.iter_mut().enumerate() {
        let root = find(&mut parent, v);
        let t = *index_of_root.entry(root).or_insert_with(|| {
            types.push(Vec::new());
            types.len() - 1
        });
        types[t].push(v);
        *slot = t;
    }

    let kinds = types
        .iter()
        .map(|members| {
            if members.len() >= 2 && !g.has_edge(members[0], members[1]) {
                TypeKind::Independent
            } else {
                TypeKind::Clique
            }
        })
        .collect();

    let r = types.len();
    let mut adjacency = vec![vec![false; r]; r];
    for s in 0..r {
        for t in 0..r {
            if s != t {
                adjacency[s][t] = g.has_edge(types[s][0], types[t][0]);
            }
        }
    }

    TypeDecomposition {
        types,
        type_of,
        kinds,
        adjacency,
    }
}

/// The twin condition verbatim: `N(u) \ {v} = N(v) \ {u}`.
pub fn are_twins(g: &ColoredGraph, u: Vertex, v: Vertex) -> bool {
    let a = g.neighbors(u).iter().filter(|&&w| w != v);
    let b = g.neighbors(v).iter().filter(|&&w| w != u);
    a.eq(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn brute_cover_size(g: &ColoredGraph) -> usize {
        let n = g.n();
        let edges: Vec<_> = g.edges().collect();
        (0u32..1 << n)
            .filter(|mask| {
                edges
                    .iter()
                    .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn cover_examples() {
        let p3 = p3_rbr();
        let vc = minimum_vertex_cover(&p3, None).unwrap();
        assert_eq!(vc.cover, vec![1]);
        assert_eq!(vc.independent, vec![0, 2]);

        let c4 = cycle(&[R; 4]);
        assert_eq!(brute_cover_size(&c4), 2);
        assert_eq!(minimum_vertex_cover(&c4, None).unwrap().k(), 2);

        let k4 = complete(4, &[R; 4]);
        assert_eq!(brute_cover_size(&k4), 3);
        assert_eq!(minimum_vertex_cover(&k4, None).unwrap().k(), 3);
    }

    #[test]
    fn cover_budget() {
        let k4 = complete(4, &[R; 4]);
        assert_eq!(
            minimum_vertex_cover(&k4, Some(2)),
            Err(StructuralError::BudgetExceeded { budget: 2 })
        );
        assert_eq!(minimum_vertex_cover(&k4, Some(3)).unwrap().k(), 3);
    }

    #[test]
    fn single_vertex_cover_is_empty() {
        let g = crate::graph::build_graph(&[], &[R]).unwrap();
        let vc = minimum_vertex_cover(&g, None).unwrap();
        assert_eq!(vc.k(), 0);
        assert_eq!(vc.independent, vec![0]);
    }

    #[test]
    fn decomposition_examples() {
        let k3 = complete(3, &[R; 3]);
        let d = neighborhood_decomposition(&k3);
        assert_eq!(d.r(), 1);
        assert_eq!(d.kinds, vec![TypeKind::Clique]);

        let d = neighborhood_decomposition(&p3_rbr());
        assert_eq!(d.types, vec![vec![0, 2], vec![1]]);
        assert_eq!(d.kinds[0], TypeKind::Independent);
        assert!(d.adjacency[0][1]);

        let p4 = path(&[R; 4]);
        assert_eq!(neighborhood_decomposition(&p4).r(), 4);

        let star = star(R, B);
        assert_eq!(neighborhood_decomposition(&star).r(), 2);
    }
}
