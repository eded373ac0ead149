//! Exact solver parameterized by the vertex cover number `k`.
//!
//! Let `M` be a minimum vertex cover and `I = V \ M`. The solver guesses
//!
//! 1. the distance `d_i = d(u_i, S)` from every cover vertex to the solution
//!    (`0 <= d_i <= 2k - 1`), and
//! 2. the boundary `M1`, the cover vertices adjacent to `S ∩ I` but not in `S`.
//!
//! A guess fixes which independent vertices are forbidden (`I_out`, too close
//! to some `u_i`) and forced (`I_in`, no other vertex of their color can sit at
//! their guessed distance). The remaining demand splits by color; for each
//! color the cheapest completion is a two-level hitting set: first a minimal
//! set of boundary "relays", then independent vertices adjacent to them.
//! Every assembled candidate is re-checked against the guess and the global
//! consistency checker before it competes.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::graph::{
    all_pairs_distances, is_consistent, Color, ColoredGraph, DistanceMatrix, Vertex, INF,
};
use crate::hitting_set::{enumerate_min_hitting_sets, min_hitting_set, HittingSetError, SetSystem};
use crate::solution::{keep_best, Deadline, Method, Solution, SolveError};
use crate::structural::{minimum_vertex_cover, VertexCoverResult};

pub const DEFAULT_K_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy)]
pub struct VcConfig {
    pub k_limit: usize,
    pub deadline: Deadline,
}

impl Default for VcConfig {
    fn default() -> Self {
        Self {
            k_limit: DEFAULT_K_LIMIT,
            deadline: Deadline::none(),
        }
    }
}

/// One `(D, M1)` guess. Sets are bit masks over positions in the cover list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcGuess {
    /// `d_i` for the `i`-th cover vertex.
    pub distances: Vec<u32>,
    pub m0: u32,
    pub m1: u32,
}

impl VcGuess {
    pub fn mx(&self) -> u32 {
        let all = if self.distances.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.distances.len()) - 1
        };
        all & !(self.m0 | self.m1)
    }
}

/// Sets derived from a guess.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedSets {
    /// Independent vertices closer than `d_i` to some cover vertex `u_i`.
    pub i_out: Vec<Vertex>,
    /// Guessed distance to the solution for every vertex: `D` on the cover,
    /// `1 + min` over neighbors on `I`.
    pub guessed: Vec<u32>,
    /// Independent vertices that must be in the solution.
    pub i_in: Vec<Vertex>,
    /// Vertices whose color is not yet present at their guessed distance,
    /// grouped by color.
    pub unsatisfied: BTreeMap<Color, Vec<Vertex>>,
    forbidden: Vec<bool>,
    forced: Vec<bool>,
}

/// Precomputed view of an instance with a fixed cover.
pub struct VcInstance<'a> {
    pub g: &'a ColoredGraph,
    pub dist: &'a DistanceMatrix,
    pub cover: &'a VertexCoverResult,
    position: Vec<Option<usize>>,
    has_independent_neighbor: Vec<bool>,
}

impl<'a> VcInstance<'a> {
    pub fn new(
        g: &'a ColoredGraph,
        dist: &'a DistanceMatrix,
        cover: &'a VertexCoverResult,
    ) -> Self {
        let mut position = vec![None; g.n()];
        for (i, &u) in cover.cover.iter().enumerate() {
            position[u] = Some(i);
        }
        let has_independent_neighbor = cover
            .cover
            .iter()
            .map(|&u| g.neighbors(u).iter().any(|&w| position[w].is_none()))
            .collect();
        Self {
            g,
            dist,
            cover,
            position,
            has_independent_neighbor,
        }
    }

    fn k(&self) -> usize {
        self.cover.cover.len()
    }

    fn in_cover(&self, v: Vertex) -> bool {
        self.position[v].is_some()
    }

    /// Sound necessary conditions on `D` alone.
    fn distances_feasible(&self, d: &[u32]) -> bool {
        let m = &self.cover.cover;
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if d[i].abs_diff(d[j]) > self.dist.get(m[i], m[j]) {
                    return false;
                }
            }
        }
        // The nearest solution vertex of u_i is either a cover vertex at
        // distance d_i with guess 0, or an independent vertex reached through a
        // cover vertex with guess 1 at distance d_i - 1.
        (0..m.len()).all(|i| {
            d[i] == 0
                || (0..m.len()).any(|j| {
                    (d[j] == 0 && j != i && self.dist.get(m[i], m[j]) == d[i])
                        || (d[j] == 1
                            && self.has_independent_neighbor[j]
                            && self.dist.get(m[i], m[j]) + 1 == d[i])
                })
        })
    }

    /// Boundary candidates for a distance vector: `(forced, optional)` masks.
    fn boundary_masks(&self, d: &[u32]) -> (u32, u32) {
        let m = &self.cover.cover;
        let m0: u32 = (0..m.len())
            .filter(|&i| d[i] == 0)
            .fold(0, |acc, i| acc | 1 << i);
        let mut forced = 0u32;
        let mut optional = 0u32;
        for i in 0..m.len() {
            if d[i] != 1 || !self.has_independent_neighbor[i] {
                continue;
            }
            let touches_m0 = self
                .g
                .neighbors(m[i])
                .iter()
                .any(|&w| self.position[w].is_some_and(|j| m0 >> j & 1 == 1));
            if touches_m0 {
                optional |= 1 << i;
            } else {
                forced |= 1 << i;
            }
        }
        (forced, optional)
    }

    fn feasible_distance_vectors(&self) -> Vec<Vec<u32>> {
        let k = self.k();
        let top = (2 * k as u32).saturating_sub(1);
        let mut out = Vec::new();
        let mut d = vec![0u32; k];
        loop {
            if self.distances_feasible(&d) {
                out.push(d.clone());
            }
            // Odometer with the last entry fastest: lexicographic order.
            let Some(i) = (0..k).rev().find(|&i| d[i] < top) else {
                break;
            };
            d[i] += 1;
            for x in &mut d[i + 1..] {
                *x = 0;
            }
        }
        out
    }

    fn guesses_for(&self, d: &[u32]) -> Vec<VcGuess> {
        let m0: u32 = (0..d.len())
            .filter(|&i| d[i] == 0)
            .fold(0, |acc, i| acc | 1 << i);
        let (forced, optional) = self.boundary_masks(d);
        // Ascending submasks of `optional`, so ascending M1 masks overall.
        let mut subs = Vec::new();
        let mut sub = 0u32;
        loop {
            subs.push(sub);
            if sub == optional {
                break;
            }
            sub = (sub.wrapping_sub(optional)) & optional;
        }
        subs.into_iter()
            .map(|s| VcGuess {
                distances: d.to_vec(),
                m0,
                m1: forced | s,
            })
            .collect()
    }

    /// `I_out`, extended distances, `I_in` and the unsatisfied demand.
    /// `None` when the guess contradicts itself (`I_in ∩ I_out ≠ ∅`).
    pub fn derive_sets(&self, guess: &VcGuess) -> Option<DerivedSets> {
        let g = self.g;
        let n = g.n();
        let m = &self.cover.cover;
        let d = &guess.distances;

        let mut guessed = vec![INF; n];
        for (i, &u) in m.iter().enumerate() {
            guessed[u] = d[i];
        }
        for &v in &self.cover.independent {
            guessed[v] = g
                .neighbors(v)
                .iter()
                .map(|&u| d[self.position[u].expect("independent vertices only touch the cover")])
                .min()
                .map_or(INF, |x| x + 1);
        }

        let mut forbidden = vec![false; n];
        for &v in &self.cover.independent {
            forbidden[v] = m
                .iter()
                .enumerate()
                .any(|(i, &u)| self.dist.get(u, v) < d[i]);
        }

        // Vertices that may belong to a solution respecting the guess.
        let eligible = |w: Vertex| match self.position[w] {
            Some(j) => guess.m0 >> j & 1 == 1,
            None => !forbidden[w],
        };

        let mut forced = vec![false; n];
        for &v in &self.cover.independent {
            let dv = guessed[v];
            let row = self.dist.row(v);
            let own_color_available =
                (0..n).any(|w| row[w] == dv && eligible(w) && g.color(w) == g.color(v));
            if !own_color_available {
                if forbidden[v] {
                    return None;
                }
                forced[v] = true;
            }
        }
        for (i, &u) in m.iter().enumerate() {
            if guess.m0 >> i & 1 == 1 {
                forced[u] = true;
            }
        }

        let solution_part: Vec<Vertex> = (0..n).filter(|&w| forced[w]).collect();
        let mut unsatisfied: BTreeMap<Color, Vec<Vertex>> = BTreeMap::new();
        for v in 0..n {
            if forced[v] {
                continue;
            }
            let row = self.dist.row(v);
            let satisfied = solution_part
                .iter()
                .any(|&w| row[w] == guessed[v] && g.color(w) == g.color(v));
            if !satisfied {
                unsatisfied.entry(g.color(v)).or_default().push(v);
            }
        }

        Some(DerivedSets {
            i_out: (0..n).filter(|&v| forbidden[v]).collect(),
            i_in: self
                .cover
                .independent
                .iter()
                .copied()
                .filter(|&v| forced[v])
                .collect(),
            guessed,
            unsatisfied,
            forbidden,
            forced,
        })
    }

    /// Cheapest set of independent vertices of color `color` bringing every
    /// unsatisfied vertex of that color within its guessed distance.
    pub fn per_color_optimal(
        &self,
        guess: &VcGuess,
        derived: &DerivedSets,
        color: Color,
    ) -> Result<Option<Vec<Vertex>>, HittingSetError> {
        let Some(demand) = derived.unsatisfied.get(&color) else {
            return Ok(Some(Vec::new()));
        };
        let g = self.g;
        let m = &self.cover.cover;
        let boundary: Vec<usize> = (0..m.len()).filter(|&j| guess.m1 >> j & 1 == 1).collect();

        // Relays need a neighbor of this color outside I_out.
        let relay_ok: Vec<bool> = (0..m.len())
            .map(|j| {
                g.neighbors(m[j])
                    .iter()
                    .any(|&w| !self.in_cover(w) && !derived.forbidden[w] && g.color(w) == color)
            })
            .collect();

        let mut relay_sets: Vec<u32> = Vec::with_capacity(demand.len());
        for &u in demand {
            let du = derived.guessed[u];
            let mask = boundary
                .iter()
                .filter(|&&j| relay_ok[j] && du >= 1 && self.dist.get(u, m[j]) == du - 1)
                .fold(0u32, |acc, &j| acc | 1 << j);
            if mask == 0 {
                return Ok(None);
            }
            relay_sets.push(mask);
        }
        // Supersets of another member change neither the hitting sets nor
        // their minimality.
        relay_sets.sort_unstable();
        relay_sets.dedup();
        let minimal: Vec<u32> = relay_sets
            .iter()
            .copied()
            .filter(|&a| !relay_sets.iter().any(|&b| b != a && b & a == b))
            .collect();

        let relay_system = SetSystem::new(
            boundary.iter().map(|&j| m[j]).collect(),
            minimal
                .iter()
                .map(|&mask| {
                    (0..m.len())
                        .filter(|&j| mask >> j & 1 == 1)
                        .map(|j| m[j])
                        .collect()
                })
                .collect(),
        );

        let candidates: Vec<Vertex> = self
            .cover
            .independent
            .iter()
            .copied()
            .filter(|&w| g.color(w) == color && !derived.forbidden[w] && !derived.forced[w])
            .collect();

        let mut best: Option<Vec<Vertex>> = None;
        for relays in enumerate_min_hitting_sets(&relay_system)? {
            let family: Vec<Vec<Vertex>> = relays
                .iter()
                .map(|&x| {
                    g.neighbors(x)
                        .iter()
                        .copied()
                        .filter(|w| candidates.binary_search(w).is_ok())
                        .collect()
                })
                .collect();
            let picked = match min_hitting_set(&SetSystem::new(candidates.clone(), family)) {
                Ok(h) => h,
                Err(HittingSetError::Infeasible) => continue,
                Err(e) => return Err(e),
            };
            let meets_demand = demand
                .iter()
                .all(|&u| self.dist.to_set(u, &picked) <= derived.guessed[u]);
            if meets_demand {
                best = keep_best(best, Some(picked));
            }
        }
        Ok(best)
    }

    /// Unions the forced part with the per-color sets and keeps the result
    /// only if it realizes `D` exactly and passes the checker.
    pub fn assemble(
        &self,
        guess: &VcGuess,
        derived: &DerivedSets,
        parts: &[Vec<Vertex>],
    ) -> Option<Vec<Vertex>> {
        let mut s: Vec<Vertex> = (0..self.g.n()).filter(|&v| derived.forced[v]).collect();
        for part in parts {
            s.extend_from_slice(part);
        }
        s.sort_unstable();
        s.dedup();
        let respects = self
            .cover
            .cover
            .iter()
            .enumerate()
            .all(|(i, &u)| self.dist.to_set(u, &s) == guess.distances[i]);
        (respects && is_consistent(self.g, self.dist, &s).consistent).then_some(s)
    }

    fn evaluate(
        &self,
        guess: &VcGuess,
        bound: &AtomicUsize,
    ) -> Result<Option<Vec<Vertex>>, HittingSetError> {
        let Some(derived) = self.derive_sets(guess) else {
            return Ok(None);
        };
        let base = derived.forced.iter().filter(|&&f| f).count();
        if base > bound.load(Ordering::Relaxed) {
            return Ok(None);
        }
        let mut parts = Vec::with_capacity(derived.unsatisfied.len());
        for &color in derived.unsatisfied.keys() {
            match self.per_color_optimal(guess, &derived, color)? {
                Some(part) => parts.push(part),
                None => return Ok(None),
            }
        }
        let found = self.assemble(guess, &derived, &parts);
        if let Some(s) = &found {
            bound.fetch_min(s.len(), Ordering::Relaxed);
        }
        Ok(found)
    }
}

/// Every `(D, M1)` guess that survives the feasibility filters, with `D` in
/// lexicographic order and `M1` by ascending mask.
pub fn enumerate_guesses(
    g: &ColoredGraph,
    dist: &DistanceMatrix,
    cover: &VertexCoverResult,
) -> Vec<VcGuess> {
    let inst = VcInstance::new(g, dist, cover);
    inst.feasible_distance_vectors()
        .iter()
        .flat_map(|d| inst.guesses_for(d))
        .collect()
}

pub fn solve_vc(
    g: &ColoredGraph,
    cover: Option<&VertexCoverResult>,
) -> Result<Solution, SolveError> {
    solve_vc_with(g, &all_pairs_distances(g), cover, &VcConfig::default())
}

pub fn solve_vc_with(
    g: &ColoredGraph,
    dist: &DistanceMatrix,
    cover: Option<&VertexCoverResult>,
    config: &VcConfig,
) -> Result<Solution, SolveError> {
    let computed;
    let cover = match cover {
        Some(c) => c,
        None => {
            computed = minimum_vertex_cover(g, Some(config.k_limit)).map_err(|_| {
                SolveError::ParameterTooLarge {
                    name: "vertex cover",
                    value: config.k_limit + 1,
                    limit: config.k_limit,
                }
            })?;
            &computed
        }
    };
    let k = cover.k();
    if k > config.k_limit {
        return Err(SolveError::ParameterTooLarge {
            name: "vertex cover",
            value: k,
            limit: config.k_limit,
        });
    }
    if k == 0 {
        // Connected and edgeless: a single vertex.
        return Ok(Solution {
            vertices: vec![0],
            method: Method::Vc,
            verified: true,
            optimal: true,
            explored: 1,
        });
    }

    let inst = VcInstance::new(g, dist, cover);
    let vectors = inst.feasible_distance_vectors();
    let bound = AtomicUsize::new(usize::MAX);
    let timed_out = AtomicBool::new(false);

    let (best, explored) = vectors
        .par_iter()
        .map(|d| -> Result<(Option<Vec<Vertex>>, u64), HittingSetError> {
            let guesses = inst.guesses_for(d);
            let count = guesses.len() as u64;
            if timed_out.load(Ordering::Relaxed) || config.deadline.expired() {
                timed_out.store(true, Ordering::Relaxed);
                return Ok((None, count));
            }
            let mut best = None;
            for guess in &guesses {
                best = keep_best(best, inst.evaluate(guess, &bound)?);
            }
            Ok((best, count))
        })
        .try_reduce(|| (None, 0), |a, b| Ok((keep_best(a.0, b.0), a.1 + b.1)))
        .map_err(|e| SolveError::ParameterTooLarge {
            name: "relay family",
            value: match e {
                HittingSetError::FamilyTooLarge { m, .. } => m,
                HittingSetError::UniverseTooLarge { size, .. } => size,
                HittingSetError::Infeasible => 0,
            },
            limit: crate::hitting_set::DEFAULT_LIMIT,
        })?;

    let finish = |vertices: Vec<Vertex>, optimal: bool| {
        let verified = is_consistent(g, dist, &vertices).consistent;
        Solution {
            vertices,
            method: Method::Vc,
            verified,
            optimal,
            explored,
        }
    };
    if timed_out.load(Ordering::Relaxed) {
        return Err(SolveError::Timeout {
            best: best.map(|s| finish(s, false)),
        });
    }
    match best {
        Some(s) => Ok(finish(s, true)),
        None => Err(SolveError::NoFeasibleGuess),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::graph::fixtures::*;

    fn setup(g: &ColoredGraph) -> (DistanceMatrix, VertexCoverResult) {
        (
            all_pairs_distances(g),
            minimum_vertex_cover(g, None).unwrap(),
        )
    }

    #[test]
    fn solves_small_examples() {
        assert_eq!(solve_vc(&p3_rbr(), None).unwrap().size(), 3);
        assert_eq!(solve_vc(&star(R, B), None).unwrap().size(), 4);
        let mono = solve_vc(&star(R, R), None).unwrap();
        assert_eq!(mono.size(), 1);
        assert!(mono.verified);
    }

    #[test]
    fn single_vertex() {
        let g = build_graph(&[], &[R]).unwrap();
        assert_eq!(solve_vc(&g, None).unwrap().vertices, vec![0]);
    }

    #[test]
    fn parameter_limit() {
        let g = complete(8, &[R; 8]);
        assert!(matches!(
            solve_vc(&g, None),
            Err(SolveError::ParameterTooLarge { .. })
        ));
    }

    #[test]
    fn guess_counts_for_k1() {
        let g = p3_rbr();
        let (d, vc) = setup(&g);
        let guesses = enumerate_guesses(&g, &d, &vc);
        assert!(guesses.len() <= 4);
        assert!(guesses
            .iter()
            .all(|x| x.distances[0] <= 1 && x.m0 & x.m1 == 0));
        assert_eq!(guesses[0].distances, vec![0]);
    }

    #[test]
    fn triangle_infeasible_distances_pruned() {
        // Path 0-1-2-3-4-5-6 has cover {1, 3, 5}; adjacent-by-two cover
        // vertices cannot differ by three.
        let g = path(&[R; 7]);
        let (d, vc) = setup(&g);
        assert_eq!(vc.cover, vec![1, 3, 5]);
        let inst = VcInstance::new(&g, &d, &vc);
        assert!(!inst.distances_feasible(&[0, 3, 0]));
        let guesses = enumerate_guesses(&g, &d, &vc);
        assert!(guesses
            .iter()
            .all(|x| x.distances[0].abs_diff(x.distances[1]) <= 2));
        assert!(guesses.len() <= 6usize.pow(3) * 8);
    }

    #[test]
    fn derived_sets_on_p3() {
        let g = p3_rbr();
        let (d, vc) = setup(&g);
        let inst = VcInstance::new(&g, &d, &vc);
        let guess = VcGuess {
            distances: vec![0],
            m0: 1,
            m1: 0,
        };
        let derived = inst.derive_sets(&guess).unwrap();
        assert!(derived.i_out.is_empty());
        assert_eq!(derived.guessed, vec![1, 0, 1]);
        assert_eq!(derived.i_in, vec![0, 2]);
        assert!(derived.unsatisfied.is_empty());
        let s = inst.assemble(&guess, &derived, &[]).unwrap();
        assert_eq!(s, vec![0, 1, 2]);
    }

    #[test]
    fn all_zero_guess_has_no_forbidden_vertices() {
        let g = cycle(&[R, B, R, B, 3, 3]);
        let (d, vc) = setup(&g);
        let inst = VcInstance::new(&g, &d, &vc);
        let guess = VcGuess {
            distances: vec![0; vc.k()],
            m0: (1 << vc.k()) - 1,
            m1: 0,
        };
        assert!(inst.derive_sets(&guess).unwrap().i_out.is_empty());
    }

    #[test]
    fn contradictory_guess_discarded() {
        // 0(R) - 1(B) - 2(B) - 3(3), cover {1, 2}. With d_1 = 2 vertex 0 is
        // within distance 1 < 2 of vertex 1, so it is forbidden; it is also
        // the only R vertex, so nothing of its color can sit at its guessed
        // distance 3 and it is forced as well.
        let g = path(&[R, B, B, 3]);
        let (d, vc) = setup(&g);
        assert_eq!(vc.cover, vec![1, 2]);
        let inst = VcInstance::new(&g, &d, &vc);
        let guess = VcGuess {
            distances: vec![2, 1],
            m0: 0,
            m1: 0b10,
        };
        assert!(inst.derive_sets(&guess).is_none());
    }

    #[test]
    fn per_color_relay_choice() {
        // Cover {0 (R), 1 (B)}; independent 2 (R), 3 (R) hang off 1 and
        // 4 (R) hangs off 0.
        let g = build_graph(&[(0, 1), (1, 2), (1, 3), (0, 4)], &[R, B, R, R, R]).unwrap();
        let (d, vc) = setup(&g);
        assert_eq!(vc.cover, vec![0, 1]);
        let inst = VcInstance::new(&g, &d, &vc);
        let guess = VcGuess {
            distances: vec![2, 1],
            m0: 0,
            m1: 0b10,
        };
        let derived = inst.derive_sets(&guess).unwrap();
        assert_eq!(derived.i_out, vec![4]);
        assert!(derived.i_in.is_empty());
        assert_eq!(derived.unsatisfied[&R], vec![0, 2, 3, 4]);
        assert_eq!(derived.unsatisfied[&B], vec![1]);

        // Every R demand routes through relay 1; one R neighbor of it suffices.
        assert_eq!(
            inst.per_color_optimal(&guess, &derived, R).unwrap(),
            Some(vec![2])
        );
        // Vertex 1 needs a B neighbor in I and has none.
        assert_eq!(inst.per_color_optimal(&guess, &derived, B).unwrap(), None);
    }
}
