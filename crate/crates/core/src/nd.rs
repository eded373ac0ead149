//! Exact solver parameterized by neighborhood diversity `r`.
//!
//! Vertices of one twin class ("type") are interchangeable: every vertex
//! outside the type sees all of its members at the same distance. Some
//! optimal solution takes none, one, or all vertices of each (type, color)
//! cell, and its types fall into three groups: untouched (`T0`), touched by
//! one color (`T1`), touched by several colors (`T2`).
//!
//! A small set of *responsible* colors (one per `T1` type, two per `T2` type)
//! already determines, for every vertex, the distance to the nearest solution
//! vertex of a foreign color. The solver guesses the type grouping and which
//! types each responsible color occupies, spreads all colors over as many
//! labels as there are responsible colors, and then solves every label on its
//! own: pick the best color of the label to play the responsible role, place
//! it, and give each remaining color of the label the cheapest placement on
//! `T2` types that keeps its vertices (and the responsible color's vertices)
//! consistent.
//!
//! Labelings are enumerated exhaustively when `k^c` is within budget and
//! sampled otherwise; sampled runs are reported as not provably optimal.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{
    all_pairs_distances, is_consistent, Color, ColoredGraph, DistanceMatrix, Vertex, INF,
};
use crate::solution::{keep_best, Deadline, Method, Solution, SolveError};
use crate::structural::{neighborhood_decomposition, TypeDecomposition};

pub const DEFAULT_R_LIMIT: usize = 4;
/// Largest `k^c` enumerated exhaustively.
pub const DEFAULT_LABELING_BUDGET: u64 = 1_000_000;
/// Failure probability used to size random labeling runs.
pub const DEFAULT_FAILURE_BUDGET: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NdError {
    #[error("{k}^{c} labelings exceed the exhaustive budget {budget}")]
    BudgetExceeded { k: usize, c: usize, budget: u64 },
    #[error("vertex set is not consistent")]
    NotConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    /// No solution vertex.
    T0,
    /// Solution vertices of exactly one color.
    T1,
    /// Solution vertices of at least two colors.
    T2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition3 {
    pub assignment: Vec<Part>,
}

impl Partition3 {
    fn mask(&self, part: Part) -> u32 {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == part)
            .fold(0, |acc, (t, _)| acc | 1 << t)
    }
}

/// Labels (0-based, `0..k`) present on each type, as bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccAssignment {
    pub k: usize,
    pub per_type_labels: Vec<u32>,
}

impl OccAssignment {
    /// Types carrying `label`, as a mask.
    pub fn types_of(&self, label: usize) -> u32 {
        self.per_type_labels
            .iter()
            .enumerate()
            .filter(|(_, &m)| m >> label & 1 == 1)
            .fold(0, |acc, (t, _)| acc | 1 << t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelingMode {
    Exhaustive,
    Random { seed: u64, trials: u64 },
}

/// Map from colors to labels `0..k`; `label_of[c - 1]` is the label of color `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCoding {
    pub k: usize,
    pub label_of: Vec<usize>,
}

impl LabelCoding {
    pub fn class(&self, label: usize) -> Vec<Color> {
        (0..self.label_of.len())
            .filter(|&i| self.label_of[i] == label)
            .map(|i| i as Color + 1)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Amount {
    None,
    One,
    All,
}

/// Placement of one color: the amount taken from each type, indexed by type.
/// `One` means the smallest-id vertex of the cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlacementChoice {
    pub color: Color,
    pub amounts: Vec<Amount>,
}

/// Labelings of `c` colors with `k` labels.
///
/// Exhaustive mode yields all `k^c` maps in lexicographic order (color 1
/// slowest). Random mode draws `trials` maps from ChaCha8 seeded with `seed`;
/// each color's label is `(x * k) >> 64` for the next 64-bit output `x`.
pub fn enumerate_labelings(
    c: usize,
    k: usize,
    mode: LabelingMode,
    budget: u64,
) -> Result<Box<dyn Iterator<Item = LabelCoding>>, NdError> {
    match mode {
        LabelingMode::Exhaustive => {
            let total = (k as u64).checked_pow(c as u32).filter(|&t| t <= budget);
            let Some(total) = total else {
                return Err(NdError::BudgetExceeded { k, c, budget });
            };
            Ok(Box::new((0..total).map(move |mut index| {
                let mut label_of = vec![0; c];
                for slot in label_of.iter_mut().rev() {
                    *slot = (index % k as u64) as usize;
                    index /= k as u64;
                }
                LabelCoding { k, label_of }
            })))
        }
        LabelingMode::Random { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Box::new((0..trials).map(move |_| LabelCoding {
                k,
                label_of: random_labels(&mut rng, c, k),
            })))
        }
    }
}

fn random_labels(rng: &mut ChaCha8Rng, c: usize, k: usize) -> Vec<usize> {
    (0..c)
        .map(|_| ((rng.next_u64() as u128 * k as u128) >> 64) as usize)
        .collect()
}

/// Trials giving a nice labeling with probability `1 - failure` when each
/// trial succeeds with probability at least `k^-k`.
pub fn random_trials(k: usize, failure: f64) -> u64 {
    let per_trial = (k as f64).powi(k as i32);
    (per_trial * (1.0 / failure).ln()).ceil().max(1.0) as u64
}

/// Set partitions of `0..c` into exactly `k` nonempty blocks, as restricted
/// growth strings. One representative per labeling orbit under relabeling.
fn set_partitions(c: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, used: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let c = cur.len();
        if pos == c {
            if used == k {
                out.push(cur.clone());
            }
            return;
        }
        // Not enough colors left to open the remaining blocks.
        if k - used > c - pos {
            return;
        }
        for b in 0..=used.min(k - 1) {
            cur[pos] = b;
            go(pos + 1, used.max(b + 1), k, cur, out);
        }
    }
    let mut out = Vec::new();
    if k == 0 || k > c {
        return out;
    }
    go(0, 0, k, &mut vec![0; c], &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct NdConfig {
    pub r_limit: usize,
    /// Force one labeling mode for every `k`; `None` picks per `k` by budget.
    pub mode: Option<LabelingMode>,
    pub labeling_budget: u64,
    pub failure: f64,
    pub seed: u64,
    pub deadline: Deadline,
}

impl Default for NdConfig {
    fn default() -> Self {
        Self {
            r_limit: DEFAULT_R_LIMIT,
            mode: None,
            labeling_budget: DEFAULT_LABELING_BUDGET,
            failure: DEFAULT_FAILURE_BUDGET,
            seed: 0,
            deadline: Deadline::none(),
        }
    }
}

/// Instance view with per-cell vertex lists and type-level distances.
pub struct NdInstance<'a> {
    pub g: &'a ColoredGraph,
    pub dist: &'a DistanceMatrix,
    pub decomp: &'a TypeDecomposition,
    /// `cells[t][c - 1]`: vertices of type `t` and color `c`, ascending.
    cells: Vec<Vec<Vec<Vertex>>>,
    /// `delta[s][t]`: distance from a vertex of type `s` to the nearest
    /// *other* vertex of type `t` (`INF` for `s == t` singletons).
    delta: Vec<Vec<u32>>,
}

impl<'a> NdInstance<'a> {
    pub fn new(
        g: &'a ColoredGraph,
        dist: &'a DistanceMatrix,
        decomp: &'a TypeDecomposition,
    ) -> Self {
        let r = decomp.r();
        let c = g.num_colors();
        let mut cells = vec![vec![Vec::new(); c]; r];
        for v in 0..g.n() {
            cells[decomp.type_of[v]][g.color(v) as usize - 1].push(v);
        }
        let delta = (0..r)
            .map(|s| {
                (0..r)
                    .map(|t| {
                        let a = decomp.types[s][0];
                        if s != t {
                            dist.get(a, decomp.types[t][0])
                        } else if decomp.types[s].len() >= 2 {
                            dist.get(a, decomp.types[s][1])
                        } else {
                            INF
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            g,
            dist,
            decomp,
            cells,
            delta,
        }
    }

    pub fn r(&self) -> usize {
        self.decomp.r()
    }

    fn c(&self) -> usize {
        self.g.num_colors()
    }

    /// Type-level distance table; see the field docs.
    pub fn type_distance(&self, s: usize, t: usize) -> u32 {
        self.delta[s][t]
    }

    fn cell(&self, t: usize, color: Color) -> &[Vertex] {
        &self.cells[t][color as usize - 1]
    }

    fn colors_in_type(&self, t: usize) -> usize {
        self.cells[t].iter().filter(|cell| !cell.is_empty()).count()
    }

    /// Partitions whose `T2` types hold at least two colors, base-3 order
    /// with type 0 slowest.
    pub fn partitions(&self) -> Vec<Partition3> {
        let r = self.r();
        let total = 3usize.pow(r as u32);
        (0..total)
            .map(|mut idx| {
                let mut assignment = vec![Part::T0; r];
                for slot in assignment.iter_mut().rev() {
                    *slot = [Part::T0, Part::T1, Part::T2][idx % 3];
                    idx /= 3;
                }
                Partition3 { assignment }
            })
            .filter(|p| {
                p.assignment.iter().any(|&x| x != Part::T0)
                    && p.assignment
                        .iter()
                        .enumerate()
                        .all(|(t, &x)| x != Part::T2 || self.colors_in_type(t) >= 2)
            })
            .collect()
    }

    /// Largest useful label count for a partition.
    fn max_labels(&self, p: &Partition3) -> usize {
        let t1 = p.mask(Part::T1).count_ones() as usize;
        let t2 = p.mask(Part::T2).count_ones() as usize;
        (t1 + 2 * t2).min(2 * self.r()).min(self.c())
    }

    /// Per-vertex distance from an unplaced vertex of type `s` to a placement
    /// occupying `types`.
    fn reach(&self, s: usize, types: u32) -> u32 {
        (0..self.r())
            .filter(|&t| types >> t & 1 == 1)
            .map(|t| self.delta[s][t])
            .min()
            .unwrap_or(INF)
    }

    fn occupied(amounts: &[Amount]) -> u32 {
        amounts
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != Amount::None)
            .fold(0, |acc, (t, _)| acc | 1 << t)
    }

    /// Types holding vertices of `color` left outside the placement.
    fn unplaced_types(&self, color: Color, amounts: &[Amount]) -> impl Iterator<Item = usize> + '_ {
        let amounts = amounts.to_vec();
        (0..self.r()).filter(move |&t| {
            let cell = self.cell(t, color);
            !cell.is_empty()
                && match amounts[t] {
                    Amount::None => true,
                    Amount::One => cell.len() >= 2,
                    Amount::All => false,
                }
        })
    }

    fn vertices_of(&self, color: Color, amounts: &[Amount]) -> Vec<Vertex> {
        let mut out = Vec::new();
        for (t, &a) in amounts.iter().enumerate() {
            let cell = self.cell(t, color);
            match a {
                Amount::None => {}
                Amount::One => out.push(cell[0]),
                Amount::All => out.extend_from_slice(cell),
            }
        }
        out.sort_unstable();
        out
    }

    /// Amount vectors over the types in `mask` (cells assumed nonempty),
    /// drawing each entry from `menu`; `All` is skipped on single-vertex cells.
    fn placements(&self, color: Color, mask: u32, menu: &[Amount]) -> Vec<Vec<Amount>> {
        let mut out = vec![vec![Amount::None; self.r()]];
        for t in (0..self.r()).filter(|&t| mask >> t & 1 == 1) {
            let single = self.cell(t, color).len() == 1;
            out = out
                .into_iter()
                .flat_map(|base| {
                    menu.iter()
                        .filter(move |&&a| !(single && a == Amount::All))
                        .map(move |&a| {
                            let mut next = base.clone();
                            next[t] = a;
                            next
                        })
                })
                .collect();
        }
        out
    }

    /// Cheapest placement of the non-responsible color `other` on `T2` types,
    /// given the responsible placement `resp` of `resp_color`.
    fn cheapest_companion(
        &self,
        p: &Partition3,
        resp_color: Color,
        resp: &[Amount],
        other: Color,
    ) -> Option<Vec<Vertex>> {
        let t2 = p.mask(Part::T2);
        let solution_types = p.mask(Part::T1) | t2;
        let avail = (0..self.r())
            .filter(|&t| t2 >> t & 1 == 1 && !self.cell(t, other).is_empty())
            .fold(0u32, |acc, t| acc | 1 << t);
        let resp_types = Self::occupied(resp);
        let resp_unplaced: Vec<usize> = self.unplaced_types(resp_color, resp).collect();

        let mut best: Option<Vec<Vertex>> = None;
        for amounts in self.placements(other, avail, &[Amount::None, Amount::One, Amount::All]) {
            let types = Self::occupied(&amounts);
            if types == 0 {
                continue;
            }
            // Own vertices: nearest own-colored vertex no farther than any
            // solution-carrying type.
            let own_ok = self
                .unplaced_types(other, &amounts)
                .all(|s| self.reach(s, types) <= self.reach(s, solution_types));
            // Responsible vertices must not be pulled closer to this color.
            let resp_ok = resp_unplaced
                .iter()
                .all(|&s| self.reach(s, resp_types) <= self.reach(s, types));
            if own_ok && resp_ok {
                best = keep_best(best, Some(self.vertices_of(other, &amounts)));
            }
        }
        best
    }

    /// Smallest vertex set over the colors `colors` of one label whose
    /// responsible color occupies exactly the types in `label_types`.
    pub fn best_for_label_types(
        &self,
        p: &Partition3,
        label_types: u32,
        colors: &[Color],
    ) -> Option<Vec<Vertex>> {
        let t1 = p.mask(Part::T1);
        let t2 = p.mask(Part::T2);
        if label_types == 0 || label_types & !(t1 | t2) != 0 {
            return None;
        }
        // Foreign solution-carrying types for the responsible color.
        let foreign = t2 | (t1 & !label_types);

        let mut best: Option<Vec<Vertex>> = None;
        for &resp_color in colors {
            let present = (0..self.r())
                .filter(|&t| label_types >> t & 1 == 1)
                .all(|t| !self.cell(t, resp_color).is_empty());
            if !present {
                continue;
            }
            'placement: for resp in
                self.placements(resp_color, label_types, &[Amount::One, Amount::All])
            {
                let types = Self::occupied(&resp);
                let consistent_alone = self
                    .unplaced_types(resp_color, &resp)
                    .all(|s| self.reach(s, types) <= self.reach(s, foreign));
                if !consistent_alone {
                    continue;
                }
                let mut chosen = self.vertices_of(resp_color, &resp);
                for &other in colors.iter().filter(|&&x| x != resp_color) {
                    match self.cheapest_companion(p, resp_color, &resp, other) {
                        Some(vs) => chosen.extend(vs),
                        None => continue 'placement,
                    }
                }
                chosen.sort_unstable();
                best = keep_best(best, Some(chosen));
            }
        }
        best
    }

    /// `S_i` for label `label` of a scenario under a labeling.
    pub fn best_for_label(
        &self,
        p: &Partition3,
        occ: &OccAssignment,
        coding: &LabelCoding,
        label: usize,
    ) -> Option<Vec<Vertex>> {
        let colors = coding.class(label);
        if colors.is_empty() {
            return None;
        }
        self.best_for_label_types(p, occ.types_of(label), &colors)
    }

    /// All `(partition, occ)` pairs for `k = 1..=min(2r, c)`: `T1` types carry
    /// one label, `T2` types at least two, `T0` none, and every label is used.
    pub fn enumerate_scenarios(&self) -> Vec<(Partition3, OccAssignment)> {
        let mut out = Vec::new();
        let kmax = (2 * self.r()).min(self.c());
        for p in self.partitions() {
            for k in 1..=kmax {
                let options: Vec<Vec<u32>> = p
                    .assignment
                    .iter()
                    .map(|part| match part {
                        Part::T0 => vec![0],
                        Part::T1 => (0..k).map(|l| 1u32 << l).collect(),
                        Part::T2 => (0u32..1 << k).filter(|m| m.count_ones() >= 2).collect(),
                    })
                    .collect();
                let all_labels = (1u32 << k) - 1;
                let mut combos: Vec<Vec<u32>> = vec![Vec::new()];
                for opts in &options {
                    combos = combos
                        .into_iter()
                        .flat_map(|base| {
                            opts.iter().map(move |&m| {
                                let mut next = base.clone();
                                next.push(m);
                                next
                            })
                        })
                        .collect();
                }
                for per_type_labels in combos {
                    if per_type_labels.iter().fold(0, |acc, &m| acc | m) == all_labels {
                        out.push((p.clone(), OccAssignment { k, per_type_labels }));
                    }
                }
            }
        }
        out
    }
}

/// Minimum over occurrence functions for a fixed partition and labeling, by
/// dynamic programming over labels. The state records, per solution-carrying
/// type, how many labels occupy it so far (0, 1, or 2+).
struct LabelDp<'p> {
    partition: &'p Partition3,
    active: Vec<usize>,
    t1: u32,
}

impl<'p> LabelDp<'p> {
    fn new(partition: &'p Partition3) -> Self {
        let active = (0..partition.assignment.len())
            .filter(|&t| partition.assignment[t] != Part::T0)
            .collect();
        Self {
            partition,
            active,
            t1: partition.mask(Part::T1),
        }
    }

    fn run(
        &self,
        blocks: &[Vec<Color>],
        mut cost: impl FnMut(u32, &[Color]) -> Option<Vec<Vertex>>,
    ) -> Option<Vec<Vertex>> {
        let a = self.active.len();
        let states = 3usize.pow(a as u32);
        let digit = |state: usize, i: usize| state / 3usize.pow(i as u32) % 3;

        let mut table: Vec<Option<(usize, Vec<Vec<Vertex>>)>> = vec![None; states];
        table[0] = Some((0, Vec::new()));
        for block in blocks {
            let mut next: Vec<Option<(usize, Vec<Vec<Vertex>>)>> = vec![None; states];
            let mut options: Vec<(usize, u32, Vec<Vertex>)> = Vec::new();
            for sub in 1u32..1 << a {
                let types = (0..a)
                    .filter(|&i| sub >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc | 1 << self.active[i]);
                if let Some(vs) = cost(types, block) {
                    options.push((sub as usize, types, vs));
                }
            }
            for (state, entry) in table.iter().enumerate() {
                let Some((size, parts)) = entry else { continue };
                'option: for (sub, _, vs) in &options {
                    let mut to = state;
                    for i in 0..a {
                        if sub >> i & 1 == 0 {
                            continue;
                        }
                        let d = digit(state, i);
                        let is_t1 = self.t1 >> self.active[i] & 1 == 1;
                        if is_t1 && d >= 1 {
                            continue 'option;
                        }
                        if d < 2 {
                            to += 3usize.pow(i as u32);
                        }
                    }
                    let total = size + vs.len();
                    if next[to].as_ref().is_none_or(|(s, _)| total < *s) {
                        let mut p = parts.clone();
                        p.push(vs.clone());
                        next[to] = Some((total, p));
                    }
                }
            }
            table = next;
        }
        let goal = (0..a).fold(0usize, |acc, i| {
            let want = match self.partition.assignment[self.active[i]] {
                Part::T1 => 1,
                _ => 2,
            };
            acc + want * 3usize.pow(i as u32)
        });
        table[goal].take().map(|(_, parts)| {
            let mut s: Vec<Vertex> = parts.into_iter().flatten().collect();
            s.sort_unstable();
            s
        })
    }
}

pub fn solve_nd(
    g: &ColoredGraph,
    decomp: Option<&TypeDecomposition>,
) -> Result<Solution, SolveError> {
    solve_nd_with(g, &all_pairs_distances(g), decomp, &NdConfig::default())
}

pub fn solve_nd_with(
    g: &ColoredGraph,
    dist: &DistanceMatrix,
    decomp: Option<&TypeDecomposition>,
    config: &NdConfig,
) -> Result<Solution, SolveError> {
    let computed;
    let decomp = match decomp {
        Some(d) => d,
        None => {
            computed = neighborhood_decomposition(g);
            &computed
        }
    };
    let r = decomp.r();
    if r > config.r_limit {
        return Err(SolveError::ParameterTooLarge {
            name: "neighborhood diversity",
            value: r,
            limit: config.r_limit,
        });
    }
    let inst = NdInstance::new(g, dist, decomp);
    let c = g.num_colors();

    // Work units: (partition, k, labeling mode).
    let mut units = Vec::new();
    let mut sampled = false;
    for p in inst.partitions() {
        for k in 1..=inst.max_labels(&p) {
            let exhaustive_ok = (k as u64)
                .checked_pow(c as u32)
                .is_some_and(|t| t <= config.labeling_budget);
            let mode = match config.mode {
                Some(m) => m,
                None if exhaustive_ok => LabelingMode::Exhaustive,
                None => LabelingMode::Random {
                    seed: config.seed,
                    trials: random_trials(k, config.failure),
                },
            };
            if let LabelingMode::Random { .. } = mode {
                sampled = true;
            }
            units.push((p.clone(), k, mode));
        }
    }

    let timed_out = AtomicBool::new(false);
    let (best, explored) = units
        .par_iter()
        .map(|(p, k, mode)| {
            let labelings: Vec<Vec<Vec<Color>>> = match *mode {
                LabelingMode::Exhaustive => set_partitions(c, *k)
                    .into_iter()
                    .map(|rgs| blocks_of(&rgs, *k))
                    .collect(),
                LabelingMode::Random { seed, trials } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(
                        seed ^ (*k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                    );
                    (0..trials)
                        .map(|_| blocks_of(&random_labels(&mut rng, c, *k), *k))
                        .collect()
                }
            };
            let dp = LabelDp::new(p);
            let mut memo: HashMap<(u32, Vec<Color>), Option<Vec<Vertex>>> = HashMap::new();
            let mut best: Option<Vec<Vertex>> = None;
            let mut explored = 0u64;
            for (i, blocks) in labelings.iter().enumerate() {
                explored += 1;
                if i % 256 == 0 && (timed_out.load(Ordering::Relaxed) || config.deadline.expired())
                {
                    timed_out.store(true, Ordering::Relaxed);
                    explored += (labelings.len() - i - 1) as u64;
                    break;
                }
                if blocks.iter().any(|b| b.is_empty()) {
                    continue;
                }
                let found = dp.run(blocks, |types, colors| {
                    memo.entry((types, colors.to_vec()))
                        .or_insert_with(|| inst.best_for_label_types(p, types, colors))
                        .clone()
                });
                if let Some(s) = found {
                    if is_consistent(g, dist, &s).consistent {
                        best = keep_best(best, Some(s));
                    } else {
                        log::warn!("nd candidate {:?} failed certification", s);
                    }
                }
            }
            (best, explored)
        })
        .reduce(|| (None, 0), |a, b| (keep_best(a.0, b.0), a.1 + b.1));

    let finish = |vertices: Vec<Vertex>, optimal: bool| {
        let verified = is_consistent(g, dist, &vertices).consistent;
        Solution {
            vertices,
            method: Method::Nd,
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
        Some(s) => Ok(finish(s, !sampled)),
        None => Err(SolveError::NoFeasibleGuess),
    }
}

fn blocks_of(labels: &[usize], k: usize) -> Vec<Vec<Color>> {
    let mut blocks = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        blocks[l].push(i as Color + 1);
    }
    blocks
}

/// Literal sweep over every scenario and every labeling, one label at a time.
/// Exponentially slower than [`solve_nd_with`]; used to cross-check it.
pub fn solve_nd_by_scenarios(
    g: &ColoredGraph,
    dist: &DistanceMatrix,
    decomp: &TypeDecomposition,
) -> Option<Vec<Vertex>> {
    let inst = NdInstance::new(g, dist, decomp);
    let c = g.num_colors();
    let mut best = None;
    for (p, occ) in inst.enumerate_scenarios() {
        let labelings = enumerate_labelings(c, occ.k, LabelingMode::Exhaustive, u64::MAX)
            .expect("unbounded budget");
        for coding in labelings {
            let parts: Option<Vec<Vec<Vertex>>> = (0..occ.k)
                .map(|label| inst.best_for_label(&p, &occ, &coding, label))
                .collect();
            let Some(parts) = parts else { continue };
            let mut s: Vec<Vertex> = parts.into_iter().flatten().collect();
            s.sort_unstable();
            if is_consistent(g, dist, &s).consistent {
                best = keep_best(best, Some(s));
            }
        }
    }
    best
}

/// An inclusion-minimal responsible color set for a consistent `S`: the
/// color of every single-color type and two colors of every multi-color type.
pub fn minimal_responsible_set(
    g: &ColoredGraph,
    dist: &DistanceMatrix,
    set: &[Vertex],
    decomp: &TypeDecomposition,
) -> Result<Vec<Color>, NdError> {
    if !is_consistent(g, dist, set).consistent {
        return Err(NdError::NotConsistent);
    }
    let mut type_colors: Vec<Vec<Color>> = vec![Vec::new(); decomp.r()];
    for &v in set {
        type_colors[decomp.type_of[v]].push(g.color(v));
    }
    for colors in &mut type_colors {
        colors.sort_unstable();
        colors.dedup();
    }

    let mut chosen: Vec<Color> = Vec::new();
    for colors in type_colors.iter().filter(|cs| cs.len() == 1) {
        if !chosen.contains(&colors[0]) {
            chosen.push(colors[0]);
        }
    }
    for colors in type_colors.iter().filter(|cs| cs.len() >= 2) {
        let mut have = colors.iter().filter(|c| chosen.contains(c)).count();
        for &c in colors {
            if have >= 2 {
                break;
            }
            if !chosen.contains(&c) {
                chosen.push(c);
                have += 1;
            }
        }
    }

    let valid = |r: &[Color]| {
        type_colors.iter().all(|cs| match cs.len() {
            0 => true,
            1 => r.contains(&cs[0]),
            _ => cs.iter().filter(|c| r.contains(c)).count() >= 2,
        })
    };
    let mut i = chosen.len();
    while i > 0 {
        i -= 1;
        let mut without = chosen.clone();
        without.remove(i);
        if valid(&without) {
            chosen = without;
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::graph::fixtures::*;

    fn solve(g: &ColoredGraph) -> Solution {
        solve_nd(g, None).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(solve(&p3_rbr()).vertices, vec![0, 1, 2]);
        assert_eq!(solve(&complete(5, &[R; 5])).vertices, vec![0]);
        assert_eq!(solve(&complete(2, &[R, B])).size(), 2);
        assert_eq!(solve(&star(R, B)).size(), 4);
        let single = build_graph(&[], &[R]).unwrap();
        assert_eq!(solve(&single).vertices, vec![0]);
    }

    #[test]
    fn parameter_limit() {
        let g = path(&[R, B, R, B, R]);
        assert_eq!(neighborhood_decomposition(&g).r(), 5);
        assert_eq!(
            solve_nd(&g, None),
            Err(SolveError::ParameterTooLarge {
                name: "neighborhood diversity",
                value: 5,
                limit: 4
            })
        );
    }

    #[test]
    fn labeling_counts() {
        assert_eq!(
            enumerate_labelings(2, 2, LabelingMode::Exhaustive, 100)
                .unwrap()
                .count(),
            4
        );
        let all: Vec<_> = enumerate_labelings(3, 2, LabelingMode::Exhaustive, 100)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[1].label_of, vec![0, 0, 1]);
        assert!(matches!(
            enumerate_labelings(10, 6, LabelingMode::Exhaustive, DEFAULT_LABELING_BUDGET),
            Err(NdError::BudgetExceeded { .. })
        ));
        let mode = LabelingMode::Random {
            seed: 9,
            trials: 20,
        };
        let a: Vec<_> = enumerate_labelings(5, 3, mode, 0).unwrap().collect();
        let b: Vec<_> = enumerate_labelings(5, 3, mode, 0).unwrap().collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|l| l.label_of.iter().all(|&x| x < 3)));
    }

    #[test]
    fn set_partition_counts_are_stirling_numbers() {
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(5, 3).len(), 25);
        assert_eq!(set_partitions(3, 3), vec![vec![0, 1, 2]]);
        assert!(set_partitions(2, 3).is_empty());
    }

    #[test]
    fn scenario_counts_single_type() {
        let g = complete(2, &[R, B]);
        let d = all_pairs_distances(&g);
        let decomp = neighborhood_decomposition(&g);
        let inst = NdInstance::new(&g, &d, &decomp);
        let scenarios = inst.enumerate_scenarios();
        // T1 with k = 1, T2 with k = 2 (both labels); T0 has no valid occ.
        let t2: Vec<_> = scenarios
            .iter()
            .filter(|(p, _)| p.assignment[0] == Part::T2)
            .collect();
        assert_eq!(t2.len(), 1);
        assert_eq!(t2[0].1.per_type_labels, vec![0b11]);
        assert!(scenarios.iter().all(|(p, _)| p.assignment[0] != Part::T0));
    }

    #[test]
    fn forced_singleton_label() {
        let g = complete(3, &[R; 3]);
        let d = all_pairs_distances(&g);
        let decomp = neighborhood_decomposition(&g);
        let inst = NdInstance::new(&g, &d, &decomp);
        let p = Partition3 {
            assignment: vec![Part::T1],
        };
        assert_eq!(inst.best_for_label_types(&p, 1, &[R]), Some(vec![0]));
    }

    #[test]
    fn literal_sweep_matches_on_p3() {
        let g = p3_rbr();
        let d = all_pairs_distances(&g);
        let decomp = neighborhood_decomposition(&g);
        assert_eq!(solve_nd_by_scenarios(&g, &d, &decomp), Some(vec![0, 1, 2]));
        // Both types in T2 is impossible: each holds a single color.
        let inst = NdInstance::new(&g, &d, &decomp);
        assert!(inst
            .partitions()
            .iter()
            .all(|p| p.assignment.iter().all(|&x| x != Part::T2)));
    }

    #[test]
    fn responsible_sets() {
        let g = p3_rbr();
        let d = all_pairs_distances(&g);
        let decomp = neighborhood_decomposition(&g);
        assert_eq!(
            minimal_responsible_set(&g, &d, &[0, 1, 2], &decomp).unwrap(),
            vec![R, B]
        );
        assert_eq!(
            minimal_responsible_set(&g, &d, &[1], &decomp),
            Err(NdError::NotConsistent)
        );

        let k3 = complete(3, &[R, B, 3]);
        let d = all_pairs_distances(&k3);
        let decomp = neighborhood_decomposition(&k3);
        let rs = minimal_responsible_set(&k3, &d, &[0, 1, 2], &decomp).unwrap();
        assert_eq!(rs, vec![R, B]);

        let mono = complete(3, &[R; 3]);
        let d = all_pairs_distances(&mono);
        let decomp = neighborhood_decomposition(&mono);
        assert_eq!(
            minimal_responsible_set(&mono, &d, &[1], &decomp).unwrap(),
            vec![R]
        );
    }
}
