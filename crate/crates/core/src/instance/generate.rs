//! Seeded random instances.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`. Two
//! derived draws are used throughout:
//!
//! * `below(n)`: `(x * n) >> 64` on the next 64-bit output `x`,
//! * `chance(p)`: `(x >> 11) / 2^53 < p`.
//!
//! Every generator finishes by relabeling vertices with a Fisher-Yates shuffle
//! (`i` from `n - 1` down to `1`, swap with `below(i + 1)`), so planted
//! structure does not sit at fixed ids.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::graph::{build_graph, Color, ColoredGraph, GraphError, Vertex};
use crate::structural::TypeKind;

const MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// `G(n, p)` conditioned on connectivity.
    GnpConnected { n: usize, p: f64, c: usize },
    /// `k` cover vertices with edges among them at `density`; every other
    /// vertex links to each cover vertex at `density` and to at least one.
    PlantedVc {
        k: usize,
        n: usize,
        c: usize,
        density: f64,
    },
    /// One twin class per entry of `sizes`; each pair of classes is fully
    /// joined at `density`, otherwise not adjacent. `kinds` defaults to a
    /// fair coin per class.
    PlantedNd {
        sizes: Vec<usize>,
        kinds: Option<Vec<TypeKind>>,
        c: usize,
        density: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no connected graph after {0} attempts")]
    RetriesExhausted(usize),
}

struct Draw(ChaCha8Rng);

impl Draw {
    fn below(&mut self, n: usize) -> usize {
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }

    fn chance(&mut self, p: f64) -> bool {
        ((self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64) < p
    }

    fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

fn invalid(msg: impl Into<String>) -> GenerateError {
    GenerateError::InvalidParams(msg.into())
}

fn check_probability(name: &str, p: f64) -> Result<(), GenerateError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {p} is not a probability")))
    }
}

fn check_colors(c: usize, n: usize) -> Result<(), GenerateError> {
    if c == 0 || c > n {
        return Err(invalid(format!("need 1 <= c <= n, got c = {c}, n = {n}")));
    }
    Ok(())
}

/// Each color appears at least once; the rest are uniform.
fn draw_colors(rng: &mut Draw, n: usize, c: usize) -> Vec<Color> {
    let mut order: Vec<Vertex> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut colors = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        colors[v] = if i < c {
            i as Color + 1
        } else {
            rng.below(c) as Color + 1
        };
    }
    colors
}

fn connected(n: usize, edges: &[(Vertex, Vertex)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

fn finish(
    rng: &mut Draw,
    edges: Vec<(Vertex, Vertex)>,
    colors: Vec<Color>,
) -> Result<ColoredGraph, GenerateError> {
    let n = colors.len();
    let mut relabel: Vec<Vertex> = (0..n).collect();
    rng.shuffle(&mut relabel);
    let mut moved = vec![0; n];
    for v in 0..n {
        moved[relabel[v]] = colors[v];
    }
    let edges: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| (relabel[u], relabel[v]))
        .collect();
    build_graph(&edges, &moved).map_err(|e: GraphError| invalid(e.to_string()))
}

pub fn generate(model: &Model, seed: u64) -> Result<ColoredGraph, GenerateError> {
    let mut rng = Draw(ChaCha8Rng::seed_from_u64(seed));
    match model {
        Model::GnpConnected { n, p, c } => gnp(&mut rng, *n, *p, *c),
        Model::PlantedVc { k, n, c, density } => planted_vc(&mut rng, *k, *n, *c, *density),
        Model::PlantedNd {
            sizes,
            kinds,
            c,
            density,
        } => planted_nd(&mut rng, sizes, kinds.as_deref(), *c, *density),
    }
}

fn gnp(rng: &mut Draw, n: usize, p: f64, c: usize) -> Result<ColoredGraph, GenerateError> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    check_probability("p", p)?;
    check_colors(c, n)?;
    for _ in 0..MAX_RETRIES {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.chance(p) {
                    edges.push((u, v));
                }
            }
        }
        if connected(n, &edges) {
            let colors = draw_colors(rng, n, c);
            return finish(rng, edges, colors);
        }
    }
    Err(GenerateError::RetriesExhausted(MAX_RETRIES))
}

fn planted_vc(
    rng: &mut Draw,
    k: usize,
    n: usize,
    c: usize,
    density: f64,
) -> Result<ColoredGraph, GenerateError> {
    if n == 0 || k > n {
        return Err(invalid(format!(
            "need 1 <= n and k <= n, got k = {k}, n = {n}"
        )));
    }
    if k == 0 && n > 1 {
        return Err(invalid("k = 0 only admits a single vertex"));
    }
    check_probability("density", density)?;
    check_colors(c, n)?;
    for _ in 0..MAX_RETRIES {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                if rng.chance(density) {
                    edges.push((u, v));
                }
            }
        }
        for v in k..n {
            let before = edges.len();
            for u in 0..k {
                if rng.chance(density) {
                    edges.push((u, v));
                }
            }
            if edges.len() == before {
                edges.push((rng.below(k), v));
            }
        }
        if connected(n, &edges) {
            let colors = draw_colors(rng, n, c);
            return finish(rng, edges, colors);
        }
    }
    Err(GenerateError::RetriesExhausted(MAX_RETRIES))
}

fn planted_nd(
    rng: &mut Draw,
    sizes: &[usize],
    kinds: Option<&[TypeKind]>,
    c: usize,
    density: f64,
) -> Result<ColoredGraph, GenerateError> {
    let r = sizes.len();
    if r == 0 || sizes.contains(&0) {
        return Err(invalid("need at least one class and positive class sizes"));
    }
    if kinds.is_some_and(|k| k.len() != r) {
        return Err(invalid("one kind per class required"));
    }
    check_probability("density", density)?;
    let n: usize = sizes.iter().sum();
    check_colors(c, n)?;
    let kinds: Vec<TypeKind> = match kinds {
        Some(k) => k.to_vec(),
        None if r == 1 => vec![TypeKind::Clique],
        None => (0..r)
            .map(|_| {
                if rng.chance(0.5) {
                    TypeKind::Clique
                } else {
                    TypeKind::Independent
                }
            })
            .collect(),
    };
    if r == 1 && kinds[0] == TypeKind::Independent && sizes[0] > 1 {
        return Err(invalid("a lone independent class is disconnected"));
    }

    let mut type_edges = Vec::new();
    for attempt in 0..=MAX_RETRIES {
        if attempt == MAX_RETRIES {
            return Err(GenerateError::RetriesExhausted(MAX_RETRIES));
        }
        type_edges.clear();
        for s in 0..r {
            for t in s + 1..r {
                if rng.chance(density) {
                    type_edges.push((s, t));
                }
            }
        }
        if connected(r, &type_edges) {
            break;
        }
    }

    let mut start = vec![0; r];
    for t in 1..r {
        start[t] = start[t - 1] + sizes[t - 1];
    }
    let members = |t: usize| start[t]..start[t] + sizes[t];
    let mut edges = Vec::new();
    for t in 0..r {
        if kinds[t] == TypeKind::Clique {
            for u in members(t) {
                for v in u + 1..start[t] + sizes[t] {
                    edges.push((u, v));
                }
            }
        }
    }
    for &(s, t) in &type_edges {
        for u in members(s) {
            for v in members(t) {
                edges.push((u, v));
            }
        }
    }
    let colors = draw_colors(rng, n, c);
    finish(rng, edges, colors)
}
