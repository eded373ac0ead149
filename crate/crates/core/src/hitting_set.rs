//! Exact minimum hitting sets for families with few members.
//!
//! Each element is reduced to its *signature*, the bit mask of family members
//! it hits, and a dynamic program over the `2^m` member masks finds the
//! minimum. Running time is `O(2^m * |U|)`.

use thiserror::Error;

/// Default cap on both the family size and (for enumeration) the universe size.
pub const DEFAULT_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HittingSetError {
    #[error("family has {m} members, limit is {limit}")]
    FamilyTooLarge { m: usize, limit: usize },
    #[error("universe has {size} elements, limit is {limit}")]
    UniverseTooLarge { size: usize, limit: usize },
    #[error("family contains a member with no universe element")]
    Infeasible,
}

/// A set system `(U, F)`. Members may mention elements outside `universe`;
/// such elements are never chosen.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SetSystem {
    pub universe: Vec<usize>,
    pub family: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(universe: Vec<usize>, family: Vec<Vec<usize>>) -> Self {
        Self { universe, family }
    }

    /// Sorted, deduplicated universe paired with each element's signature.
    fn signatures(&self) -> Vec<(usize, u32)> {
        let mut universe = self.universe.clone();
        universe.sort_unstable();
        universe.dedup();
        universe
            .into_iter()
            .map(|e| {
                let sig = self
                    .family
                    .iter()
                    .enumerate()
                    .filter(|(_, member)| member.contains(&e))
                    .fold(0u32, |acc, (i, _)| acc | 1 << i);
                (e, sig)
            })
            .collect()
    }

    pub fn is_hit_by(&self, set: &[usize]) -> bool {
        self.family.iter().all(|member| {
            member
                .iter()
                .any(|e| set.contains(e) && self.universe.contains(e))
        })
    }
}

pub fn min_hitting_set(sys: &SetSystem) -> Result<Vec<usize>, HittingSetError> {
    min_hitting_set_with_limit(sys, DEFAULT_LIMIT)
}

/// Minimum-cardinality hitting set; among those, the lexicographically
/// smallest ascending element list.
pub fn min_hitting_set_with_limit(
    sys: &SetSystem,
    limit: usize,
) -> Result<Vec<usize>, HittingSetError> {
    let m = sys.family.len();
    if m > limit || m > 31 {
        return Err(HittingSetError::FamilyTooLarge {
            m,
            limit: limit.min(31),
        });
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let elements: Vec<(usize, u32)> = sys
        .signatures()
        .into_iter()
        .filter(|&(_, sig)| sig != 0)
        .collect();
    let covered = elements.iter().fold(0u32, |acc, &(_, sig)| acc | sig);
    let full = (1u32 << m) - 1;
    if covered != full {
        return Err(HittingSetError::Infeasible);
    }

    // Distinct signatures suffice for the table.
    let mut sigs: Vec<u32> = elements.iter().map(|&(_, s)| s).collect();
    sigs.sort_unstable();
    sigs.dedup();

    const UNREACHED: u8 = u8::MAX;
    let mut dp = vec![UNREACHED; 1usize << m];
    dp[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let mut best = UNREACHED;
        for &sig in &sigs {
            if sig & low != 0 {
                let rest = dp[(mask & !sig) as usize];
                if rest < best {
                    best = rest;
                }
            }
        }
        dp[mask as usize] = best.saturating_add(1);
    }

    let mut out = Vec::with_capacity(dp[full as usize] as usize);
    let mut mask = full;
    while mask != 0 {
        let need = dp[mask as usize] - 1;
        let &(e, sig) = elements
            .iter()
            .find(|&&(_, sig)| sig & mask != 0 && dp[(mask & !sig) as usize] == need)
            .expect("table admits a reconstruction step");
        out.push(e);
        mask &= !sig;
    }
    Ok(out)
}

/// All inclusion-minimal hitting sets, sorted by size then lexicographically.
/// A family with an unhittable member has none.
pub fn enumerate_min_hitting_sets(sys: &SetSystem) -> Result<Vec<Vec<usize>>, HittingSetError> {
    enumerate_min_hitting_sets_with_limit(sys, DEFAULT_LIMIT)
}

pub fn enumerate_min_hitting_sets_with_limit(
    sys: &SetSystem,
    limit: usize,
) -> Result<Vec<Vec<usize>>, HittingSetError> {
    let m = sys.family.len();
    if m > limit || m > 31 {
        return Err(HittingSetError::FamilyTooLarge {
            m,
            limit: limit.min(31),
        });
    }
    let elements = sys.signatures();
    let u = elements.len();
    if u > limit || u > 31 {
        return Err(HittingSetError::UniverseTooLarge {
            size: u,
            limit: limit.min(31),
        });
    }
    let full: u32 = if m == 0 { 0 } else { (1u32 << m) - 1 };

    let mut out: Vec<Vec<usize>> = Vec::new();
    for choice in 0u32..(1u32 << u) {
        let mut hit = 0u32;
        for (i, &(_, sig)) in elements.iter().enumerate() {
            if choice >> i & 1 == 1 {
                hit |= sig;
            }
        }
        if hit != full {
            continue;
        }
        let minimal = (0..u).filter(|&i| choice >> i & 1 == 1).all(|i| {
            let without = (0..u)
                .filter(|&j| j != i && choice >> j & 1 == 1)
                .fold(0u32, |acc, j| acc | elements[j].1);
            without != full
        });
        if minimal {
            out.push(
                (0..u)
                    .filter(|&i| choice >> i & 1 == 1)
                    .map(|i| elements[i].0)
                    .collect(),
            );
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}
