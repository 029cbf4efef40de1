//! Seeded random set families.

use std::collections::HashSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::rng::Rng;
use crate::error::{Error, Result};
use crate::family::{GroundSet, MemberSet, SetFamily, MAX_GROUND};

/// Enumerate-and-sample instead of rejection when at most this many
/// candidate sets exist.
const DENSE_LIMIT: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionKind {
    /// Distinct uniform subsets of cardinality exactly `set_size`.
    UniformJSubsets,
    /// Distinct uniform nonempty subsets of cardinality at most `set_size`.
    UniformAtMost,
    /// Sets made of one center (drawn from a few fixed centers) plus
    /// `set_size − 1` non-center elements.
    StarUnion,
    /// Copies of the complete `set_size`-uniform family on `set_size + 1`
    /// points, on disjoint blocks of a random labelling.
    DisjointBlocks,
    /// Transversals of `set_size` groups of `⌊ground/set_size⌋` elements.
    SunflowerFreeConstruction,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 5] = [
        DistributionKind::UniformJSubsets,
        DistributionKind::UniformAtMost,
        DistributionKind::StarUnion,
        DistributionKind::DisjointBlocks,
        DistributionKind::SunflowerFreeConstruction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistributionKind::UniformJSubsets => "uniform-j-subsets",
            DistributionKind::UniformAtMost => "uniform-at-most",
            DistributionKind::StarUnion => "star-union",
            DistributionKind::DisjointBlocks => "disjoint-blocks",
            DistributionKind::SunflowerFreeConstruction => "sunflower-free-construction",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Number of distinct sets the kind can produce on `ground` points.
    pub fn capacity(self, ground: u32, set_size: u32) -> u128 {
        let (n, t) = (ground as usize, set_size as usize);
        match self {
            DistributionKind::UniformJSubsets => binomial_sat(n, t),
            DistributionKind::UniformAtMost => {
                (1..=t).fold(0u128, |acc, i| acc.saturating_add(binomial_sat(n, i)))
            }
            DistributionKind::StarUnion => (2..=n)
                .take_while(|&c| c + t - 1 <= n)
                .map(|c| (c as u128).saturating_mul(binomial_sat(n - c, t - 1)))
                .max()
                .unwrap_or(0),
            DistributionKind::DisjointBlocks => ((n / (t + 1)) * (t + 1)) as u128,
            DistributionKind::SunflowerFreeConstruction => {
                let g = (n / t) as u128;
                (0..t).fold(1u128, |acc, _| acc.saturating_mul(g))
            }
        }
    }
}

/// Parameters of a seeded family draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyDistribution {
    pub kind: DistributionKind,
    pub ground_size: u32,
    pub set_size: u32,
    pub family_size: usize,
    pub seed: u64,
}

/// `C(n, t)`, saturating at `u128::MAX`.
pub(crate) fn binomial_sat(n: usize, t: usize) -> u128 {
    if t > n {
        return 0;
    }
    let t = t.min(n - t);
    let mut acc = 1u128;
    for i in 0..t {
        // acc · (n−i)/(i+1) is C(n, i+1); cancelling gcd(acc, i+1) first
        // keeps the product from overflowing unless the result does.
        let d = (i + 1) as u128;
        let g = acc.gcd(&d);
        let factor = (n - i) as u128 / (d / g);
        match (acc / g).checked_mul(factor) {
            Some(v) => acc = v,
            None => return u128::MAX,
        }
    }
    acc
}

/// Draws a family; the same parameters always give the same family.
pub fn generate_family(dist: &FamilyDistribution) -> Result<SetFamily> {
    let n = dist.ground_size;
    let t = dist.set_size;
    if n == 0 || n > MAX_GROUND {
        return Err(Error::invalid(format!(
            "ground size must lie in 1..={MAX_GROUND}"
        )));
    }
    if t == 0 || t > n {
        return Err(Error::invalid("set size must lie in 1..=ground size"));
    }
    let available = dist.kind.capacity(n, t);
    if dist.family_size as u128 > available {
        return Err(Error::Unsatisfiable {
            requested: dist.family_size as u64,
            available: u64::try_from(available).unwrap_or(u64::MAX),
        });
    }
    let ground = GroundSet::new(n)?;
    let mut rng = Rng::new(dist.seed);
    let m = dist.family_size;
    let members = match dist.kind {
        DistributionKind::UniformJSubsets => uniform(&mut rng, n, &[t], m),
        DistributionKind::UniformAtMost => uniform(&mut rng, n, &(1..=t).collect::<Vec<_>>(), m),
        DistributionKind::StarUnion => star_union(&mut rng, n, t, m),
        DistributionKind::DisjointBlocks => disjoint_blocks(&mut rng, n, t, m),
        DistributionKind::SunflowerFreeConstruction => transversals(&mut rng, n, t, m),
    };
    SetFamily::from_members(ground, t, members)
}

fn bits_of(elements: impl IntoIterator<Item = usize>) -> MemberSet {
    MemberSet::from_bits(elements.into_iter().fold(0u128, |acc, e| acc | 1u128 << e))
}

/// Random `t`-subset of `0..n` as bits.
fn random_subset(rng: &mut Rng, n: usize, t: usize) -> MemberSet {
    bits_of(rng.sample_indices(n, t))
}

/// All subsets of `0..n` with a cardinality in `sizes`, in a fixed order.
fn enumerate(n: usize, sizes: &[u32]) -> Vec<MemberSet> {
    let mut out = Vec::new();
    for &t in sizes {
        let t = t as usize;
        let mut combo: Vec<usize> = (0..t).collect();
        loop {
            out.push(bits_of(combo.iter().copied()));
            if !crate::sunflower::next_combination(&mut combo, n) {
                break;
            }
        }
    }
    out
}

/// Keeps drawing with `draw` until `m` distinct sets are collected.
fn distinct(
    rng: &mut Rng,
    m: usize,
    mut draw: impl FnMut(&mut Rng) -> MemberSet,
) -> Vec<MemberSet> {
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let u = draw(rng);
        if seen.insert(u) {
            out.push(u);
        }
    }
    out
}

fn uniform(rng: &mut Rng, n: u32, sizes: &[u32], m: usize) -> Vec<MemberSet> {
    let n = n as usize;
    let weights: Vec<u128> = sizes.iter().map(|&t| binomial_sat(n, t as usize)).collect();
    let total = weights.iter().fold(0u128, |a, &w| a.saturating_add(w));
    if total <= DENSE_LIMIT || (m as u128).saturating_mul(2) >= total {
        let all = enumerate(n, sizes);
        return rng
            .sample_indices(all.len(), m)
            .into_iter()
            .map(|i| all[i])
            .collect();
    }
    distinct(rng, m, |rng| {
        let mut pick = rng.below_u128(total);
        let mut size = sizes[sizes.len() - 1];
        for (&t, &w) in sizes.iter().zip(&weights) {
            if pick < w {
                size = t;
                break;
            }
            pick -= w;
        }
        random_subset(rng, n, size as usize)
    })
}

fn star_union(rng: &mut Rng, n: u32, t: u32, m: usize) -> Vec<MemberSet> {
    let (n, t) = (n as usize, t as usize);
    let mut centers = 2;
    while (centers as u128).saturating_mul(binomial_sat(n - centers, t - 1)) < m as u128 {
        centers += 1;
    }
    let mut labels: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut labels);
    let (hubs, rest) = labels.split_at(centers);
    distinct(rng, m, |rng| {
        let c = hubs[rng.below(centers as u64) as usize];
        let petal = rng
            .sample_indices(rest.len(), t - 1)
            .into_iter()
            .map(|i| rest[i]);
        bits_of(petal.chain([c]))
    })
}

fn disjoint_blocks(rng: &mut Rng, n: u32, t: u32, m: usize) -> Vec<MemberSet> {
    let (n, t) = (n as usize, t as usize);
    let mut labels: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut labels);
    let mut out = Vec::with_capacity(m);
    for block in labels.chunks_exact(t + 1) {
        // The t-subsets of a (t+1)-block are its complements of one point.
        for skip in 0..=t {
            if out.len() == m {
                return out;
            }
            out.push(bits_of(
                block
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &e)| e),
            ));
        }
    }
    out
}

fn transversals(rng: &mut Rng, n: u32, t: u32, m: usize) -> Vec<MemberSet> {
    let (n, t) = (n as usize, t as usize);
    let g = n / t;
    let mut labels: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut labels);
    let groups: Vec<&[usize]> = labels.chunks_exact(g).take(t).collect();
    let total = g.pow(t as u32);
    let decode = |mut code: usize| {
        bits_of(groups.iter().map(|grp| {
            let e = grp[code % g];
            code /= g;
            e
        }))
    };
    if total as u128 <= DENSE_LIMIT {
        return rng
            .sample_indices(total, m)
            .into_iter()
            .map(decode)
            .collect();
    }
    distinct(rng, m, |rng| {
        bits_of(groups.iter().map(|grp| grp[rng.below(g as u64) as usize]))
    })
}
