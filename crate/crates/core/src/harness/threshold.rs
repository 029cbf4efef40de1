//! Extraction success rates across the classic threshold.

use std::ops::RangeInclusive;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::generate::{generate_family, DistributionKind, FamilyDistribution};
use super::rng::derive_seed;
use crate::bounds::phi0;
use crate::error::{Error, Result};
use crate::oracle::brute_force_find_sunflower;
use crate::sunflower::{binomial_u128, extract_er};

/// Brute force runs in a row only when `C(|F|, k)` is at most this.
pub const TABLE_BRUTE_CAP: u128 = 1_000_000;

/// Desk-scale limits.
pub const MAX_EXPERIMENT_SIZE: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub size: usize,
    pub trials: u64,
    pub er_found: u64,
    pub er_rate: f64,
    /// Families with a `k`-sunflower by brute force, when feasible.
    pub brute_found: Option<u64>,
    pub above_phi0: bool,
    /// Every returned sunflower re-verified against its family.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdTable {
    pub k: usize,
    pub s: u32,
    pub kind: DistributionKind,
    pub ground_size: u32,
    pub seed: u64,
    pub phi0: String,
    pub rows: Vec<ThresholdRow>,
    /// Rate is 1 on every row strictly above Φ₀.
    pub guarantee_holds: bool,
    /// Rates never decrease with size (reported only).
    pub monotone: bool,
}

struct Trial {
    er: bool,
    brute: Option<bool>,
    verified: bool,
}

/// Runs `trials` draws per family size. The seed of trial `t` at size `m` is
/// `derive_seed(derive_seed(dist.seed, m), t)`; `dist.family_size` is
/// ignored and `dist.set_size` is replaced by `s`.
pub fn threshold_experiment(
    k: usize,
    s: u32,
    dist: &FamilyDistribution,
    sizes: RangeInclusive<usize>,
    trials: u64,
) -> Result<ThresholdTable> {
    if k == 0 || k > 6 || s == 0 || s > 4 {
        return Err(Error::invalid(
            "threshold experiments need 1 <= k <= 6 and 1 <= s <= 4",
        ));
    }
    if *sizes.end() > MAX_EXPERIMENT_SIZE {
        return Err(Error::invalid(format!(
            "family sizes are capped at {MAX_EXPERIMENT_SIZE}"
        )));
    }
    let p0 = phi0(k as u64, u64::from(s))?;
    let mut rows = Vec::new();
    for size in sizes {
        let brute_ok = binomial_u128(size, k) <= TABLE_BRUTE_CAP;
        let row_seed = derive_seed(dist.seed, size as u64);
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|t| {
                let d = FamilyDistribution {
                    set_size: s,
                    family_size: size,
                    seed: derive_seed(row_seed, t),
                    ..*dist
                };
                let f = generate_family(&d)?;
                let er = extract_er(&f, k)?;
                let mut verified = er.sunflower().is_none_or(|sf| sf.verify(&f));
                let brute = if brute_ok {
                    let found = brute_force_find_sunflower(&f, k)?;
                    verified &= found.as_ref().is_none_or(|sf| sf.verify(&f));
                    Some(found.is_some())
                } else {
                    None
                };
                Ok(Trial {
                    er: er.is_found(),
                    brute,
                    verified,
                })
            })
            .collect::<Result<Vec<Trial>>>()?;
        let er_found = outcomes.iter().filter(|t| t.er).count() as u64;
        rows.push(ThresholdRow {
            size,
            trials,
            er_found,
            er_rate: if trials == 0 {
                1.0
            } else {
                er_found as f64 / trials as f64
            },
            brute_found: brute_ok
                .then(|| outcomes.iter().filter(|t| t.brute == Some(true)).count() as u64),
            above_phi0: BigUint::from(size) > p0,
            verified: outcomes.iter().all(|t| t.verified),
        });
    }
    let guarantee_holds = rows
        .iter()
        .all(|r| r.verified && (!r.above_phi0 || r.er_found == r.trials));
    let monotone = rows.windows(2).all(|w| w[0].er_rate <= w[1].er_rate);
    Ok(ThresholdTable {
        k,
        s,
        kind: dist.kind,
        ground_size: dist.ground_size,
        seed: dist.seed,
        phi0: p0.to_string(),
        rows,
        guarantee_holds,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_is_one_above_eight_for_three_two() {
        let dist = FamilyDistribution {
            kind: DistributionKind::UniformAtMost,
            ground_size: 7,
            set_size: 2,
            family_size: 0,
            seed: 1,
        };
        let t = threshold_experiment(3, 2, &dist, 2..=20, 30).unwrap();
        assert!(t.guarantee_holds);
        for row in &t.rows {
            if row.size >= 9 {
                assert_eq!(row.er_rate, 1.0);
                assert_eq!(row.brute_found, Some(row.trials));
            }
        }
        assert_eq!(t, threshold_experiment(3, 2, &dist, 2..=20, 30).unwrap());
    }

    #[test]
    fn two_distinct_sets_form_a_two_sunflower() {
        let dist = FamilyDistribution {
            kind: DistributionKind::UniformJSubsets,
            ground_size: 6,
            set_size: 2,
            family_size: 0,
            seed: 4,
        };
        let t = threshold_experiment(2, 2, &dist, 2..=15, 10).unwrap();
        assert!(t.rows.iter().all(|r| r.brute_found == Some(r.trials)));
    }
}
