//! Search for families above the classic threshold without a sunflower.

use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::generate::{generate_family, DistributionKind, FamilyDistribution};
use super::rng::derive_seed;
use crate::bounds::{check_epsilon, phi0, phi1, phi1_exact, phi2, LogValue};
use crate::error::{Error, Result};
use crate::family::{SetFamily, MAX_GROUND};
use crate::oracle::{brute_force_find_sunflower, BRUTE_FORCE_CAP};
use crate::scalar::{Hp, Real};
use crate::sunflower::{binomial_u128, extract_er};
use crate::surd::QuadSurd;

/// Largest family size a hunt draws.
pub const MAX_HUNT_SIZE: usize = 10_000;

/// Trials run in parallel batches of this size; the hunt stops after the
/// batch containing the first counterexample.
const BATCH: u64 = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct HuntOptions {
    pub kind: DistributionKind,
    /// Directory for reproducer files; none are written when absent.
    pub reproducer_dir: Option<PathBuf>,
}

impl Default for HuntOptions {
    fn default() -> Self {
        HuntOptions {
            kind: DistributionKind::UniformAtMost,
            reproducer_dir: None,
        }
    }
}

/// A family size the hunt draws at, with the bound it sits just above.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntTarget {
    pub size: usize,
    pub above: &'static str,
    /// Smallest ground set on which the distribution reaches `size`.
    pub ground_size: u32,
    /// `size ≥ Φ₁`, decided exactly.
    pub at_least_phi1: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub seed: u64,
    pub size: usize,
    pub ground_size: u32,
    pub family: String,
    pub reproducer: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntReport {
    pub k: usize,
    pub s: u32,
    pub epsilon: f64,
    pub seed: u64,
    pub kind: DistributionKind,
    pub trials: u64,
    pub examined: u64,
    pub phi0: String,
    pub ln_phi1: f64,
    pub ln_phi2: Option<f64>,
    pub targets: Vec<HuntTarget>,
    /// Trials drawn at a size of at least Φ₁.
    pub above_phi1: u64,
    pub checked_by_brute_force: u64,
    pub checked_by_extraction: u64,
    pub sunflowers_found: u64,
    pub counterexamples: Vec<Counterexample>,
}

/// `⌈e^v⌉` for a log-value, if it fits the hunt's size cap.
fn ceil_size(v: &LogValue<Hp>) -> Option<usize> {
    let ln = v.log_value()?;
    if ln.to_f64() > (MAX_HUNT_SIZE as f64).ln() {
        return None;
    }
    ln.exp().ceil().to_f64().to_usize()
}

fn smallest_ground(kind: DistributionKind, s: u32, size: usize) -> Option<u32> {
    (s..=MAX_GROUND).find(|&n| kind.capacity(n, s) >= size as u128)
}

/// Sizes just above Φ₀ (three of them), plus `⌈Φ₁⌉` and `⌈Φ₂⌉` when they lie
/// above those and within reach of the distribution.
pub fn hunt_targets(
    k: usize,
    s: u32,
    epsilon: f64,
    kind: DistributionKind,
) -> Result<Vec<HuntTarget>> {
    let p0 = phi0(k as u64, u64::from(s))?;
    let base = p0.to_usize().filter(|&v| v < MAX_HUNT_SIZE);
    let mut raw: Vec<(usize, &'static str)> = Vec::new();
    if let Some(b) = base {
        raw.extend((1..=3).map(|d| (b + d, "phi0")));
    }
    let floor = base.map_or(usize::MAX, |b| b + 3);
    if let Some(v) = ceil_size(&phi1::<Hp>(k as u64, i64::from(s))?).filter(|&v| v > floor) {
        raw.push((v, "phi1"));
    }
    if let Ok(v2) = phi2::<Hp>(k as u64, i64::from(s), epsilon) {
        if let Some(v) = ceil_size(&v2).filter(|&v| v > floor) {
            raw.push((v, "phi2"));
        }
    }
    let exact_phi1 = phi1_exact(k as u64, i64::from(s))?;
    Ok(raw
        .into_iter()
        .filter(|&(size, _)| size <= MAX_HUNT_SIZE)
        .filter_map(|(size, above)| {
            smallest_ground(kind, s, size).map(|ground_size| HuntTarget {
                size,
                above,
                ground_size,
                at_least_phi1: QuadSurd::from(BigUint::from(size)) >= exact_phi1,
            })
        })
        .collect())
}

struct Outcome {
    trial: u64,
    seed: u64,
    family: SetFamily,
    ground: u32,
    brute: bool,
    found: bool,
}

pub fn counterexample_hunt(
    k: usize,
    s: u32,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<HuntReport> {
    counterexample_hunt_with(k, s, epsilon, trials, seed, &HuntOptions::default())
}

/// Trial `t` draws at target `t mod T` on the target's ground plus
/// `⌊t/T⌋ mod 3` extra points, with seed `derive_seed(seed, t)`. A family is
/// checked by brute force when `C(|F|, k)` is within the brute-force cap and
/// by popular-element extraction otherwise; above Φ₀ both always succeed,
/// so any miss is a counterexample.
pub fn counterexample_hunt_with(
    k: usize,
    s: u32,
    epsilon: f64,
    trials: u64,
    seed: u64,
    opts: &HuntOptions,
) -> Result<HuntReport> {
    if k == 0 || s == 0 {
        return Err(Error::invalid("k and s must be at least 1"));
    }
    check_epsilon(epsilon)?;
    let targets = hunt_targets(k, s, epsilon, opts.kind)?;
    let p0 = phi0(k as u64, u64::from(s))?;
    let ln_phi1 = phi1::<Hp>(k as u64, i64::from(s))?;
    let ln_phi2 = phi2::<Hp>(k as u64, i64::from(s), epsilon).ok();
    let mut report = HuntReport {
        k,
        s,
        epsilon,
        seed,
        kind: opts.kind,
        trials,
        examined: 0,
        phi0: p0.to_string(),
        ln_phi1: ln_phi1.ln_f64(),
        ln_phi2: ln_phi2.as_ref().map(LogValue::ln_f64),
        targets: targets.clone(),
        above_phi1: 0,
        checked_by_brute_force: 0,
        checked_by_extraction: 0,
        sunflowers_found: 0,
        counterexamples: Vec::new(),
    };
    if targets.is_empty() || trials == 0 {
        return Ok(report);
    }
    let nt = targets.len() as u64;
    let mut start = 0;
    while start < trials {
        let end = (start + BATCH).min(trials);
        let outcomes = (start..end)
            .into_par_iter()
            .map(|t| {
                let target = &targets[(t % nt) as usize];
                let ground = (target.ground_size + ((t / nt) % 3) as u32).min(MAX_GROUND);
                let tseed = derive_seed(seed, t);
                let family = generate_family(&FamilyDistribution {
                    kind: opts.kind,
                    ground_size: ground,
                    set_size: s,
                    family_size: target.size,
                    seed: tseed,
                })?;
                let brute = binomial_u128(target.size, k) <= u128::from(BRUTE_FORCE_CAP);
                let found = if brute {
                    brute_force_find_sunflower(&family, k)?.is_some_and(|sf| sf.verify(&family))
                } else {
                    extract_er(&family, k)?
                        .sunflower()
                        .is_some_and(|sf| sf.verify(&family))
                };
                Ok(Outcome {
                    trial: t,
                    seed: tseed,
                    family,
                    ground,
                    brute,
                    found,
                })
            })
            .collect::<Result<Vec<Outcome>>>()?;
        for o in outcomes {
            report.examined += 1;
            report.above_phi1 += u64::from(targets[(o.trial % nt) as usize].at_least_phi1);
            if o.brute {
                report.checked_by_brute_force += 1;
            } else {
                report.checked_by_extraction += 1;
            }
            if o.found {
                report.sunflowers_found += 1;
            } else if BigUint::from(o.family.len()) > p0 {
                let reproducer = match &opts.reproducer_dir {
                    Some(dir) => Some(write_reproducer(dir, k, s, o.trial, &o.family)?),
                    None => None,
                };
                report.counterexamples.push(Counterexample {
                    trial: o.trial,
                    seed: o.seed,
                    size: o.family.len(),
                    ground_size: o.ground,
                    family: o.family.to_text(),
                    reproducer,
                });
                return Ok(report);
            }
        }
        start = end;
    }
    Ok(report)
}

fn write_reproducer(
    dir: &Path,
    k: usize,
    s: u32,
    trial: u64,
    family: &SetFamily,
) -> Result<String> {
    let path = dir.join(format!("counterexample-k{k}-s{s}-trial{trial}.txt"));
    std::fs::write(&path, family.to_text())
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_counterexample_for_three_two() {
        let rep = counterexample_hunt(3, 2, 0.05, 3000, 7).unwrap();
        assert!(rep.counterexamples.is_empty());
        assert_eq!(rep.examined, 3000);
        assert_eq!(rep.sunflowers_found, 3000);
        assert!(rep
            .targets
            .iter()
            .any(|t| t.above == "phi1" && t.size == 18));
        assert!(rep.above_phi1 > 0);
        assert_eq!(rep, counterexample_hunt(3, 2, 0.05, 3000, 7).unwrap());
    }

    #[test]
    fn zero_trials_is_empty() {
        let rep = counterexample_hunt(3, 2, 0.05, 0, 1).unwrap();
        assert_eq!(rep.examined, 0);
        assert!(rep.counterexamples.is_empty());
    }

    #[test]
    fn targets_sit_above_phi0() {
        let t = hunt_targets(3, 3, 0.05, DistributionKind::UniformAtMost).unwrap();
        assert_eq!(t[0].size, 49);
        assert_eq!(t[0].ground_size, 7);
    }
}
