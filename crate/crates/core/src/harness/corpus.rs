//! Seeded batches of audit instances.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::audit::{AuditReport, Statement1Auditor, Statement2Auditor, Verdict};
use super::generate::{generate_family, DistributionKind, FamilyDistribution};
use super::rng::{derive_seed, Rng};
use crate::error::{Error, Result};
use crate::family::SetFamily;

pub const CORPUS_K: std::ops::RangeInclusive<u64> = 2..=6;
pub const CORPUS_S: std::ops::RangeInclusive<u32> = 2..=4;
pub const CORPUS_MAX_GROUND: u32 = 14;
pub const CORPUS_MAX_SIZE: u64 = 60;

/// One corpus instance: the distribution it was drawn from and its `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusInstance {
    pub index: u64,
    pub k: u64,
    pub dist: FamilyDistribution,
}

/// Instance `i` is drawn with `Rng::new(derive_seed(seed, i))`: kind, `s`,
/// `k`, ground size and family size in that order, then the family itself
/// from the next 64-bit output.
pub fn corpus_instance(seed: u64, index: u64) -> CorpusInstance {
    let mut rng = Rng::new(derive_seed(seed, index));
    let kinds = DistributionKind::ALL;
    let kind = kinds[rng.below(kinds.len() as u64) as usize];
    let s = *CORPUS_S.start() + rng.below(u64::from(CORPUS_S.end() - CORPUS_S.start() + 1)) as u32;
    let k = CORPUS_K.start() + rng.below(CORPUS_K.end() - CORPUS_K.start() + 1);
    let min_ground = (s + 1..=CORPUS_MAX_GROUND)
        .find(|&n| kind.capacity(n, s) > 0)
        .unwrap_or(CORPUS_MAX_GROUND);
    let ground = min_ground + rng.below(u64::from(CORPUS_MAX_GROUND - min_ground + 1)) as u32;
    let cap = u64::try_from(kind.capacity(ground, s))
        .unwrap_or(u64::MAX)
        .min(CORPUS_MAX_SIZE);
    let size = 1 + rng.below(cap) as usize;
    let fseed = rng.next_u64();
    CorpusInstance {
        index,
        k,
        dist: FamilyDistribution {
            kind,
            ground_size: ground,
            set_size: s,
            family_size: size,
            seed: fseed,
        },
    }
}

/// Per-lemma tallies over a corpus.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StepTally {
    pub hypothesis_met: u64,
    pub conclusion_held: u64,
    pub failed: u64,
}

/// A failed instance, serialized for reproduction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusFailure {
    pub instance: CorpusInstance,
    pub family: String,
    pub report: AuditReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub seed: u64,
    pub epsilon: f64,
    pub instances: u64,
    pub audits: u64,
    pub vacuous: u64,
    pub verdict_failures: u64,
    pub identity_failures: u64,
    pub identities_checked: u64,
    pub steps: BTreeMap<String, StepTally>,
    pub failures: Vec<CorpusFailure>,
}

impl CorpusSummary {
    pub fn all_consistent(&self) -> bool {
        self.verdict_failures == 0 && self.identity_failures == 0
    }
}

struct Auditors {
    first: BTreeMap<(u64, u32), Statement1Auditor>,
    second: BTreeMap<(u64, u32), Statement2Auditor>,
}

impl Auditors {
    fn new(epsilon: f64) -> Result<Self> {
        let mut first = BTreeMap::new();
        let mut second = BTreeMap::new();
        for k in CORPUS_K {
            for s in CORPUS_S {
                first.insert((k, s), Statement1Auditor::new(k, s)?);
                second.insert((k, s), Statement2Auditor::new(k, s, epsilon)?);
            }
        }
        Ok(Auditors { first, second })
    }
}

/// Runs both audits on `count` seeded instances; results merge in index order.
pub fn audit_corpus(count: u64, seed: u64, epsilon: f64) -> Result<CorpusSummary> {
    let auditors = Auditors::new(epsilon)?;
    let per_instance = (0..count)
        .into_par_iter()
        .map(|i| {
            let inst = corpus_instance(seed, i);
            let family = generate_family(&inst.dist)?;
            let key = (inst.k, inst.dist.set_size);
            let id = format!("seed:{seed}/instance:{i}");
            let a = auditors.first[&key].audit(&family, &id)?;
            let b = auditors.second[&key].audit(&family, &id)?;
            Ok((inst, family, [a, b]))
        })
        .collect::<Result<Vec<(CorpusInstance, SetFamily, [AuditReport; 2])>>>()?;

    let mut summary = CorpusSummary {
        seed,
        epsilon,
        instances: count,
        audits: 0,
        vacuous: 0,
        verdict_failures: 0,
        identity_failures: 0,
        identities_checked: 0,
        steps: BTreeMap::new(),
        failures: Vec::new(),
    };
    for (inst, family, reports) in per_instance {
        for rep in reports {
            summary.audits += 1;
            summary.vacuous += u64::from(rep.vacuous);
            summary.identities_checked += rep.identities.len() as u64;
            let bad_ids = rep.identities.iter().filter(|c| !c.holds).count() as u64;
            summary.identity_failures += bad_ids;
            for st in &rep.steps {
                let t = summary
                    .steps
                    .entry(format!("{}:{}", rep.audit, st.lemma))
                    .or_default();
                t.hypothesis_met += u64::from(st.hypothesis_met);
                t.conclusion_held +=
                    u64::from(st.hypothesis_met && st.conclusion_holds == Some(true));
                t.failed += u64::from(st.failed());
            }
            let failed = rep.verdict == Verdict::HypothesisMetConclusionFailed;
            summary.verdict_failures += u64::from(failed);
            if failed || bad_ids > 0 {
                summary.failures.push(CorpusFailure {
                    instance: inst.clone(),
                    family: family.to_text(),
                    report: rep,
                });
            }
        }
    }
    Ok(summary)
}

/// Rejects corpus parameters outside the audit's preconditions.
pub fn check_corpus_params(count: u64, epsilon: f64) -> Result<()> {
    crate::bounds::check_epsilon(epsilon)?;
    if count > 1_000_000 {
        return Err(Error::invalid("at most 10^6 corpus instances"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        assert_eq!(corpus_instance(3, 17), corpus_instance(3, 17));
        for i in 0..200 {
            let inst = corpus_instance(1, i);
            let f = generate_family(&inst.dist).unwrap();
            assert_eq!(f.len(), inst.dist.family_size);
        }
    }

    #[test]
    fn small_corpus_is_consistent() {
        let sum = audit_corpus(300, 5, 0.05).unwrap();
        assert!(sum.all_consistent(), "{:?}", sum.failures.first());
        assert_eq!(sum.audits, 600);
        assert!(sum.steps["statement1:L1"].hypothesis_met > 0);
    }
}
