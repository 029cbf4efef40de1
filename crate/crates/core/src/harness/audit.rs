//! Instance audits of the proof chains behind the two improved bounds.
//!
//! Each lemma is checked as an implication on one concrete family: its
//! numeric hypotheses are measured, and a step fails only when every
//! hypothesis certainly holds while the measured conclusion is certainly
//! false. Comparisons against irrational bounds are decided in log space
//! with 256-bit balls; an undecided comparison never counts as met or failed.
//! Definitional identities are checked on every instance regardless.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::ball::Ball;
use crate::bounds::constants::thresholds;
use crate::bounds::{phi1_exact, phi2, LogValue};
use crate::error::{Error, Result};
use crate::family::{MemberSet, SetFamily};
use crate::scalar::{Hp, Real};
use crate::sunflower::{binomial_u128, greedy_coreless, next_combination, CorelessSunflower};
use crate::surd::QuadSurd;

type B = Ball<Hp>;

/// Enumerating more subfamilies than this in the partition check is refused.
pub const MAX_SUBFAMILIES: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "HYPOTHESIS-MET-CONCLUSION-FAILED")]
    HypothesisMetConclusionFailed,
}

/// One lemma checked as hypothesis ⇒ conclusion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditStep {
    pub lemma: &'static str,
    /// Every numeric hypothesis certainly holds.
    pub hypothesis_met: bool,
    /// The measured conclusion; `None` when undefined or undecided.
    pub conclusion_holds: Option<bool>,
    /// `ln(measured / bound)` for the conclusion, when both are positive.
    pub margin: Option<f64>,
}

impl AuditStep {
    pub fn failed(&self) -> bool {
        self.hypothesis_met && self.conclusion_holds == Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub audit: &'static str,
    pub instance: String,
    pub k: u64,
    pub s: u32,
    pub epsilon: Option<f64>,
    /// Named measured cardinalities.
    pub counts: BTreeMap<&'static str, u64>,
    /// `|F_j(B)|` for `j = 1..=s`.
    pub layers: Vec<u64>,
    /// Positions in `B` of the chosen subfamily (`B₁` and its swap partner's
    /// host index for the first audit, `B′` for the second).
    pub chosen: Vec<usize>,
    /// `(v, count)` pairs: `|F({v})|` over the union of `B` in the first
    /// audit, `|H({v})|` over the ground set in the second.
    pub vertex_counts: Vec<(u32, u64)>,
    pub steps: Vec<AuditStep>,
    pub identities: Vec<IdentityCheck>,
    /// No step had its hypothesis met.
    pub vacuous: bool,
    pub verdict: Verdict,
}

impl AuditReport {
    pub fn identities_hold(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }

    fn finish(mut self) -> Self {
        self.vacuous = !self.steps.iter().any(|s| s.hypothesis_met);
        self.verdict = if self.steps.iter().any(AuditStep::failed) {
            Verdict::HypothesisMetConclusionFailed
        } else {
            Verdict::Consistent
        };
        self
    }
}

/// Stable identifier of a family: FNV-1a of its text form.
pub fn family_digest(family: &SetFamily) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in family.to_text().bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("fnv1a:{h:016x}")
}

/// A bound as a log, `None` meaning the bound is zero.
type LnBound = Option<B>;

fn ln_of(v: &LogValue<Hp>) -> LnBound {
    v.ball().cloned()
}

fn sign(diff: &B, strict: bool) -> Option<bool> {
    if diff.certainly_positive() || (!strict && diff.certainly_nonnegative()) {
        Some(true)
    } else if diff.certainly_negative() || (strict && diff.rad == 0.0 && diff.mid == Hp::zero()) {
        Some(false)
    } else {
        None
    }
}

/// `ln count − bound`; `None` if either side is zero.
fn diff(count: u64, bound: &LnBound) -> Option<B> {
    let b = bound.as_ref()?;
    (count > 0).then(|| B::ln_int(count).sub(b))
}

fn margin(count: u64, bound: &LnBound) -> Option<f64> {
    diff(count, bound).map(|d| d.to_f64())
}

/// `count ≥ bound`.
fn ge(count: u64, bound: &LnBound) -> Option<bool> {
    match (count, bound) {
        (_, None) => Some(true),
        (0, Some(_)) => Some(false),
        _ => sign(&diff(count, bound)?, false),
    }
}

/// `count > bound`.
fn gt(count: u64, bound: &LnBound) -> Option<bool> {
    match (count, bound) {
        (c, None) => Some(c > 0),
        (0, Some(_)) => Some(false),
        _ => sign(&diff(count, bound)?, true),
    }
}

/// `count < bound`.
#[cfg(test)]
fn lt(count: u64, bound: &LnBound) -> Option<bool> {
    ge(count, bound).map(|x| !x)
}

/// `count ≤ bound`.
fn le(count: u64, bound: &LnBound) -> Option<bool> {
    gt(count, bound).map(|g| !g)
}

/// Conjunction of tri-state facts; `None` if any is undecided and none false.
fn all_of(facts: impl IntoIterator<Item = Option<bool>>) -> Option<bool> {
    let mut out = Some(true);
    for f in facts {
        match f {
            Some(false) => return Some(false),
            None => out = None,
            Some(true) => {}
        }
    }
    out
}

fn step(
    lemma: &'static str,
    hyps: &[Option<bool>],
    conclusion: Option<bool>,
    margin: Option<f64>,
) -> AuditStep {
    AuditStep {
        lemma,
        hypothesis_met: hyps.iter().all(|h| *h == Some(true)),
        conclusion_holds: conclusion,
        margin,
    }
}

fn add(a: &LnBound, b: &B) -> LnBound {
    a.as_ref().map(|a| a.add(b))
}

fn require_maximal(family: &SetFamily, b: &CorelessSunflower) -> Result<()> {
    if b.is_maximal() {
        return Ok(());
    }
    let union = b.union();
    let witness = (0..family.len())
        .find(|&i| family.members()[i].is_disjoint(union) && !b.members().contains(&i))
        .unwrap_or(0);
    Err(Error::NotMaximal { witness })
}

fn count(family: &SetFamily, keep: impl Fn(MemberSet) -> bool) -> u64 {
    family.members().iter().filter(|&&u| keep(u)).count() as u64
}

/// `|F_j(S)|` for `j = 1..=s` through the family selector.
fn layers(family: &SetFamily, union: MemberSet) -> Result<Vec<u64>> {
    (1..=family.max_card() as usize)
        .map(|j| Ok(family.select_by_intersection_size(union, j)?.len() as u64))
        .collect()
}

/// `|𝒫(B)| = Σ_j j·|F_j(B)|`.
fn counting_identity(pairs: u64, layers: &[u64]) -> IdentityCheck {
    let weighted: u64 = layers.iter().zip(1u64..).map(|(c, j)| c * j).sum();
    IdentityCheck {
        identity: "pairs-equal-weighted-layers",
        holds: pairs == weighted,
    }
}

/// Audit of the chain showing that a sunflower-free family has fewer than
/// `Φ₁(s)` members. Every bound in this chain lies in `Q(√10)`, so all
/// comparisons are decided exactly.
#[derive(Clone, Debug)]
pub struct Statement1Auditor {
    k: u64,
    s: u32,
    /// `Φ₁(s)`, `Φ₁(s−1)`, `Φ₁(s−2)`.
    phi: [QuadSurd; 3],
    one_plus_delta: QuadSurd,
    one_minus_delta: QuadSurd,
    /// `((1−δ)/(1+δ)) Φ₁(s)/x`.
    share: QuadSurd,
    /// `(Φ₁(s)/x)(1/s + 1/x)`.
    overlap: QuadSurd,
}

fn surd(c: u64) -> QuadSurd {
    QuadSurd::from(BigUint::from(c))
}

/// `c ⋚ bound`, exactly.
fn exact_cmp(c: u64, bound: &QuadSurd) -> Ordering {
    surd(c).cmp(bound)
}

fn exact_margin(c: u64, bound: &QuadSurd) -> Option<f64> {
    let b: f64 = bound.to_real();
    (c > 0 && b > 0.0 && b.is_finite()).then(|| (c as f64).ln() - b.ln())
}

impl Statement1Auditor {
    pub fn new(k: u64, s: u32) -> Result<Self> {
        let si = i64::from(s);
        let phi = [
            phi1_exact(k, si)?,
            phi1_exact(k, si - 1)?,
            phi1_exact(k, si - 2)?,
        ];
        let one = QuadSurd::from_int(1);
        let d = &QuadSurd::root() - &QuadSurd::from_int(3);
        let one_plus_delta = &one + &d;
        let one_minus_delta = &one - &d;
        let x = &surd(k) / &one_plus_delta;
        let per_x = &phi[0] / &x;
        let share = &(&one_minus_delta / &one_plus_delta) * &per_x;
        let inv_sum = &QuadSurd::from_ratio(1, i64::from(s.max(1))) + &(&one / &x);
        let overlap = &per_x * &inv_sum;
        Ok(Statement1Auditor {
            k,
            s,
            phi,
            one_plus_delta,
            one_minus_delta,
            share,
            overlap,
        })
    }

    pub fn audit(&self, family: &SetFamily, instance: &str) -> Result<AuditReport> {
        let b = greedy_coreless(family)?;
        self.audit_with(family, &b, instance)
    }

    pub fn audit_with(
        &self,
        family: &SetFamily,
        b: &CorelessSunflower,
        instance: &str,
    ) -> Result<AuditReport> {
        if family.max_card() != self.s {
            return Err(Error::invalid(
                "family max cardinality differs from the auditor's s",
            ));
        }
        require_maximal(family, b)?;
        let sets = b.sets(family);
        let union = b.union();
        let m = family.len() as u64;
        let r = sets.len() as u64;
        let pairs = family.incidence_pairs(union)?.len() as u64;
        let layers = layers(family, union)?;
        let f1 = layers.first().copied().unwrap_or(0);
        let covered = family.select_intersecting(union)?.len() as u64;

        // |F₁(B_i) − F(B − B_i)| for each member of B.
        let shares: Vec<u64> = sets
            .iter()
            .map(|&bi| {
                let others = union.difference(bi);
                count(family, |u| {
                    u.intersection(bi).len() == 1 && u.is_disjoint(others)
                })
            })
            .collect();
        let degrees: Vec<(u32, u64)> = union
            .iter()
            .map(|v| (v, count(family, |u| u.contains(v))))
            .collect();

        let plus_f = &self.one_plus_delta * &surd(m);
        let minus_f = &self.one_minus_delta * &surd(m);
        let h_size = Some(exact_cmp(m, &self.phi[0]).is_ge());
        let h_cond1 = Some(r < self.k);
        let h_singletons = Some(
            degrees
                .iter()
                .all(|&(_, d)| exact_cmp(d, &self.phi[1]).is_lt()),
        );
        let pairs_small = Some(exact_cmp(pairs, &plus_f).is_lt());
        let f1_large = Some(exact_cmp(f1, &minus_f).is_gt());

        let mut steps = vec![
            step(
                "bound1",
                &[h_size, h_cond1, h_singletons],
                pairs_small,
                exact_margin(pairs, &plus_f),
            ),
            step(
                "L1",
                &[Some(covered == m), pairs_small],
                f1_large,
                exact_margin(f1, &minus_f),
            ),
        ];
        let (best, best_share) = shares
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0), |acc, (i, c)| if c > acc.1 { (i, c) } else { acc });
        steps.push(step(
            "L2",
            &[f1_large, h_cond1, h_size, Some(r >= 1)],
            (r >= 1).then(|| exact_cmp(best_share, &self.share).is_ge()),
            exact_margin(best_share, &self.share),
        ));

        let mut chosen = Vec::new();
        let mut overlap = 0;
        let swap = (r >= 1).then(|| {
            let b1 = sets[best];
            let others = union.difference(b1);
            let partner = family
                .members()
                .iter()
                .position(|&u| u != b1 && u.intersection(b1).len() == 1 && u.is_disjoint(others));
            (b1, partner)
        });
        match swap {
            Some((b1, Some(pi))) => {
                let b1p = family.members()[pi];
                chosen = vec![best, pi];
                overlap = count(family, |u| u.meets(b1) && u.meets(b1p));
                let v = b1
                    .intersection(b1p)
                    .min_element()
                    .expect("partner meets B1");
                let through_v = count(family, |u| u.contains(v));
                let mut ih = self.s >= 3 && exact_cmp(through_v, &self.phi[1]).is_lt();
                for a in b1.difference(b1p).iter() {
                    for c in b1p.difference(b1).iter() {
                        let both = count(family, |u| u.contains(a) && u.contains(c));
                        ih &= exact_cmp(both, &self.phi[2]).is_lt();
                    }
                }
                let concl = Some(exact_cmp(overlap, &self.overlap).is_lt());
                steps.push(step(
                    "L3",
                    &[Some(ih)],
                    concl,
                    exact_margin(overlap, &self.overlap),
                ));
            }
            _ => steps.push(step("L3", &[Some(false)], None, None)),
        }

        let counts = BTreeMap::from([
            ("family", m),
            ("coreless", r),
            ("union", union.len() as u64),
            ("pairs", pairs),
            ("covered", covered),
            ("f1", f1),
            ("best_share", best_share),
            ("swap_overlap", overlap),
        ]);
        let identities = vec![
            counting_identity(pairs, &layers),
            IdentityCheck {
                identity: "shares-partition-f1",
                holds: shares.iter().sum::<u64>() == f1,
            },
            IdentityCheck {
                identity: "pairs-equal-degree-sum",
                holds: degrees.iter().map(|&(_, d)| d).sum::<u64>() == pairs,
            },
        ];
        Ok(AuditReport {
            audit: "statement1",
            instance: instance.to_string(),
            k: self.k,
            s: self.s,
            epsilon: None,
            counts,
            layers,
            chosen,
            vertex_counts: degrees,
            steps,
            identities,
            vacuous: true,
            verdict: Verdict::Consistent,
        }
        .finish())
    }
}

/// Audits `family` against the first chain with a greedy maximal `B`.
pub fn audit_statement1(family: &SetFamily, k: u64) -> Result<AuditReport> {
    Statement1Auditor::new(k, family.max_card())?.audit(family, &family_digest(family))
}

/// As [`audit_statement1`] with a caller-supplied `B`.
pub fn audit_statement1_with(
    family: &SetFamily,
    k: u64,
    b: &CorelessSunflower,
) -> Result<AuditReport> {
    Statement1Auditor::new(k, family.max_card())?.audit_with(family, b, &family_digest(family))
}

/// Audit of the chain showing that a sunflower-free family has fewer than
/// `Φ₂(s)` members once `min(k, s)` reaches the threshold `c₁`.
#[derive(Clone, Debug)]
pub struct Statement2Auditor {
    k: u64,
    s: u32,
    epsilon: f64,
    /// `ln Φ₂(t)` for `t = 0..=s`.
    ln_phi: Vec<LnBound>,
    /// `p = ln min(k,s) / 8`; zero when `min(k,s) = 1`.
    p: B,
    ln_x: Option<B>,
    /// `min(k, s) ≥ c₁`.
    large: bool,
}

impl Statement2Auditor {
    pub fn new(k: u64, s: u32, epsilon: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("the second audit needs k >= 2"));
        }
        let ln_phi = (0..=i64::from(s))
            .map(|t| Ok(ln_of(&phi2::<Hp>(k, t, epsilon)?)))
            .collect::<Result<Vec<_>>>()?;
        let y = k.min(u64::from(s));
        let (p, ln_x) = if y > 1 {
            let p = B::ln_int(y).div(&B::int(8));
            let ln_x = B::ln_int(k).sub(&p.ln());
            (p, Some(ln_x))
        } else {
            (B::exact(Hp::zero()), None)
        };
        Ok(Statement2Auditor {
            k,
            s,
            epsilon,
            ln_phi,
            p,
            ln_x,
            large: BigUint::from(y) >= thresholds().c1,
        })
    }

    pub fn audit(&self, family: &SetFamily, instance: &str) -> Result<AuditReport> {
        let b = greedy_coreless(family)?;
        self.audit_with(family, &b, instance)
    }

    pub fn audit_with(
        &self,
        family: &SetFamily,
        b: &CorelessSunflower,
        instance: &str,
    ) -> Result<AuditReport> {
        if family.max_card() != self.s {
            return Err(Error::invalid(
                "family max cardinality differs from the auditor's s",
            ));
        }
        require_maximal(family, b)?;
        let sets = b.sets(family);
        let union = b.union();
        let s = self.s as usize;
        let m = family.len() as u64;
        let r = sets.len();
        let pairs = family.incidence_pairs(union)?.len() as u64;
        let layers = layers(family, union)?;
        let mut identities = vec![counting_identity(pairs, &layers)];

        let mask_of = |u: MemberSet| -> u128 {
            sets.iter()
                .enumerate()
                .filter(|(_, &bi)| u.meets(bi))
                .fold(0u128, |acc, (i, _)| acc | 1u128 << i)
        };
        let union_of = |mask: u128| -> MemberSet {
            sets.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(MemberSet::EMPTY, |acc, (_, &bi)| acc.union(bi))
        };

        // G(B′) for every j, as histograms over the members of B met.
        let mut histograms: Vec<BTreeMap<u128, u64>> = Vec::with_capacity(s);
        let mut partition_ok = true;
        let mut enumerated_ok = true;
        let mut superset_ok = true;
        let mut membership_ok = true;
        for j in 1..=s {
            let fj = family.select_by_intersection_size(union, j)?;
            let mut hist = BTreeMap::new();
            for &u in fj.members() {
                let mask = mask_of(u);
                partition_ok &= (1..=j as u32).contains(&mask.count_ones());
                *hist.entry(mask).or_insert(0u64) += 1;
            }
            partition_ok &= hist.values().sum::<u64>() == layers[j - 1];

            // Independent side: enumerate B′ and test each U directly.
            let subfamilies: u128 = (1..=j.min(r)).map(|t| binomial_u128(r, t)).sum();
            if subfamilies > MAX_SUBFAMILIES {
                return Err(Error::CombinatorialBlowup {
                    n: r,
                    k: j,
                    cap: MAX_SUBFAMILIES as u64,
                });
            }
            let mut total = 0u64;
            for t in 1..=j.min(r) {
                let mut combo: Vec<usize> = (0..t).collect();
                loop {
                    let mask = combo.iter().fold(0u128, |acc, &i| acc | 1u128 << i);
                    let g = count(&fj, |u| {
                        sets.iter()
                            .enumerate()
                            .all(|(i, &bi)| u.meets(bi) == (mask >> i & 1 == 1))
                    });
                    enumerated_ok &= g == hist.get(&mask).copied().unwrap_or(0);
                    total += g;
                    if !next_combination(&mut combo, r) {
                        break;
                    }
                }
            }
            enumerated_ok &= total == layers[j - 1];

            for &mask in hist.keys() {
                let inside = union_of(mask);
                let outside = union.difference(inside);
                let h = h_family(family, inside, outside, j)?;
                superset_ok &= fj
                    .members()
                    .iter()
                    .filter(|&&u| mask_of(u) == mask)
                    .all(|&u| h.contains(u));
                membership_ok &= h
                    .members()
                    .iter()
                    .all(|u| u.intersection(inside).len() == j && u.is_disjoint(outside));
            }
            histograms.push(hist);
        }
        identities.extend([
            IdentityCheck {
                identity: "g-partition-histogram",
                holds: partition_ok,
            },
            IdentityCheck {
                identity: "g-partition-enumerated",
                holds: enumerated_ok,
            },
            IdentityCheck {
                identity: "h-contains-g",
                holds: superset_ok,
            },
            IdentityCheck {
                identity: "h-membership",
                holds: membership_ok,
            },
        ]);

        // Candidate j range 1 ≤ j ≤ 2p.
        let two_p = (self.p.to_f64() * 2.0).floor().max(0.0) as usize;
        let top = two_p.min(s);
        let range = if top >= 1 { 1..=top } else { 1..=s };
        let j = range.clone().fold(0, |best, j| {
            if best == 0 || layers[j - 1] > layers[best - 1] {
                j
            } else {
                best
            }
        });
        let hist = &histograms[j - 1];
        let (mask, g_max) = hist.iter().fold(
            (0u128, 0u64),
            |acc, (&mk, &c)| if c > acc.1 { (mk, c) } else { acc },
        );
        let inside = union_of(mask);
        let outside = union.difference(inside);
        let h = if g_max > 0 {
            h_family(family, inside, outside, j)?
        } else {
            SetFamily::from_members(family.ground(), family.max_card(), Vec::new())?
        };
        let h_len = h.len() as u64;
        let vertex_counts: Vec<(u32, u64)> = (1..=family.ground().size())
            .map(|v| (v, count(&h, |u| u.contains(v))))
            .filter(|&(_, c)| c > 0)
            .collect();
        let b_prime = mask.count_ones() as u64;

        // Chain hypotheses.
        let gate = [
            ge(m, &self.ln_phi[s]),
            self.ln_x
                .as_ref()
                .map(|lx| r > 0 && sign(&B::ln_int(r as u64).sub(lx), false) == Some(true)),
            Some((r as u64) < self.k),
            Some(self.large),
        ];
        let p_pos = self.p.certainly_positive();
        let ln_p = p_pos.then(|| self.p.ln());
        let ln_s = B::ln_int(self.s.max(1).into());

        // A1: some j ≤ 2p has |F_j(B)| ≥ Φ₂(s)/(4p).
        let a1_bound = ln_p
            .as_ref()
            .and_then(|lp| add(&self.ln_phi[s], &lp.add(&B::ln_int(4)).neg()));
        let a1 = ln_p.as_ref().map(|_| {
            if top == 0 {
                Some(false)
            } else {
                let facts: Vec<Option<bool>> =
                    (1..=top).map(|jj| ge(layers[jj - 1], &a1_bound)).collect();
                if facts.contains(&Some(true)) {
                    Some(true)
                } else if facts.iter().all(|f| *f == Some(false)) {
                    Some(false)
                } else {
                    None
                }
            }
        });
        let a1 = a1.flatten();
        let mut steps = vec![step("A1", &gate, a1, margin(layers[j - 1], &a1_bound))];

        // A2: some nonempty B′, |B′| ≤ j, has |G(B′)| ≥ Φ₂(s)/(8p·C(r,j)).
        let choose = binomial_u128(r, j);
        let a2_bound = match (&ln_p, choose) {
            (Some(lp), c) if c > 0 => add(
                &self.ln_phi[s],
                &lp.add(&B::ln_int(8))
                    .add(&B::ln_big(&BigUint::from(c)))
                    .neg(),
            ),
            _ => None,
        };
        let a2 = a2_bound.as_ref().and_then(|_| ge(g_max, &a2_bound));
        let mut hyp: Vec<Option<bool>> = gate.to_vec();
        hyp.push(a1);
        steps.push(step("A2", &hyp, a2, margin(g_max, &a2_bound)));

        // A2′: |H| > s^j Φ₂(s−j) e^{−4p}.
        let a2p_bound = add(
            &self.ln_phi[s - j],
            &ln_s.scale(j as u64).sub(&self.p.scale(4)),
        );
        let a2p = p_pos.then(|| gt(h_len, &a2p_bound)).flatten();
        hyp.push(a2);
        steps.push(step("A2'", &hyp, a2p, margin(h_len, &a2p_bound)));

        // A3: vertex degrees inside and outside B′.
        let a3 = if p_pos && h_len > 0 {
            let base = B::ln_int(h_len).add(&self.p.scale(7));
            let in_bound = Some(base.sub(&ln_s));
            let out_bound = (j < s)
                .then(|| {
                    self.ln_x
                        .as_ref()
                        .map(|lx| base.sub(&B::ln_int((s - j) as u64)).sub(lx))
                })
                .flatten();
            let facts = (1..=family.ground().size()).map(|v| {
                let c = count(&h, |u| u.contains(v));
                if inside.contains(v) {
                    le(c, &in_bound)
                } else if out_bound.is_some() {
                    le(c, &out_bound)
                } else {
                    None
                }
            });
            all_of(facts)
        } else {
            None
        };
        hyp.push(a2p);
        steps.push(step("A3", &hyp, a3, None));

        // A4: |B′|·|H(V)| ≤ |H|/2 for every V ∈ H.
        let a4 = (h_len > 0).then(|| {
            h.members()
                .iter()
                .all(|&v| 2 * b_prime * count(&h, |u| u.meets(v)) <= h_len)
        });
        hyp.push(a3);
        steps.push(step("A4", &hyp, a4, None));

        let counts = BTreeMap::from([
            ("family", m),
            ("coreless", r as u64),
            ("union", union.len() as u64),
            ("pairs", pairs),
            ("f1", layers.first().copied().unwrap_or(0)),
            ("j", j as u64),
            ("g_max", g_max),
            ("b_prime", b_prime),
            ("h", h_len),
        ]);
        Ok(AuditReport {
            audit: "statement2",
            instance: instance.to_string(),
            k: self.k,
            s: self.s,
            epsilon: Some(self.epsilon),
            counts,
            layers,
            chosen: (0..r).filter(|i| mask >> i & 1 == 1).collect(),
            vertex_counts,
            steps,
            identities,
            vacuous: true,
            verdict: Verdict::Consistent,
        }
        .finish())
    }
}

/// `H = F_j(inside) − F(outside)`, built from the family selectors.
fn h_family(
    family: &SetFamily,
    inside: MemberSet,
    outside: MemberSet,
    j: usize,
) -> Result<SetFamily> {
    let layer = family.select_by_intersection_size(inside, j)?;
    let hit = family.select_intersecting(outside)?;
    let kept = layer
        .members()
        .iter()
        .copied()
        .filter(|&u| !hit.contains(u))
        .collect();
    SetFamily::from_members(family.ground(), family.max_card(), kept)
}

pub fn audit_statement2(family: &SetFamily, k: u64, epsilon: f64) -> Result<AuditReport> {
    Statement2Auditor::new(k, family.max_card(), epsilon)?.audit(family, &family_digest(family))
}

pub fn audit_statement2_with(
    family: &SetFamily,
    k: u64,
    epsilon: f64,
    b: &CorelessSunflower,
) -> Result<AuditReport> {
    Statement2Auditor::new(k, family.max_card(), epsilon)?.audit_with(
        family,
        b,
        &family_digest(family),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, s: u32, sets: &[&[u32]]) -> SetFamily {
        SetFamily::build(n, s, sets.iter().copied()).unwrap()
    }

    #[test]
    fn comparisons_are_tri_state() {
        let three = Some(B::ln_int(3));
        // Equal values cannot be separated by balls.
        assert_eq!(ge(3, &three), None);
        assert_eq!(gt(4, &three), Some(true));
        assert_eq!(le(4, &three), Some(false));
        assert_eq!(lt(2, &three), Some(true));
        assert_eq!(ge(2, &three), Some(false));
        assert_eq!(lt(0, &three), Some(true));
        assert_eq!(ge(0, &None), Some(true));
        assert_eq!(lt(0, &None), Some(false));
        assert_eq!(all_of([Some(true), None]), None);
        assert_eq!(all_of([None, Some(false)]), Some(false));
    }

    #[test]
    fn small_family_is_vacuous_for_first_chain_but_l1_met() {
        // A star through 1: all but one set meet B = {123} only in 1.
        let mut sets = vec![vec![1, 2, 3]];
        for a in 4..=9u32 {
            for b in a + 1..=9 {
                sets.push(vec![1, a, b]);
            }
        }
        let f = SetFamily::build(9, 3, sets).unwrap();
        let rep = audit_statement1(&f, 3).unwrap();
        assert_eq!(rep.counts["coreless"], 1);
        assert_eq!(rep.verdict, Verdict::Consistent);
        assert!(rep.identities_hold());
        let l1 = rep.steps.iter().find(|s| s.lemma == "L1").unwrap();
        assert!(l1.hypothesis_met);
        assert_eq!(l1.conclusion_holds, Some(true));
        assert!(!rep.steps[0].hypothesis_met);
    }

    #[test]
    fn large_coreless_sunflower_leaves_chain_unmet() {
        let f = fam(9, 3, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let rep = audit_statement1(&f, 3).unwrap();
        assert!(!rep
            .steps
            .iter()
            .any(|s| s.lemma == "bound1" && s.hypothesis_met));
        assert_eq!(rep.verdict, Verdict::Consistent);
    }

    #[test]
    fn not_maximal_is_rejected() {
        let f = fam(6, 3, &[&[1, 2], &[3, 4], &[5, 6]]);
        let b = CorelessSunflower::new(&f, &[0]).unwrap();
        assert!(matches!(
            audit_statement1_with(&f, 3, &b),
            Err(Error::NotMaximal { .. })
        ));
        assert!(matches!(
            audit_statement2_with(&f, 3, 0.05, &b),
            Err(Error::NotMaximal { .. })
        ));
    }

    #[test]
    fn second_chain_is_gated_by_threshold() {
        let f = fam(
            8,
            3,
            &[&[1, 2, 3], &[1, 4, 5], &[2, 4, 6], &[3, 7, 8], &[5, 6, 7]],
        );
        let rep = audit_statement2(&f, 3, 0.05).unwrap();
        assert!(rep.vacuous);
        assert!(rep.identities_hold());
        assert_eq!(rep.verdict, Verdict::Consistent);
        assert!(rep.counts["h"] >= rep.counts["g_max"]);
    }

    #[test]
    fn report_serializes_verdict_names() {
        let f = fam(4, 2, &[&[1, 2], &[2, 3]]);
        let rep = audit_statement2(&f, 2, 0.05).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert!(text.contains("\"verdict\":\"consistent\""));
    }
}
