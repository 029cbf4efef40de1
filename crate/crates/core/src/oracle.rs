//! Exhaustive ground truth at tiny parameters: brute-force sunflower
//! detection and branch-and-bound search for the largest sunflower-free
//! family.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::constants::thresholds;
use crate::bounds::{phi0, phi1, phi2};
use crate::error::{Error, Result};
use crate::family::{GroundSet, MemberSet, SetFamily};
use crate::scalar::{Hp, Real};
use crate::sunflower::{binomial_u128, check_sunflower, Sunflower};

/// Hard cap on `C(|F|, k)` for [`brute_force_find_sunflower`].
pub const BRUTE_FORCE_CAP: u64 = 100_000_000;

/// Largest ground set accepted by [`max_sunflower_free`].
pub const MAX_ORACLE_GROUND: u32 = 16;

/// Finds a `k`-sunflower by exhaustive search, or proves there is none.
///
/// Petals are chosen in index order. Once two are fixed the core is their
/// intersection, and every later petal must meet each chosen one in exactly
/// that core.
pub fn brute_force_find_sunflower(family: &SetFamily, k: usize) -> Result<Option<Sunflower>> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let n = family.len();
    let combos = binomial_u128(n, k);
    if combos > u128::from(BRUTE_FORCE_CAP) {
        return Err(Error::CombinatorialBlowup {
            n,
            k,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if k > n {
        return Ok(None);
    }
    let sets = family.members();
    if k == 1 {
        return Ok(Some(Sunflower {
            core: sets[0],
            petals: vec![0],
        }));
    }
    let mut chosen = Vec::with_capacity(k);
    for a in 0..n {
        for b in a + 1..n {
            let core = sets[a].intersection(sets[b]);
            chosen.clear();
            chosen.extend([a, b]);
            let petals = sets[a].union(sets[b]).difference(core);
            if extend_petals(sets, k, core, petals, &mut chosen) {
                let sf = Sunflower {
                    core,
                    petals: chosen.clone(),
                };
                debug_assert_eq!(check_sunflower(family, &sf.petals), Ok(Some(core)));
                return Ok(Some(sf));
            }
        }
    }
    Ok(None)
}

/// Extends `chosen` (sharing `core`, outer parts covering `used`) with later
/// members until it has `k` petals.
fn extend_petals(
    sets: &[MemberSet],
    k: usize,
    core: MemberSet,
    used: MemberSet,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    let start = chosen.last().map_or(0, |&i| i + 1);
    let need = k - chosen.len();
    for c in start..sets.len() {
        if sets.len() - c < need {
            break;
        }
        let u = sets[c];
        if core.is_subset(u) && u.difference(core).is_disjoint(used) {
            chosen.push(c);
            if extend_petals(sets, k, core, used.union(u.difference(core)), chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Limits for [`max_sunflower_free`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 100_000_000,
            max_seconds: 600.0,
        }
    }
}

impl OracleBudget {
    pub fn new(max_nodes: u64, max_seconds: f64) -> Result<Self> {
        if max_nodes == 0 || max_seconds.is_nan() || max_seconds <= 0.0 {
            return Err(Error::invalid("oracle budget must be positive"));
        }
        Ok(OracleBudget {
            max_nodes,
            max_seconds,
        })
    }
}

/// Search switches, mainly for testing the pruning itself.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SearchOptions {
    /// Disable the canonical-labelling restriction.
    pub no_symmetry: bool,
    /// Run the search under the element relabelling `v ↦ relabel[v-1]`.
    pub relabel: Option<Vec<u32>>,
}

/// Outcome of [`max_sunflower_free`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalResult {
    pub k: usize,
    pub s: u32,
    pub ground_size: u32,
    pub allow_empty_set: bool,
    pub max_size: usize,
    pub witness: SetFamily,
    /// True iff the search space was exhausted within budget.
    pub exhaustive: bool,
    pub nodes: u64,
}

/// Largest family of subsets of `[ground_size]` of cardinality at most `s`
/// containing no `k`-sunflower.
///
/// Candidates are scanned in canonical order and each is included or
/// excluded. A candidate may only be included if it adds no `k`-sunflower,
/// and (unless disabled) only if the elements it introduces are exactly the
/// next unused labels `m+1, …, m+t`. Every family has a relabelling whose
/// canonically sorted members introduce labels this way (the
/// lexicographically least relabelling does), so the restriction loses no
/// isomorphism class. Branches that cannot beat the incumbent even by taking
/// every remaining candidate are cut.
pub fn max_sunflower_free(
    k: usize,
    s: u32,
    ground_size: u32,
    allow_empty: bool,
    budget: OracleBudget,
) -> Result<ExtremalResult> {
    max_sunflower_free_with(
        k,
        s,
        ground_size,
        allow_empty,
        budget,
        &SearchOptions::default(),
    )
}

pub fn max_sunflower_free_with(
    k: usize,
    s: u32,
    ground_size: u32,
    allow_empty: bool,
    budget: OracleBudget,
    options: &SearchOptions,
) -> Result<ExtremalResult> {
    if k < 2 {
        return Err(Error::invalid("k must be at least 2"));
    }
    if s == 0 {
        return Err(Error::invalid("s must be at least 1"));
    }
    if ground_size == 0 || ground_size > MAX_ORACLE_GROUND {
        return Err(Error::invalid(format!(
            "ground size must lie in 1..={MAX_ORACLE_GROUND}"
        )));
    }
    OracleBudget::new(budget.max_nodes, budget.max_seconds)?;
    let ground = GroundSet::new(ground_size)?;
    let relabel = match &options.relabel {
        Some(p) => Some(check_permutation(p, ground_size)?),
        None => None,
    };
    let perm: Vec<u32> = relabel.unwrap_or_else(|| (1..=ground_size).collect());
    let map = |m: MemberSet| {
        MemberSet::from_bits(m.iter().fold(0u128, |acc, v| {
            acc | MemberSet::singleton(perm[v as usize - 1]).bits()
        }))
    };
    // prefix[l] is the image of {1..l}: the first l labels in search order.
    let mut prefix = vec![0u128];
    for &v in &perm {
        let last = *prefix.last().expect("nonempty");
        prefix.push(last | MemberSet::singleton(v).bits());
    }

    let mut base: Vec<MemberSet> = (0u128..1 << ground_size)
        .map(MemberSet::from_bits)
        .filter(|m| m.len() <= s as usize && (allow_empty || !m.is_empty()))
        .collect();
    base.sort_unstable();
    let candidates: Vec<MemberSet> = base.into_iter().map(map).collect();

    let mut search = Search {
        k,
        candidates: &candidates,
        prefix: &prefix,
        symmetry: !options.no_symmetry,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        budget,
        start: Instant::now(),
        out_of_budget: false,
    };
    search.dfs(0, 0);
    let exhaustive = !search.out_of_budget;
    let nodes = search.nodes;
    let witness = SetFamily::from_members(ground, s, search.best)?;
    if k <= witness.len() && brute_force_find_sunflower(&witness, k)?.is_some() {
        return Err(Error::invalid(
            "internal error: witness contains a sunflower",
        ));
    }
    Ok(ExtremalResult {
        k,
        s,
        ground_size,
        allow_empty_set: allow_empty,
        max_size: witness.len(),
        witness,
        exhaustive,
        nodes,
    })
}

fn check_permutation(p: &[u32], n: u32) -> Result<Vec<u32>> {
    let mut seen = vec![false; n as usize];
    if p.len() != n as usize {
        return Err(Error::invalid(
            "relabelling must list every ground element once",
        ));
    }
    for &v in p {
        if v == 0 || v > n || seen[v as usize - 1] {
            return Err(Error::invalid("relabelling is not a permutation"));
        }
        seen[v as usize - 1] = true;
    }
    Ok(p.to_vec())
}

struct Search<'a> {
    k: usize,
    candidates: &'a [MemberSet],
    prefix: &'a [u128],
    symmetry: bool,
    chosen: Vec<MemberSet>,
    best: Vec<MemberSet>,
    nodes: u64,
    budget: OracleBudget,
    start: Instant,
    out_of_budget: bool,
}

impl Search<'_> {
    /// `labels` is the number of ground elements used so far; with symmetry
    /// on they are exactly the first `labels` in search order.
    fn dfs(&mut self, next: usize, labels: u32) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if next == self.candidates.len() || self.out_of_budget {
            return;
        }
        if self.chosen.len() + (self.candidates.len() - next) <= self.best.len() {
            return;
        }
        self.nodes += 1;
        if self.nodes >= self.budget.max_nodes
            || (self.nodes.is_multiple_of(4096)
                && self.start.elapsed() > Duration::from_secs_f64(self.budget.max_seconds))
        {
            self.out_of_budget = true;
            return;
        }
        let c = self.candidates[next];
        let used = MemberSet::from_bits(self.prefix[labels as usize]);
        let fresh = c.difference(used);
        let new_labels = labels + fresh.len() as u32;
        let canonical =
            !self.symmetry || fresh.bits() == self.prefix[new_labels as usize] & !used.bits();
        if canonical && !closes_sunflower(&self.chosen, c, self.k) {
            self.chosen.push(c);
            let labels = if self.symmetry { new_labels } else { labels };
            self.dfs(next + 1, labels);
            self.chosen.pop();
        }
        self.dfs(next + 1, labels);
    }
}

/// True when `family ∪ {c}` has a `k`-sunflower through `c`.
///
/// Such a sunflower has a core `Y ⊆ c`, and its other petals are members
/// `P` with `P ∩ c = Y` whose parts outside `Y` are pairwise disjoint.
fn closes_sunflower(family: &[MemberSet], c: MemberSet, k: usize) -> bool {
    let mut groups: Vec<(MemberSet, Vec<MemberSet>)> = Vec::new();
    for &p in family {
        let y = p.intersection(c);
        let outer = p.difference(y);
        match groups.iter_mut().find(|(g, _)| *g == y) {
            Some((_, v)) => v.push(outer),
            None => groups.push((y, vec![outer])),
        }
    }
    groups
        .iter()
        .any(|(_, outers)| outers.len() >= k - 1 && has_packing(outers, k - 1, MemberSet::EMPTY))
}

/// True when `need` pairwise-disjoint sets avoiding `used` can be picked.
fn has_packing(sets: &[MemberSet], need: usize, used: MemberSet) -> bool {
    if need == 0 {
        return true;
    }
    for (i, &u) in sets.iter().enumerate() {
        if sets.len() - i < need {
            break;
        }
        if u.is_disjoint(used) && has_packing(&sets[i + 1..], need - 1, used.union(u)) {
            return true;
        }
    }
    false
}

/// Oracle result joined with the bound values at the same `(k, s)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessReport {
    pub k: usize,
    pub s: u32,
    pub ground_size: u32,
    pub allow_empty_set: bool,
    pub max_size: usize,
    pub exhaustive: bool,
    pub nodes: u64,
    /// Exact `(k−1)^s s!`, in decimal.
    pub phi0: String,
    pub ln_phi1: f64,
    /// `ln Φ₂` at the caller's ε; absent for `k < 2`.
    pub ln_phi2: Option<f64>,
    /// `ln Φ₂` at ε* from the derived constants.
    pub ln_phi2_at_epsilon_star: Option<f64>,
    pub epsilon: f64,
    pub epsilon_star: f64,
    pub within_phi0: bool,
    /// `ln(max_size / bound)` for each bound (absent when `max_size = 0`).
    pub ln_ratio_phi0: Option<f64>,
    pub ln_ratio_phi1: Option<f64>,
    pub ln_ratio_phi2: Option<f64>,
    /// The extremal family in the family text format.
    pub witness: String,
}

/// Runs [`max_sunflower_free`] and reports the bounds next to the result.
pub fn verify_tightness(
    k: usize,
    s: u32,
    ground_size: u32,
    allow_empty: bool,
    epsilon: f64,
    budget: OracleBudget,
) -> Result<TightnessReport> {
    let res = max_sunflower_free(k, s, ground_size, allow_empty, budget)?;
    let ku = k as u64;
    let su = u64::from(s);
    let p0 = phi0(ku, su)?;
    let ln_phi1 = phi1::<Hp>(ku, i64::from(s))?.ln_f64();
    let eps_star = thresholds().epsilon_star.to_f64();
    let ln_phi2 = phi2::<Hp>(ku, i64::from(s), epsilon)
        .ok()
        .map(|v| v.ln_f64());
    let ln_phi2_star = phi2::<Hp>(ku, i64::from(s), eps_star)
        .ok()
        .map(|v| v.ln_f64());
    let ln_size = (res.max_size > 0).then(|| (res.max_size as f64).ln());
    let ratio = |b: Option<f64>| Some(ln_size? - b?);
    let ln_phi0 = (p0.bits() > 0).then(|| Hp::ln_biguint(&p0).to_f64());
    Ok(TightnessReport {
        k,
        s,
        ground_size,
        allow_empty_set: allow_empty,
        max_size: res.max_size,
        exhaustive: res.exhaustive,
        nodes: res.nodes,
        within_phi0: BigUint::from(res.max_size) <= p0,
        phi0: p0.to_string(),
        ln_phi1,
        ln_phi2,
        ln_phi2_at_epsilon_star: ln_phi2_star,
        epsilon,
        epsilon_star: eps_star,
        ln_ratio_phi0: ratio(ln_phi0),
        ln_ratio_phi1: ratio(Some(ln_phi1)),
        ln_ratio_phi2: ratio(ln_phi2),
        witness: res.witness.to_text(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, s: u32, sets: &[&[u32]]) -> SetFamily {
        SetFamily::build(n, s, sets.iter().copied()).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let mut edges = Vec::new();
        for a in 1..=5u32 {
            for b in a + 1..=5 {
                edges.push(vec![a, b]);
            }
        }
        let k5 = SetFamily::build(5, 2, edges).unwrap();
        let sf = brute_force_find_sunflower(&k5, 3).unwrap().unwrap();
        assert!(sf.verify(&k5));
        let tri = fam(
            6,
            2,
            &[&[1, 2], &[2, 3], &[1, 3], &[4, 5], &[5, 6], &[4, 6]],
        );
        assert_eq!(brute_force_find_sunflower(&tri, 3).unwrap(), None);
        let one = brute_force_find_sunflower(&tri, 1).unwrap().unwrap();
        assert_eq!(one.petals, vec![0]);
        assert!(brute_force_find_sunflower(&tri, 0).is_err());
    }

    #[test]
    fn blowup_is_reported() {
        let sets: Vec<Vec<u32>> = (0u32..120).map(|i| vec![i % 60 + 1, i / 60 + 61]).collect();
        let f = SetFamily::build(62, 2, sets).unwrap();
        assert!(matches!(
            brute_force_find_sunflower(&f, 10),
            Err(Error::CombinatorialBlowup { .. })
        ));
    }

    #[test]
    fn closes_sunflower_handles_core_petal() {
        // {1} ⊂ {1,2}, {1,3}: the three form a sunflower with core {1}.
        let fam = [MemberSet::from_bits(0b011), MemberSet::from_bits(0b101)];
        assert!(closes_sunflower(&fam, MemberSet::from_bits(0b001), 3));
        assert!(!closes_sunflower(&fam, MemberSet::from_bits(0b110), 3));
    }

    #[test]
    fn small_extremal_values() {
        let b = OracleBudget::default();
        let r = max_sunflower_free(3, 1, 4, true, b).unwrap();
        assert_eq!((r.max_size, r.exhaustive), (2, true));
        let r = max_sunflower_free(2, 2, 4, true, b).unwrap();
        assert_eq!((r.max_size, r.exhaustive), (1, true));
        // Without ∅, three singletons already form a sunflower.
        let r = max_sunflower_free(3, 1, 4, false, b).unwrap();
        assert_eq!(r.max_size, 2);
    }

    #[test]
    fn symmetry_pruning_is_sound() {
        let b = OracleBudget::default();
        let off = SearchOptions {
            no_symmetry: true,
            relabel: None,
        };
        for (k, s, n) in [(3, 2, 4), (3, 2, 5), (4, 1, 5), (3, 3, 4)] {
            let on = max_sunflower_free(k, s, n, true, b).unwrap();
            let full = max_sunflower_free_with(k, s, n, true, b, &off).unwrap();
            assert!(on.exhaustive && full.exhaustive);
            assert_eq!(on.max_size, full.max_size, "k={k} s={s} n={n}");
            assert!(on.nodes <= full.nodes);
        }
    }

    #[test]
    fn relabelled_search_agrees() {
        let b = OracleBudget::default();
        let plain = max_sunflower_free(3, 2, 5, true, b).unwrap();
        let opts = SearchOptions {
            no_symmetry: false,
            relabel: Some(vec![4, 2, 5, 1, 3]),
        };
        let perm = max_sunflower_free_with(3, 2, 5, true, b, &opts).unwrap();
        assert_eq!(plain.max_size, perm.max_size);
        assert!(brute_force_find_sunflower(&perm.witness, 3)
            .unwrap()
            .is_none());
        let bad = SearchOptions {
            no_symmetry: false,
            relabel: Some(vec![1, 1, 2, 3, 4]),
        };
        assert!(max_sunflower_free_with(3, 2, 5, true, b, &bad).is_err());
    }

    #[test]
    fn budget_stops_search() {
        let b = OracleBudget::new(10, 60.0).unwrap();
        let r = max_sunflower_free(3, 2, 6, true, b).unwrap();
        assert!(!r.exhaustive);
        assert!(OracleBudget::new(0, 1.0).is_err());
    }
}
