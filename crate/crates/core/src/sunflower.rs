//! Sunflower verification and extraction.
//!
//! Three extraction strategies live here: the classic popular-element
//! recursion ([`extract_er`]), and the two augmentation moves that grow a
//! maximal coreless sunflower ([`swap_augment`], [`subset_augment`]) combined
//! by [`extract_augmenting`]. All scans run in canonical member order, so
//! every result is deterministic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{MemberSet, SetFamily};

/// Default cap on candidate sub-families examined by [`subset_augment`].
pub const DEFAULT_SUBSET_BUDGET: u64 = 1_000_000;

/// A sunflower: petals (indices into a host family) whose pairwise
/// intersections all equal `core`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sunflower {
    pub core: MemberSet,
    pub petals: Vec<usize>,
}

impl Sunflower {
    pub fn len(&self) -> usize {
        self.petals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.petals.is_empty()
    }

    /// Re-checks the sunflower against its host family.
    pub fn verify(&self, family: &SetFamily) -> bool {
        matches!(check_sunflower(family, &self.petals), Ok(Some(core)) if core == self.core)
    }
}

/// Pairwise-disjoint members of a host family (a sunflower with empty core).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorelessSunflower {
    members: Vec<usize>,
    union: MemberSet,
    maximal: bool,
}

impl CorelessSunflower {
    /// Validates pairwise disjointness and computes the maximality flag.
    pub fn new(family: &SetFamily, members: &[usize]) -> Result<Self> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let mut union = MemberSet::EMPTY;
        for (pos, &i) in sorted.iter().enumerate() {
            if pos > 0 && sorted[pos - 1] == i {
                return Err(Error::invalid(format!("member index {i} repeated")));
            }
            let u = family.get(i)?;
            if !u.is_disjoint(union) {
                let other = sorted[..pos]
                    .iter()
                    .copied()
                    .find(|&o| family.members()[o].meets(u))
                    .unwrap_or(i);
                return Err(Error::NotDisjoint(other, i));
            }
            union = union.union(u);
        }
        let maximal = first_disjoint_outside(family, &sorted, union).is_none();
        Ok(CorelessSunflower {
            members: sorted,
            union,
            maximal,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Union of all members (the set `B`).
    pub fn union(&self) -> MemberSet {
        self.union
    }

    /// True when no other member of the host family is disjoint from the union.
    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn sets(&self, family: &SetFamily) -> Vec<MemberSet> {
        self.members.iter().map(|&i| family.members()[i]).collect()
    }

    fn require_maximal(&self, family: &SetFamily) -> Result<()> {
        match first_disjoint_outside(family, &self.members, self.union) {
            None => Ok(()),
            Some(witness) => Err(Error::NotMaximal { witness }),
        }
    }
}

/// First member (canonical order) outside `chosen` that avoids `union`.
fn first_disjoint_outside(family: &SetFamily, chosen: &[usize], union: MemberSet) -> Option<usize> {
    family
        .members()
        .iter()
        .enumerate()
        .find(|&(i, u)| u.is_disjoint(union) && chosen.binary_search(&i).is_err())
        .map(|(i, _)| i)
}

fn check_indices(family: &SetFamily, members: &[usize]) -> Result<Vec<MemberSet>> {
    if members.is_empty() {
        return Err(Error::invalid("member list must be nonempty"));
    }
    let mut seen = members.to_vec();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!("member index {} repeated", w[0])));
    }
    members.iter().map(|&i| family.get(i)).collect()
}

/// Intersection of the selected members.
pub fn common_core(family: &SetFamily, members: &[usize]) -> Result<MemberSet> {
    let sets = check_indices(family, members)?;
    Ok(sets
        .iter()
        .skip(1)
        .fold(sets[0], |acc, &u| acc.intersection(u)))
}

/// Returns `Some(core)` when the selected members form a sunflower.
///
/// An element outside the common core may belong to at most one petal; that
/// is equivalent to every pairwise intersection being the core. A single
/// member is a sunflower whose core is the member itself.
pub fn check_sunflower(family: &SetFamily, members: &[usize]) -> Result<Option<MemberSet>> {
    let core = common_core(family, members)?;
    let mut seen = MemberSet::EMPTY;
    for &i in members {
        let petal = family.members()[i].difference(core);
        if petal.meets(seen) {
            return Ok(None);
        }
        seen = seen.union(petal);
    }
    Ok(Some(core))
}

/// Greedy scan keeping each set disjoint from those already kept.
/// Returns positions into `sets` and the union of the kept sets.
fn greedy_positions<'a>(
    sets: impl IntoIterator<Item = (usize, &'a MemberSet)>,
) -> (Vec<usize>, MemberSet) {
    let mut kept = Vec::new();
    let mut union = MemberSet::EMPTY;
    for (i, &u) in sets {
        if u.is_disjoint(union) {
            kept.push(i);
            union = union.union(u);
        }
    }
    (kept, union)
}

/// Maximal coreless sunflower found by a canonical-order greedy scan.
pub fn greedy_coreless(family: &SetFamily) -> Result<CorelessSunflower> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let (members, union) = greedy_positions(family.members().iter().enumerate());
    Ok(CorelessSunflower {
        members,
        union,
        maximal: true,
    })
}

/// One level of the popular-element recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// Core accumulated before this level.
    pub core: MemberSet,
    /// Size of the link family at this level.
    pub family_size: usize,
    /// Size of the greedy coreless sunflower in the link family.
    pub coreless_size: usize,
    /// Element recursed on, or `None` at a dead end.
    pub pivot: Option<u32>,
    pub pivot_degree: usize,
}

/// Why an extraction stopped without finding a sunflower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ExtractionTrace {
    /// Levels of the popular-element recursion; the last one is a dead end.
    Recursion(Vec<TraceStep>),
    /// Coreless sunflower sizes after each successful augmentation.
    Augmentation(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ExtractionResult {
    Found(Sunflower),
    Exhausted(ExtractionTrace),
}

impl ExtractionResult {
    pub fn is_found(&self) -> bool {
        matches!(self, ExtractionResult::Found(_))
    }

    pub fn sunflower(&self) -> Option<&Sunflower> {
        match self {
            ExtractionResult::Found(sf) => Some(sf),
            ExtractionResult::Exhausted(_) => None,
        }
    }
}

/// A found sunflower; a lone petal takes itself as core.
fn found(family: &SetFamily, core: MemberSet, petals: Vec<usize>) -> Sunflower {
    let core = match petals.as_slice() {
        [only] => family.members()[*only],
        _ => core,
    };
    Sunflower { core, petals }
}

/// Link family entry: the set with the core removed, and its host index.
type Linked = (MemberSet, usize);

/// Classic popular-element recursion. Takes a greedy maximal coreless
/// sunflower; if it has at least `k` members the first `k` are returned with
/// the accumulated core. Otherwise the element of its union lying in the most
/// sets (smallest id on ties) joins the core and the search continues on the
/// link family `{U \ {v} : v ∈ U}`.
///
/// Succeeds on every family with more than `(k-1)^s s!` members.
pub fn extract_er(family: &SetFamily, k: usize) -> Result<ExtractionResult> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut link: Vec<Linked> = family.members().iter().copied().zip(0..).collect();
    let mut core = MemberSet::EMPTY;
    let mut steps = Vec::new();
    loop {
        link.sort_unstable();
        let (kept, union) = greedy_positions(link.iter().map(|(u, _)| u).enumerate());
        if kept.len() >= k {
            let mut petals: Vec<usize> = kept[..k].iter().map(|&p| link[p].1).collect();
            petals.sort_unstable();
            return Ok(ExtractionResult::Found(found(family, core, petals)));
        }
        let pivot = most_popular(&link, union);
        steps.push(TraceStep {
            core,
            family_size: link.len(),
            coreless_size: kept.len(),
            pivot: pivot.map(|(v, _)| v),
            pivot_degree: pivot.map_or(0, |(_, d)| d),
        });
        let Some((v, _)) = pivot else {
            return Ok(ExtractionResult::Exhausted(ExtractionTrace::Recursion(
                steps,
            )));
        };
        core.insert(v);
        link = link
            .into_iter()
            .filter(|(u, _)| u.contains(v))
            .map(|(mut u, i)| {
                u.remove(v);
                (u, i)
            })
            .collect();
    }
}

/// Element of `candidates` contained in the most link sets; ties go to the
/// smallest id.
fn most_popular(link: &[Linked], candidates: MemberSet) -> Option<(u32, usize)> {
    let mut best: Option<(u32, usize)> = None;
    for v in candidates.iter() {
        let bit = MemberSet::singleton(v);
        let deg = link.iter().filter(|(u, _)| u.meets(bit)).count();
        if best.is_none_or(|(_, d)| deg > d) {
            best = Some((v, deg));
        }
    }
    best
}

/// Checks that a recursion trace is a genuine dead end for `family` and `k`:
/// each level's link family is rebuilt from the recorded pivots, its greedy
/// coreless size matches and stays below `k`, each pivot lies in the greedy
/// union, and the final level has an empty union.
pub fn replay_trace(family: &SetFamily, k: usize, steps: &[TraceStep]) -> bool {
    let mut core = MemberSet::EMPTY;
    let mut link: Vec<MemberSet> = family.members().to_vec();
    for (pos, step) in steps.iter().enumerate() {
        link.sort_unstable();
        let (kept, union) = greedy_positions(link.iter().enumerate());
        if step.core != core
            || step.family_size != link.len()
            || step.coreless_size != kept.len()
            || kept.len() >= k
        {
            return false;
        }
        match step.pivot {
            None => return pos + 1 == steps.len() && union.is_empty(),
            Some(v) => {
                if !union.contains(v) {
                    return false;
                }
                core.insert(v);
                link = link
                    .into_iter()
                    .filter(|u| u.contains(v))
                    .map(|mut u| {
                        u.remove(v);
                        u
                    })
                    .collect();
            }
        }
    }
    false
}

fn build_coreless(family: &SetFamily, mut members: Vec<usize>) -> CorelessSunflower {
    members.sort_unstable();
    let union = members
        .iter()
        .fold(MemberSet::EMPTY, |acc, &i| acc.union(family.members()[i]));
    let maximal = first_disjoint_outside(family, &members, union).is_none();
    CorelessSunflower {
        members,
        union,
        maximal,
    }
}

/// Swap move: replace some `B_i` by a set `U` meeting `B_i` in exactly one
/// element and avoiding the rest of `B`, so that a member of the family
/// becomes disjoint from the new union. Returns the enlarged coreless
/// sunflower (`|B| + 1` members) or `None` when no swap frees a set.
pub fn swap_augment(
    family: &SetFamily,
    b: &CorelessSunflower,
) -> Result<Option<CorelessSunflower>> {
    b.require_maximal(family)?;
    let members = family.members();
    for (pos, &bi) in b.members.iter().enumerate() {
        let target = members[bi];
        let rest = b
            .members
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != pos)
            .fold(MemberSet::EMPTY, |acc, (_, &i)| acc.union(members[i]));
        for (ui, &u) in members.iter().enumerate() {
            if ui == bi || u.intersection(target).len() != 1 || u.meets(rest) {
                continue;
            }
            let new_union = rest.union(u);
            let freed = members
                .iter()
                .enumerate()
                .find(|&(wi, w)| {
                    w.is_disjoint(new_union)
                        && wi != ui
                        && b.members
                            .iter()
                            .enumerate()
                            .all(|(p, &m)| p == pos || m != wi)
                })
                .map(|(wi, _)| wi);
            if let Some(wi) = freed {
                let mut next: Vec<usize> = b
                    .members
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != pos)
                    .map(|(_, &i)| i)
                    .collect();
                next.push(ui);
                next.push(wi);
                return Ok(Some(build_coreless(family, next)));
            }
        }
    }
    Ok(None)
}

/// Outcome of [`subset_augment`] with its enumeration statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetAugmentOutcome {
    pub improved: Option<CorelessSunflower>,
    /// Candidate sub-families `B'` examined.
    pub examined: u64,
    /// Sub-families with `|B'| > j`, never enumerated.
    pub skipped: u128,
}

/// Subset move: for nonempty `B' ⊆ B` with `|B'| ≤ j` (by size, then
/// lexicographically), form `H = F_j(∪B') − F(∪(B − B'))` and greedily pick
/// pairwise-disjoint sets from `H`. Every set of `H` avoids `B − B'`, so
/// `|B'| + 1` such sets replace `B'` and enlarge `B`.
pub fn subset_augment(
    family: &SetFamily,
    b: &CorelessSunflower,
    j: usize,
    budget: u64,
) -> Result<SubsetAugmentOutcome> {
    b.require_maximal(family)?;
    if j == 0 || j > family.max_card() as usize {
        return Err(Error::invalid(format!(
            "j must be in 1..={}, got {j}",
            family.max_card()
        )));
    }
    let members = family.members();
    let r = b.members.len();
    let skipped: u128 = (j + 1..=r).map(|t| binomial_u128(r, t)).sum();
    let mut examined = 0u64;
    for t in 1..=j.min(r) {
        let mut combo: Vec<usize> = (0..t).collect();
        loop {
            if examined >= budget {
                return Err(Error::BudgetExceeded { examined });
            }
            examined += 1;
            let inner = combo
                .iter()
                .fold(MemberSet::EMPTY, |acc, &p| acc.union(members[b.members[p]]));
            let outer = b.union.difference(inner);
            let h = members
                .iter()
                .enumerate()
                .filter(|(_, u)| u.intersection(inner).len() == j && u.is_disjoint(outer));
            let (picked, _) = greedy_positions(h);
            if picked.len() > t {
                let mut next: Vec<usize> = (0..r)
                    .filter(|p| !combo.contains(p))
                    .map(|p| b.members[p])
                    .collect();
                next.extend(picked);
                return Ok(SubsetAugmentOutcome {
                    improved: Some(build_coreless(family, next)),
                    examined,
                    skipped,
                });
            }
            if !next_combination(&mut combo, r) {
                break;
            }
        }
    }
    Ok(SubsetAugmentOutcome {
        improved: None,
        examined,
        skipped,
    })
}

/// Advances `combo` to the next `t`-combination of `0..n` in lexicographic
/// order; returns false after the last one.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let t = combo.len();
    for i in (0..t).rev() {
        if combo[i] < n - t + i {
            combo[i] += 1;
            for j in i + 1..t {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub(crate) fn binomial_u128(n: usize, t: usize) -> u128 {
    if t > n {
        return 0;
    }
    let t = t.min(n - t);
    (0..t).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Adds members disjoint from the current union, in canonical order, until
/// the coreless sunflower is maximal.
fn complete_to_maximal(family: &SetFamily, b: CorelessSunflower) -> CorelessSunflower {
    let mut members = b.members;
    let mut union = b.union;
    for (i, &u) in family.members().iter().enumerate() {
        if u.is_disjoint(union) && members.binary_search(&i).is_err() {
            union = union.union(u);
            let at = members.partition_point(|&m| m < i);
            members.insert(at, i);
        }
    }
    CorelessSunflower {
        members,
        union,
        maximal: true,
    }
}

/// Greedy coreless sunflower followed by repeated swap and subset moves
/// (`j = 1..=j_max`) until it reaches `k` members (found, empty core) or no
/// move applies (exhausted). For `k ≥ 2` the core is always empty.
pub fn extract_augmenting(
    family: &SetFamily,
    k: usize,
    j_max: usize,
    budget: u64,
) -> Result<ExtractionResult> {
    if k == 0 || j_max == 0 {
        return Err(Error::invalid("k and j_max must be at least 1"));
    }
    if family.is_empty() {
        return Ok(ExtractionResult::Exhausted(ExtractionTrace::Augmentation(
            vec![0],
        )));
    }
    let mut b = greedy_coreless(family)?;
    let mut sizes = vec![b.len()];
    let j_top = j_max.min(family.max_card() as usize);
    'grow: loop {
        debug_assert!(CorelessSunflower::new(family, &b.members).is_ok());
        if b.len() >= k {
            let petals = b.members[..k].to_vec();
            return Ok(ExtractionResult::Found(found(
                family,
                MemberSet::EMPTY,
                petals,
            )));
        }
        if let Some(next) = swap_augment(family, &b)? {
            b = complete_to_maximal(family, next);
            sizes.push(b.len());
            continue;
        }
        for j in 1..=j_top {
            if let Some(next) = subset_augment(family, &b, j, budget)?.improved {
                b = complete_to_maximal(family, next);
                sizes.push(b.len());
                continue 'grow;
            }
        }
        return Ok(ExtractionResult::Exhausted(ExtractionTrace::Augmentation(
            sizes,
        )));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::GroundSet;

    fn fam(n: u32, s: u32, sets: &[&[u32]]) -> SetFamily {
        SetFamily::build(n, s, sets.iter().copied()).unwrap()
    }

    fn k5_edges() -> SetFamily {
        let mut e = Vec::new();
        for a in 1..=5u32 {
            for b in a + 1..=5 {
                e.push(vec![a, b]);
            }
        }
        SetFamily::build(5, 2, e).unwrap()
    }

    fn set(n: u32, e: &[u32]) -> MemberSet {
        MemberSet::from_elements(GroundSet::new(n).unwrap(), e.iter().copied()).unwrap()
    }

    #[test]
    fn common_core_examples() {
        let f = fam(3, 2, &[&[1, 2], &[1, 3]]);
        assert_eq!(common_core(&f, &[0, 1]).unwrap(), set(3, &[1]));
        let g = fam(2, 1, &[&[1], &[2]]);
        assert_eq!(common_core(&g, &[0, 1]).unwrap(), MemberSet::EMPTY);
        assert_eq!(common_core(&f, &[0]).unwrap(), set(3, &[1, 2]));
        assert!(matches!(
            common_core(&f, &[0, 7]),
            Err(Error::IndexOutOfRange { index: 7, len: 2 })
        ));
    }

    #[test]
    fn check_sunflower_examples() {
        let star = fam(4, 2, &[&[1, 2], &[1, 3], &[1, 4]]);
        assert_eq!(
            check_sunflower(&star, &[0, 1, 2]).unwrap(),
            Some(set(4, &[1]))
        );
        let tri = fam(3, 2, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(check_sunflower(&tri, &[0, 1, 2]).unwrap(), None);
        let disj = fam(3, 1, &[&[1], &[2], &[3]]);
        assert_eq!(
            check_sunflower(&disj, &[0, 1, 2]).unwrap(),
            Some(MemberSet::EMPTY)
        );
        assert!(check_sunflower(&disj, &[0, 0]).is_err());
    }

    #[test]
    fn empty_set_sunflower_semantics() {
        let f = SetFamily::build(4, 2, [vec![], vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(
            check_sunflower(&f, &[0, 1, 2]).unwrap(),
            Some(MemberSet::EMPTY)
        );
    }

    #[test]
    fn greedy_examples() {
        let tri = fam(3, 2, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(greedy_coreless(&tri).unwrap().len(), 1);
        let disj = fam(3, 1, &[&[1], &[2], &[3]]);
        assert_eq!(greedy_coreless(&disj).unwrap().len(), 3);
        assert_eq!(greedy_coreless(&k5_edges()).unwrap().len(), 2);
        let empty = SetFamily::build(3, 1, Vec::<Vec<u32>>::new()).unwrap();
        assert_eq!(greedy_coreless(&empty).unwrap_err(), Error::EmptyFamily);
    }

    #[test]
    fn er_on_k5_finds_a_star() {
        let f = k5_edges();
        let res = extract_er(&f, 3).unwrap();
        let sf = res.sunflower().expect("found");
        assert_eq!(sf.len(), 3);
        assert_eq!(sf.core.len(), 1);
        assert!(sf.verify(&f));
    }

    #[test]
    fn er_exhausts_with_replayable_trace() {
        let f = fam(2, 1, &[&[1], &[2]]);
        match extract_er(&f, 3).unwrap() {
            ExtractionResult::Exhausted(ExtractionTrace::Recursion(steps)) => {
                assert!(replay_trace(&f, 3, &steps));
                assert!(!replay_trace(&f, 2, &steps));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn er_base_case_core_empty_and_k1() {
        let f = fam(6, 2, &[&[1, 2], &[3, 4], &[5, 6], &[1, 3]]);
        let sf = extract_er(&f, 3).unwrap().sunflower().cloned().unwrap();
        assert!(sf.core.is_empty());
        let sf1 = extract_er(&f, 1).unwrap().sunflower().cloned().unwrap();
        assert_eq!(sf1.petals, vec![0]);
        assert!(extract_er(&f, 0).is_err());
    }

    #[test]
    fn swap_examples() {
        // {1} meets {1,2}, so B = {{1,2},{3,4}} is maximal and no swap frees a set.
        let f = fam(4, 2, &[&[1], &[1, 2], &[3, 4]]);
        let b = CorelessSunflower::new(&f, &[1, 2]).unwrap();
        assert!(b.is_maximal());
        assert_eq!(swap_augment(&f, &b).unwrap(), None);

        let g = fam(4, 2, &[&[1, 2], &[2, 3], &[3, 4]]);
        let b = CorelessSunflower::new(&g, &[0, 2]).unwrap();
        assert_eq!(swap_augment(&g, &b).unwrap(), None);

        let not_max = CorelessSunflower::new(&f, &[1]).unwrap();
        assert!(!not_max.is_maximal());
        assert!(matches!(
            swap_augment(&f, &not_max),
            Err(Error::NotMaximal { witness: 2 })
        ));
    }

    #[test]
    fn swap_success_instance() {
        let f = fam(6, 2, &[&[1, 2], &[1, 5], &[2, 6], &[3, 4]]);
        let b = greedy_coreless(&f).unwrap();
        assert_eq!(b.sets(&f), vec![set(6, &[1, 2]), set(6, &[3, 4])]);
        let up = swap_augment(&f, &b).unwrap().expect("swap succeeds");
        assert_eq!(
            up.sets(&f),
            vec![set(6, &[1, 5]), set(6, &[2, 6]), set(6, &[3, 4])]
        );
        let out = subset_augment(&f, &b, 1, DEFAULT_SUBSET_BUDGET).unwrap();
        let up1 = out.improved.expect("subset move succeeds");
        assert_eq!(up1.len(), 3);
        assert!(CorelessSunflower::new(&f, up1.members()).is_ok());
    }

    #[test]
    fn subset_skip_count_and_triangle() {
        let tri = fam(3, 2, &[&[1, 2], &[2, 3], &[1, 3]]);
        let b = greedy_coreless(&tri).unwrap();
        for j in 1..=2 {
            let out = subset_augment(&tri, &b, j, DEFAULT_SUBSET_BUDGET).unwrap();
            assert!(out.improved.is_none());
        }
        // B of size 4 with j = 2: subsets of size 3 and 4 are skipped.
        let f = fam(8, 2, &[&[1, 2], &[3, 4], &[5, 6], &[7, 8]]);
        let b = greedy_coreless(&f).unwrap();
        let out = subset_augment(&f, &b, 2, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(out.examined, 4 + 6);
        assert_eq!(out.skipped, 4 + 1);
        assert!(matches!(
            subset_augment(&f, &b, 2, 3),
            Err(Error::BudgetExceeded { examined: 3 })
        ));
        assert!(subset_augment(&f, &b, 3, 10).is_err());
    }

    #[test]
    fn augmenting_extraction() {
        let tri = fam(3, 2, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert!(!extract_augmenting(&tri, 2, 2, DEFAULT_SUBSET_BUDGET)
            .unwrap()
            .is_found());
        let f = fam(6, 2, &[&[1, 2], &[1, 5], &[2, 6], &[3, 4]]);
        let res = extract_augmenting(&f, 3, 1, DEFAULT_SUBSET_BUDGET).unwrap();
        let sf = res.sunflower().unwrap();
        assert!(sf.core.is_empty() && sf.verify(&f));
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
        assert_eq!(binomial_u128(10, 3), 120);
        assert_eq!(binomial_u128(3, 5), 0);
    }
}
