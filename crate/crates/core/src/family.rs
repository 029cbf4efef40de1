//! Ground sets, member sets and set families, plus the subfamily selectors
//! `F(S)`, `F_j(S)`, `F_sup(S)` and the incidence pairs `P(S)`.
//!
//! Member sets are bit-vectors over a ground set of at most [`MAX_GROUND`]
//! elements, so intersection and disjointness tests are single `u128`
//! operations. Families are kept deduplicated and sorted in canonical order:
//! lexicographic order on the ascending element lists.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: u32 = 128;

/// The universal set `{1, ..., size}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    size: u32,
}

impl GroundSet {
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 || size > MAX_GROUND {
            return Err(Error::invalid(format!(
                "ground size must be in 1..={MAX_GROUND}, got {size}"
            )));
        }
        Ok(GroundSet { size })
    }

    pub fn size(self) -> u32 {
        self.size
    }

    /// The whole ground set as a member set.
    pub fn full(self) -> MemberSet {
        if self.size == 128 {
            MemberSet(u128::MAX)
        } else {
            MemberSet((1u128 << self.size) - 1)
        }
    }

    pub fn contains(self, set: MemberSet) -> bool {
        set.0 & !self.full().0 == 0
    }
}

/// A subset of the ground set. Element `v` (1-based) is stored in bit `v - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MemberSet(u128);

impl MemberSet {
    pub const EMPTY: MemberSet = MemberSet(0);

    pub fn from_bits(bits: u128) -> Self {
        MemberSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(v: u32) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&v));
        MemberSet(1u128 << (v - 1))
    }

    /// Builds a set from element ids, checking them against `ground`.
    /// Repeated ids are collapsed.
    pub fn from_elements<I>(ground: GroundSet, elements: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut bits = 0u128;
        for e in elements {
            let e: u64 = e.into();
            if e == 0 || e > u64::from(ground.size) {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    ground: ground.size,
                });
            }
            bits |= 1u128 << (e - 1);
        }
        Ok(MemberSet(bits))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: u32) -> bool {
        (1..=MAX_GROUND).contains(&v) && self.0 >> (v - 1) & 1 == 1
    }

    pub fn intersection(self, other: MemberSet) -> MemberSet {
        MemberSet(self.0 & other.0)
    }

    pub fn union(self, other: MemberSet) -> MemberSet {
        MemberSet(self.0 | other.0)
    }

    pub fn difference(self, other: MemberSet) -> MemberSet {
        MemberSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: MemberSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn meets(self, other: MemberSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: MemberSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(&mut self, v: u32) {
        self.0 |= MemberSet::singleton(v).0;
    }

    pub fn remove(&mut self, v: u32) {
        self.0 &= !MemberSet::singleton(v).0;
    }

    /// Smallest element, if any.
    pub fn min_element(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

pub struct Elements(u128);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(t + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

// Lexicographic order on ascending element lists, computed on the bit
// patterns: find the smallest element in exactly one of the two sets. The
// set holding it is smaller unless the other set has no element beyond it
// (then the other set is a proper prefix).
impl Ord for MemberSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let t = diff.trailing_zeros();
        let above = if t == 127 { 0 } else { !0u128 << (t + 1) };
        let self_has = self.0 >> t & 1 == 1;
        let lacking = if self_has { other.0 } else { self.0 };
        let holder_is_smaller = lacking & above != 0;
        match (self_has, holder_is_smaller) {
            (true, true) | (false, false) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for MemberSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// An incidence `(v, U)` with `v` in `U ∩ S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidencePair {
    pub element: u32,
    pub member_index: usize,
}

/// A finite family of distinct subsets of the ground set, each of
/// cardinality at most `max_card`, stored in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSet,
    max_card: u32,
    members: Vec<MemberSet>,
}

impl SetFamily {
    /// Builds a canonical family from element lists. Input order does not
    /// matter; listing the same set twice is an error.
    pub fn build<I, S>(ground_size: u32, max_card: u32, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let ground = GroundSet::new(ground_size)?;
        if max_card == 0 {
            return Err(Error::invalid("max cardinality must be at least 1"));
        }
        let mut members = Vec::new();
        for set in sets {
            let set = set.as_ref();
            let m = MemberSet::from_elements(ground, set.iter().copied())?;
            if m.len() > max_card as usize {
                return Err(Error::CardinalityExceeded {
                    set: m.to_vec(),
                    len: m.len(),
                    max_card,
                });
            }
            members.push(m);
        }
        Self::from_members(ground, max_card, members)
    }

    /// Builds a canonical family from already-constructed member sets.
    pub fn from_members(
        ground: GroundSet,
        max_card: u32,
        mut members: Vec<MemberSet>,
    ) -> Result<Self> {
        for &m in &members {
            if !ground.contains(m) {
                let bad = m.difference(ground.full()).min_element().unwrap_or(0);
                return Err(Error::ElementOutOfRange {
                    element: u64::from(bad),
                    ground: ground.size(),
                });
            }
            if m.len() > max_card as usize {
                return Err(Error::CardinalityExceeded {
                    set: m.to_vec(),
                    len: m.len(),
                    max_card,
                });
            }
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSet { set: w[0].to_vec() });
        }
        Ok(SetFamily {
            ground,
            max_card,
            members,
        })
    }

    /// Subfamily of `self` keeping members selected by `keep`. Canonical
    /// order is inherited.
    fn filtered(&self, keep: impl Fn(MemberSet) -> bool) -> SetFamily {
        SetFamily {
            ground: self.ground,
            max_card: self.max_card,
            members: self.members.iter().copied().filter(|&u| keep(u)).collect(),
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn max_card(&self) -> u32 {
        self.max_card
    }

    pub fn members(&self) -> &[MemberSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, index: usize) -> Result<MemberSet> {
        self.members
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.members.len(),
            })
    }

    /// Position of `set` in canonical order, if it is a member.
    pub fn index_of(&self, set: MemberSet) -> Option<usize> {
        self.members.binary_search(&set).ok()
    }

    pub fn contains(&self, set: MemberSet) -> bool {
        self.index_of(set).is_some()
    }

    /// Element lists in canonical order; `build` on this output returns an
    /// identical family.
    pub fn to_lists(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(|m| m.to_vec()).collect()
    }

    /// Union of all members.
    pub fn support(&self) -> MemberSet {
        self.members
            .iter()
            .fold(MemberSet::EMPTY, |acc, &m| acc.union(m))
    }

    fn check_selector(&self, s: MemberSet) -> Result<()> {
        if self.ground.contains(s) {
            Ok(())
        } else {
            let bad = s.difference(self.ground.full()).min_element().unwrap_or(0);
            Err(Error::ElementOutOfRange {
                element: u64::from(bad),
                ground: self.ground.size(),
            })
        }
    }

    /// `F(S)`: members meeting `s`.
    pub fn select_intersecting(&self, s: MemberSet) -> Result<SetFamily> {
        self.check_selector(s)?;
        Ok(self.filtered(|u| u.meets(s)))
    }

    /// `F_j(S)`: members `U` with `|U ∩ S| = j`.
    pub fn select_by_intersection_size(&self, s: MemberSet, j: usize) -> Result<SetFamily> {
        self.check_selector(s)?;
        if j == 0 {
            return Err(Error::invalid("intersection size j must be positive"));
        }
        Ok(self.filtered(|u| u.intersection(s).len() == j))
    }

    /// `F_sup(S)`: members containing `s`.
    pub fn select_supersets(&self, s: MemberSet) -> Result<SetFamily> {
        self.check_selector(s)?;
        Ok(self.filtered(|u| s.is_subset(u)))
    }

    /// `P(S)`: all `(v, U)` with `v ∈ U ∩ S`, ordered by member then element.
    pub fn incidence_pairs(&self, s: MemberSet) -> Result<Vec<IncidencePair>> {
        self.check_selector(s)?;
        Ok(self
            .members
            .iter()
            .enumerate()
            .flat_map(|(i, u)| {
                u.intersection(s).iter().map(move |v| IncidencePair {
                    element: v,
                    member_index: i,
                })
            })
            .collect())
    }

    /// Parses the family text format: a `ground <n> maxcard <s>` header,
    /// then one set per line as ascending integers, `-` for the empty set.
    pub fn parse(text: &str) -> Result<SetFamily> {
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let toks: Vec<&str> = header.split_ascii_whitespace().collect();
        let (n, s) = match toks.as_slice() {
            ["ground", n, "maxcard", s] => (
                n.parse::<u32>()
                    .map_err(|e| perr(hline, format!("bad ground size {n:?}: {e}")))?,
                s.parse::<u32>()
                    .map_err(|e| perr(hline, format!("bad maxcard {s:?}: {e}")))?,
            ),
            _ => {
                return Err(perr(
                    hline,
                    "expected header `ground <n> maxcard <s>`".into(),
                ))
            }
        };
        let ground = GroundSet::new(n).map_err(|e| perr(hline, e.to_string()))?;
        if s == 0 {
            return Err(perr(hline, "maxcard must be at least 1".into()));
        }
        let mut seen = std::collections::HashMap::new();
        let mut members = Vec::new();
        let body: Vec<(usize, &str)> = lines.collect();
        let last = body.len();
        for (pos, (line_no, line)) in body.into_iter().enumerate() {
            let line = line.trim_matches(' ');
            if line.is_empty() {
                if pos + 1 == last {
                    break;
                }
                return Err(perr(
                    line_no,
                    "blank line (use `-` for the empty set)".into(),
                ));
            }
            let set = if line == "-" {
                MemberSet::EMPTY
            } else {
                let mut elems = Vec::new();
                for tok in line.split(' ').filter(|t| !t.is_empty()) {
                    let v: u64 = tok
                        .parse()
                        .map_err(|_| perr(line_no, format!("bad element {tok:?}")))?;
                    if elems.last().is_some_and(|&last| v <= last) {
                        return Err(perr(line_no, "elements must be strictly ascending".into()));
                    }
                    elems.push(v);
                }
                MemberSet::from_elements(ground, elems).map_err(|e| perr(line_no, e.to_string()))?
            };
            if set.len() > s as usize {
                return Err(perr(
                    line_no,
                    format!("set has {} elements, maxcard is {s}", set.len()),
                ));
            }
            if let Some(first) = seen.insert(set, line_no) {
                return Err(perr(
                    line_no,
                    format!("duplicate set (first listed on line {first})"),
                ));
            }
            members.push(set);
        }
        SetFamily::from_members(ground, s, members)
    }

    /// Serializes to the family text format, members in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = format!("ground {} maxcard {}\n", self.ground.size(), self.max_card);
        for m in &self.members {
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, s: u32, sets: &[&[u32]]) -> SetFamily {
        SetFamily::build(n, s, sets.iter().copied()).unwrap()
    }

    fn set(n: u32, e: &[u32]) -> MemberSet {
        MemberSet::from_elements(GroundSet::new(n).unwrap(), e.iter().copied()).unwrap()
    }

    #[test]
    fn build_rejects_duplicates_after_sorting() {
        let err = SetFamily::build(5, 2, [vec![1, 2], vec![2, 1], vec![3]]).unwrap_err();
        assert_eq!(err, Error::DuplicateSet { set: vec![1, 2] });
    }

    #[test]
    fn build_canonical() {
        let f = fam(5, 2, &[&[1, 4], &[1, 2], &[1, 3]]);
        assert_eq!(f.to_lists(), vec![vec![1, 2], vec![1, 3], vec![1, 4]]);
    }

    #[test]
    fn build_out_of_range_and_cardinality() {
        assert!(matches!(
            SetFamily::build(3, 1, [[1], [2], [4]]),
            Err(Error::ElementOutOfRange { element: 4, .. })
        ));
        assert!(matches!(
            SetFamily::build(3, 1, [vec![1, 2]]),
            Err(Error::CardinalityExceeded { .. })
        ));
        assert!(GroundSet::new(129).is_err());
        assert!(GroundSet::new(0).is_err());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let g = GroundSet::new(128).unwrap();
        let lists: Vec<Vec<u32>> = vec![
            vec![],
            vec![1],
            vec![1, 2],
            vec![1, 2, 3],
            vec![1, 3],
            vec![1, 128],
            vec![2],
            vec![2, 3],
            vec![127, 128],
            vec![128],
        ];
        let sets: Vec<MemberSet> = lists
            .iter()
            .map(|l| MemberSet::from_elements(g, l.iter().copied()).unwrap())
            .collect();
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                assert_eq!(a.cmp(b), i.cmp(&j), "{a:?} vs {b:?}");
                assert_eq!(a.cmp(b), lists[i].cmp(&lists[j]));
            }
        }
    }

    #[test]
    fn selectors_match_definitions() {
        let f = fam(4, 2, &[&[1, 2], &[3, 4], &[1, 3]]);
        let got = f.select_intersecting(set(4, &[1])).unwrap();
        assert_eq!(got.to_lists(), vec![vec![1, 2], vec![1, 3]]);
        let f2 = fam(3, 2, &[&[1, 2]]);
        assert!(f2.select_intersecting(set(3, &[3])).unwrap().is_empty());

        let t = fam(3, 2, &[&[1, 2], &[1, 3], &[2, 3]]);
        let s12 = set(3, &[1, 2]);
        assert_eq!(
            t.select_by_intersection_size(s12, 2).unwrap().to_lists(),
            vec![vec![1, 2]]
        );
        assert_eq!(
            t.select_by_intersection_size(s12, 1).unwrap().to_lists(),
            vec![vec![1, 3], vec![2, 3]]
        );
        assert!(t.select_by_intersection_size(s12, 3).unwrap().is_empty());

        let st = fam(3, 2, &[&[1, 2], &[1, 3]]);
        assert_eq!(st.select_supersets(set(3, &[1])).unwrap(), st);
        assert!(st.select_supersets(set(3, &[2, 3])).unwrap().is_empty());
        assert_eq!(st.select_supersets(MemberSet::EMPTY).unwrap(), st);

        let all = t.select_intersecting(t.ground().full()).unwrap();
        assert_eq!(all, t);
    }

    #[test]
    fn selector_out_of_range() {
        let f = fam(3, 2, &[&[1, 2]]);
        let big = MemberSet::from_bits(1 << 5);
        assert!(matches!(
            f.select_supersets(big),
            Err(Error::ElementOutOfRange { element: 6, .. })
        ));
    }

    #[test]
    fn incidence_pairs_examples() {
        let f = fam(3, 2, &[&[1, 2], &[1, 3]]);
        let p = f.incidence_pairs(set(3, &[1])).unwrap();
        assert_eq!(
            p,
            vec![
                IncidencePair {
                    element: 1,
                    member_index: 0
                },
                IncidencePair {
                    element: 1,
                    member_index: 1
                }
            ]
        );
        let g = fam(3, 2, &[&[1, 2]]);
        assert_eq!(g.incidence_pairs(set(3, &[1, 2])).unwrap().len(), 2);
    }

    #[test]
    fn text_format_roundtrip_and_errors() {
        let f = SetFamily::build(5, 3, [vec![], vec![1, 2, 3], vec![4]]).unwrap();
        let text = f.to_text();
        assert_eq!(text, "ground 5 maxcard 3\n-\n1 2 3\n4\n");
        assert_eq!(SetFamily::parse(&text).unwrap(), f);

        let dup = SetFamily::parse("ground 4 maxcard 2\n1 2\n3\n1 2\n").unwrap_err();
        assert_eq!(
            dup,
            Error::Parse {
                line: 4,
                message: "duplicate set (first listed on line 2)".into()
            }
        );
        assert!(matches!(
            SetFamily::parse("ground 4 maxcard 2\n2 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            SetFamily::parse("ground 4 maxcard 2\n1 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            SetFamily::parse("grund 4 maxcard 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SetFamily::parse("ground 4 maxcard 2\n\n1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
