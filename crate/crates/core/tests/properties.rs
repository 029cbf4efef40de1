//! Randomized invariants of the family, extraction and bound layers.

use proptest::prelude::*;
use sfkit_core::bounds::{phi0, phi1, phi1_exact};
use sfkit_core::harness::{generate_family, DistributionKind, FamilyDistribution};
use sfkit_core::oracle::brute_force_find_sunflower;
use sfkit_core::sunflower::{check_sunflower, extract_augmenting, extract_er, greedy_coreless};
use sfkit_core::{Hp, MemberSet, SetFamily};

/// Families of nonempty subsets of `[n]` with at most `s` elements.
fn family(max_n: u32, max_s: u32, max_len: usize) -> impl Strategy<Value = SetFamily> {
    (2..=max_n, 1..=max_s).prop_flat_map(move |(n, s)| {
        let s = s.min(n);
        let set = proptest::collection::btree_set(1..=n, 1..=s as usize);
        proptest::collection::btree_set(set, 0..=max_len).prop_map(move |sets| {
            SetFamily::build(
                n,
                s,
                sets.into_iter().map(|x| x.into_iter().collect::<Vec<_>>()),
            )
            .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_round_trip(f in family(12, 4, 30)) {
        prop_assert_eq!(SetFamily::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn greedy_is_disjoint_and_maximal(f in family(12, 4, 30)) {
        if f.is_empty() {
            prop_assert!(greedy_coreless(&f).is_err());
            return Ok(());
        }
        let b = greedy_coreless(&f).unwrap();
        prop_assert!(b.is_maximal());
        let sets = b.sets(&f);
        for (i, a) in sets.iter().enumerate() {
            for c in &sets[i + 1..] {
                prop_assert!(a.is_disjoint(*c));
            }
        }
        let union = b.union();
        prop_assert!(f.members().iter().all(|u| u.meets(union) || b.members().contains(&f.index_of(*u).unwrap())));
    }

    #[test]
    fn extraction_results_verify(f in family(10, 3, 25), k in 1usize..=4) {
        if let Some(sf) = extract_er(&f, k).unwrap().sunflower() {
            prop_assert_eq!(sf.len(), k);
            prop_assert!(sf.verify(&f));
        }
        if let Some(sf) = extract_augmenting(&f, k, 2, 100_000).unwrap().sunflower() {
            prop_assert!(sf.verify(&f));
            prop_assert!(k == 1 || sf.core.is_empty());
        }
        let brute = brute_force_find_sunflower(&f, k).unwrap();
        if extract_er(&f, k).unwrap().is_found() {
            prop_assert!(brute.is_some());
        }
        if let Some(sf) = brute {
            prop_assert_eq!(check_sunflower(&f, &sf.petals).unwrap(), Some(sf.core));
        }
    }

    #[test]
    fn above_classic_bound_extraction_succeeds(seed in any::<u64>(), k in 2usize..=4, extra in 1usize..=5) {
        let s = 2u32;
        let p0 = phi0(k as u64, u64::from(s)).unwrap();
        let size = usize::try_from(p0).unwrap() + extra;
        let f = generate_family(&FamilyDistribution {
            kind: DistributionKind::UniformAtMost,
            ground_size: 12,
            set_size: s,
            family_size: size,
            seed,
        }).unwrap();
        let sf = extract_er(&f, k).unwrap();
        prop_assert!(sf.sunflower().is_some_and(|x| x.verify(&f)));
    }

    #[test]
    fn sunflower_check_is_order_free(f in family(10, 3, 8)) {
        let idx: Vec<usize> = (0..f.len()).collect();
        let mut rev = idx.clone();
        rev.reverse();
        prop_assert_eq!(check_sunflower(&f, &idx).ok(), check_sunflower(&f, &rev).ok());
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), kind in 0usize..5, size in 1usize..=20) {
        let d = FamilyDistribution {
            kind: DistributionKind::ALL[kind],
            ground_size: 20,
            set_size: 3,
            family_size: size,
            seed,
        };
        prop_assert_eq!(generate_family(&d).unwrap(), generate_family(&d).unwrap());
    }

    #[test]
    fn exact_and_log_phi1_agree(k in 1u64..50, s in 1i64..30) {
        let exact: f64 = phi1_exact(k, s).unwrap().to_real::<f64>();
        let log = phi1::<Hp>(k, s).unwrap().ln_f64();
        prop_assert!((exact.ln() - log).abs() < 1e-9 * log.abs().max(1.0));
    }
}

#[test]
fn member_set_algebra() {
    let a = MemberSet::from_bits(0b1011);
    let b = MemberSet::from_bits(0b0110);
    assert_eq!(a.intersection(b).to_vec(), vec![2]);
    assert_eq!(a.union(b).len(), 4);
    assert!(a.difference(b).is_disjoint(b));
}
