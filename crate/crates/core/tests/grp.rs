use std::collections::BTreeSet;

use asphera_core::grp::{
    all_subgroups, conjugation_action_on_subgroups, is_normal, left_cosets, quotient_group, shift_action, FiniteGroup, GroupAction,
};
use proptest::prelude::*;

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..=24).prop_map(|n| FiniteGroup::cyclic(n).unwrap()),
        (1usize..=12).prop_map(|n| FiniteGroup::dihedral(n).unwrap()),
        (1usize..=4, 1usize..=6)
            .prop_filter("order ≤ 24", |(a, b)| a * b <= 24)
            .prop_map(|(a, b)| FiniteGroup::direct_product(&FiniteGroup::cyclic(a).unwrap(), &FiniteGroup::cyclic(b).unwrap())),
        (1usize..=2, 2usize..=6)
            .prop_filter("order ≤ 24", |(a, b)| 2 * a * b <= 24)
            .prop_map(|(a, b)| FiniteGroup::direct_product(&FiniteGroup::cyclic(a).unwrap(), &FiniteGroup::dihedral(b).unwrap())),
    ]
}

fn assert_homomorphism(a: &GroupAction) {
    let g = a.group();
    assert!(a.perm(g.identity()).iter().enumerate().all(|(i, &x)| i == x));
    for x in g.elements() {
        for y in g.elements() {
            let composed: Vec<usize> = (0..a.ground_size()).map(|i| a.apply(x, a.apply(y, i))).collect();
            assert_eq!(a.perm(g.mul(x, y)), &composed[..]);
        }
    }
}

/// Subgroups of a group of order ≤ 12 straight from its subsets.
fn subgroups_brute_force(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if s.contains(&g.identity()) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b)))) {
            out.insert(s);
        }
    }
    out
}

fn divisor_count(n: usize) -> usize {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count()
}

#[test]
fn named_examples() {
    let z6 = FiniteGroup::cyclic(6).unwrap();
    assert_eq!(z6.order(), 6);
    assert_eq!(z6.element_order(1), 6);
    for n in 3..=8 {
        let d = FiniteGroup::dihedral(n).unwrap();
        assert_eq!(d.order(), 2 * n);
        let r = 1;
        let s = n;
        assert_eq!(d.element_order(r), n);
        assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
    }
}

#[test]
fn subgroups_of_cyclic_groups_match_divisors() {
    for n in 1..=24 {
        assert_eq!(all_subgroups(&FiniteGroup::cyclic(n).unwrap()).len(), divisor_count(n), "n = {n}");
    }
}

#[test]
fn subgroups_match_subset_enumeration() {
    let groups = [
        FiniteGroup::dihedral(3).unwrap(),
        FiniteGroup::dihedral(4).unwrap(),
        FiniteGroup::dihedral(6).unwrap(),
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap()),
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(6).unwrap()),
        FiniteGroup::cyclic(12).unwrap(),
    ];
    for g in &groups {
        let found: BTreeSet<Vec<usize>> = all_subgroups(g).iter().map(|h| h.members().to_vec()).collect();
        assert_eq!(found, subgroups_brute_force(g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tables_are_groups(g in small_group()) {
        let n = g.order();
        for a in 0..n {
            prop_assert_eq!(g.mul(g.identity(), a), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in 0..n {
                for c in 0..n {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn lagrange_and_coset_partition(g in small_group()) {
        for h in all_subgroups(&g) {
            prop_assert_eq!(g.order() % h.order(), 0);
            let cosets = left_cosets(&g, &h).unwrap();
            prop_assert_eq!(cosets.len(), h.index());
            let mut seen: Vec<usize> = cosets.iter().flat_map(|c| c.members.clone()).collect();
            prop_assert_eq!(cosets.iter().map(|c| c.len()).sum::<usize>(), g.order());
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), g.order());
        }
    }

    #[test]
    fn quotients_have_index_order(g in small_group()) {
        for h in all_subgroups(&g) {
            let q = quotient_group(&g, &h);
            if is_normal(&g, &h) {
                prop_assert_eq!(q.unwrap().order(), h.index());
            } else {
                prop_assert!(q.is_err());
            }
        }
    }

    #[test]
    fn constructed_actions_are_homomorphisms(g in small_group()) {
        let subgroups = all_subgroups(&g);
        assert_homomorphism(&conjugation_action_on_subgroups(&g, &subgroups).unwrap());
        for h in &subgroups {
            let cosets = left_cosets(&g, h).unwrap();
            assert_homomorphism(&shift_action(&g, &cosets).unwrap());
            assert_homomorphism(&GroupAction::trivial(g.clone(), 3));
        }
    }

    #[test]
    fn groups_round_trip_through_json(g in small_group()) {
        let back: FiniteGroup = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}
