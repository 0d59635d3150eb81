use asphera_core::grp::FiniteGroup;
use asphera_core::lattice::{
    conjugation_poset_action, coset_poset, coset_shift_action, order_complex, segment, subgroup_lattice, Bound, Origin, Poset, PosetElement,
};
use asphera_core::topo::{euler_characteristic, homology_group, AbelianGroup};
use proptest::prelude::*;

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..=12).prop_map(|n| FiniteGroup::cyclic(n).unwrap()),
        (2usize..=6).prop_map(|n| FiniteGroup::dihedral(n).unwrap()),
        (1usize..=3, 1usize..=4)
            .prop_map(|(a, b)| FiniteGroup::direct_product(&FiniteGroup::cyclic(a).unwrap(), &FiniteGroup::cyclic(b).unwrap())),
    ]
}

/// Proper cosets as bitmasks, found by closing subsets under `xy⁻¹z`.
fn cosets_brute_force(g: &FiniteGroup) -> Vec<u32> {
    let n = g.order();
    let full = (1u32 << n) - 1;
    (1u32..full)
        .filter(|&mask| {
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            s.iter()
                .all(|&x| s.iter().all(|&y| s.iter().all(|&z| mask >> g.mul(g.mul(x, g.inv(y)), z) & 1 == 1)))
        })
        .collect()
}

fn point() -> Vec<AbelianGroup> {
    vec![AbelianGroup::free(1)]
}

fn homology(p: &Poset) -> Vec<AbelianGroup> {
    let k = order_complex(p);
    let dim = k.dimension().unwrap_or(0);
    let mut h: Vec<AbelianGroup> = (0..=dim).map(|d| homology_group(&k, d).unwrap()).collect();
    while h.len() > 1 && h.last().unwrap().is_zero() {
        h.pop();
    }
    h
}

#[test]
fn cyclic_pq_counts() {
    for (p, q) in [(2usize, 3usize), (2, 5), (3, 5)] {
        let poset = coset_poset(&FiniteGroup::cyclic(p * q).unwrap());
        assert_eq!(poset.len(), p * q + p + q);
        assert_eq!(poset.hasse().len(), 2 * p * q);
    }
}

#[test]
fn segments_use_sentinels() {
    let g = FiniteGroup::cyclic(6).unwrap();
    let p = coset_poset(&g);
    let whole = segment(&p, Bound::Bottom, Bound::Top).unwrap();
    assert_eq!(whole.len(), p.len());
    // the singleton {0} lies below exactly the subgroups {0,3} and {0,2,4}
    let e = p.elements().iter().position(|x| x.origin.members() == Some(&[0][..])).unwrap();
    assert_eq!(segment(&p, Bound::Element(e), Bound::Top).unwrap().len(), 2);
    assert!(segment(&p, Bound::Top, Bound::Bottom).is_err());
    assert_eq!(subgroup_lattice(&g).len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coset_poset_matches_subset_enumeration(g in small_group()) {
        let p = coset_poset(&g);
        let mut masks: Vec<u32> = p
            .elements()
            .iter()
            .map(|e| e.origin.members().unwrap().iter().fold(0, |m, &x| m | 1 << x))
            .collect();
        masks.sort_unstable();
        prop_assert_eq!(masks.clone(), cosets_brute_force(&g));
        for a in 0..p.len() {
            for b in 0..p.len() {
                let sub = masks_of(&p, a) & !masks_of(&p, b) == 0 && a != b;
                prop_assert_eq!(p.lt(a, b), sub);
            }
        }
    }

    #[test]
    fn simplices_are_chains(g in small_group()) {
        let p = coset_poset(&g);
        let k = order_complex(&p);
        let chains = p.chain_counts();
        for (d, &c) in chains.iter().enumerate() {
            prop_assert_eq!(k.count(d), c);
        }
        let alternating: i64 = chains.iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        prop_assert_eq!(euler_characteristic(&k), alternating);
    }

    #[test]
    fn retaining_the_whole_group_gives_a_cone(g in small_group()) {
        let p = coset_poset(&g).with_top("G", Origin::Plain);
        prop_assert_eq!(homology(&p), point());
        let lattice = subgroup_lattice(&g).with_bottom("e", Origin::Plain);
        prop_assert_eq!(homology(&lattice), point());
    }

    #[test]
    fn actions_are_automorphisms(g in small_group()) {
        let p = coset_poset(&g);
        let lattice = subgroup_lattice(&g);
        for (poset, action) in [
            (&p, coset_shift_action(&g, &p).unwrap()),
            (&p, conjugation_poset_action(&g, &p).unwrap()),
            (&lattice, conjugation_poset_action(&g, &lattice).unwrap()),
        ] {
            let a = action.action();
            for x in g.elements() {
                let mut image: Vec<usize> = a.perm(x).to_vec();
                image.sort_unstable();
                prop_assert!(image.iter().enumerate().all(|(i, &y)| i == y));
                for u in 0..poset.len() {
                    for v in 0..poset.len() {
                        prop_assert_eq!(poset.lt(u, v), poset.lt(a.apply(x, u), a.apply(x, v)));
                    }
                }
            }
        }
    }

    #[test]
    fn order_relations_are_transitive_closures(edges in proptest::collection::vec((0usize..7, 0usize..7), 0..12)) {
        let rel: Vec<(usize, usize)> = edges.into_iter().filter(|(a, b)| a < b).collect();
        let elements = (0..7).map(|i| PosetElement { label: i.to_string(), origin: Origin::Plain }).collect();
        let p = Poset::from_relations(elements, &rel).unwrap();
        let mut reach = [[false; 7]; 7];
        for &(a, b) in &rel {
            reach[a][b] = true;
        }
        for k in 0..7 {
            for i in 0..7 {
                for j in 0..7 {
                    reach[i][j] |= reach[i][k] && reach[k][j];
                }
            }
        }
        for i in 0..7 {
            for j in 0..7 {
                prop_assert_eq!(p.lt(i, j), reach[i][j]);
            }
        }
        for &(a, b) in p.hasse() {
            prop_assert!(!(0..7).any(|c| reach[a][c] && reach[c][b]));
        }
    }
}

fn masks_of(p: &Poset, i: usize) -> u32 {
    p.element(i).origin.members().unwrap().iter().fold(0, |m, &x| m | 1 << x)
}
