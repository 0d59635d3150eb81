use asphera_core::borel::{borel_complex, borel_homology, diagonal_action, milnor_join, staircase_product};
use asphera_core::complex::{SimplicialAction, SimplicialComplex};
use asphera_core::grp::FiniteGroup;
use asphera_core::lattice::{coset_poset, coset_shift_action, simplicial_action};
use asphera_core::topo::{chain_complex, coinvariant_complex, euler_characteristic, homology_group, AbelianGroup};
use asphera_core::Limits;

fn z(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n).unwrap()
}

fn hexagon(perm: impl Fn(usize) -> usize) -> SimplicialAction {
    let c = SimplicialComplex::cycle(6).unwrap();
    SimplicialAction::from_perms(c, z(2), vec![(0..6).collect(), (0..6).map(perm).collect()]).unwrap()
}

fn h1(sa: &SimplicialAction, m: usize) -> AbelianGroup {
    borel_homology(sa, m, 1, &Limits::default()).unwrap().groups[1].clone()
}

#[test]
fn join_connectivity() {
    for n in 1..=6 {
        let groups = if n == 6 {
            vec![z(6), FiniteGroup::dihedral(3).unwrap()]
        } else if n == 4 {
            vec![z(4), FiniteGroup::direct_product(&z(2), &z(2))]
        } else {
            vec![z(n)]
        };
        for g in groups {
            for m in 1..=4 {
                let j = milnor_join(&g, m).unwrap();
                let k = j.complex();
                assert_eq!(k.vertex_count(), n * m);
                assert_eq!(k.dimension(), Some(m - 1));
                assert!(chain_complex(k).is_ok());
                // reduced homology vanishes in degrees 0..=m-2
                if m >= 2 {
                    assert_eq!(homology_group(k, 0).unwrap(), AbelianGroup::free(1));
                }
                for d in 1..m.saturating_sub(1) {
                    assert!(homology_group(k, d).unwrap().is_zero(), "|G|={n} m={m} d={d}");
                }
                assert!(j.action().is_order_compatible());
            }
        }
    }
}

#[test]
fn product_euler_multiplicativity() {
    let l = Limits::default();
    let hex = SimplicialComplex::cycle(6).unwrap();
    let sq = milnor_join(&z(2), 2).unwrap();
    let p = staircase_product(&hex, sq.complex(), None, &l).unwrap();
    assert_eq!(euler_characteristic(&p), 0);
    assert!(chain_complex(&p).is_ok());
    let tri = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
    let j = milnor_join(&z(3), 2).unwrap();
    let p = staircase_product(&tri, j.complex(), None, &l).unwrap();
    assert_eq!(
        euler_characteristic(&p),
        euler_characteristic(&tri) * euler_characteristic(j.complex())
    );
    assert!(chain_complex(&p).is_ok());
    assert_eq!(homology_group(&p, 1).unwrap(), homology_group(j.complex(), 1).unwrap());
}

#[test]
fn diagonal_action_is_free_and_needs_compatible_factors() {
    let l = Limits::default();
    let j = milnor_join(&z(2), 3).unwrap();
    let refl = hexagon(|v| (6 - v) % 6);
    let p = staircase_product(refl.complex(), j.complex(), None, &l).unwrap();
    assert!(diagonal_action(p.clone(), &refl, j.action()).is_err());
    let anti = hexagon(|v| (v + 3) % 6);
    assert!(!anti.is_order_compatible());
    let triv = hexagon(|v| v);
    let d = diagonal_action(p, &triv, j.action()).unwrap();
    assert!(coinvariant_complex(&d).is_ok());
}

#[test]
fn hexagon_trichotomy() {
    let z2 = AbelianGroup::cyclic(2);
    assert_eq!(h1(&hexagon(|v| v), 4), AbelianGroup::from_torsion(1, &[2]));
    assert_eq!(h1(&hexagon(|v| (v + 3) % 6), 4), AbelianGroup::free(1));
    assert_eq!(h1(&hexagon(|v| (6 - v) % 6), 4), z2.direct_sum(&z2));
}

#[test]
fn stability_in_m() {
    let l = Limits::default();
    let point = SimplicialAction::trivial(SimplicialComplex::point(), z(2));
    for m in 2..=5 {
        let a = borel_homology(&point, m, m - 2, &l).unwrap();
        let b = borel_homology(&point, m + 1, m - 2, &l).unwrap();
        assert_eq!(a.groups, b.groups);
    }
    for sa in [hexagon(|v| v), hexagon(|v| (v + 3) % 6), hexagon(|v| (6 - v) % 6)] {
        let a = borel_homology(&sa, 3, 1, &l).unwrap();
        let b = borel_homology(&sa, 4, 1, &l).unwrap();
        assert_eq!(a.groups, b.groups);
    }
}

#[test]
fn free_actions_match_genuine_quotients() {
    let l = Limits::default();
    let anti = hexagon(|v| (v + 3) % 6);
    let q = coinvariant_complex(&anti).unwrap();
    let r = borel_homology(&anti, 4, 2, &l).unwrap();
    for (k, g) in r.groups.iter().enumerate() {
        assert_eq!(g, &q.homology_group(k));
    }
    let c = SimplicialComplex::cycle(9).unwrap();
    let rot = SimplicialAction::from_perms(c, z(3), (0..3).map(|x| (0..9).map(|v| (v + 3 * x) % 9).collect()).collect()).unwrap();
    let q = coinvariant_complex(&rot).unwrap();
    let r = borel_homology(&rot, 3, 1, &l).unwrap();
    assert_eq!(r.groups, vec![q.homology_group(0), q.homology_group(1)]);
}

#[test]
fn dihedral_triangle() {
    let sa = SimplicialAction::dihedral_polygon(3).unwrap();
    let r = borel_homology(&sa, 4, 1, &Limits::default()).unwrap();
    assert!(r.subdivided);
    let z2 = AbelianGroup::cyclic(2);
    assert_eq!(r.groups[1], z2.direct_sum(&z2));
}

#[test]
fn gamma6_low_degrees() {
    let g = z(6);
    let sa = simplicial_action(&coset_shift_action(&g, &coset_poset(&g)).unwrap()).unwrap();
    assert!(sa.is_order_compatible());
    let r = borel_homology(&sa, 3, 1, &Limits::default()).unwrap();
    assert_eq!(r.groups, vec![AbelianGroup::free(1), AbelianGroup::cyclic(6)]);
}

#[test]
fn point_chain_model() {
    let point = SimplicialAction::trivial(SimplicialComplex::point(), z(2));
    let c = borel_complex(&point, 4, &Limits::default()).unwrap();
    // join of four copies of S^0 has C(4, k+1)·2^(k+1) k-simplices
    assert_eq!(c.ranks(), &[4, 12, 16, 8]);
    assert_eq!(c.homology_group(1), AbelianGroup::cyclic(2));
}
