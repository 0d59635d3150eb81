use asphera_core::borel::{barycentric_subdivision, milnor_join};
use asphera_core::complex::{SimplicialAction, SimplicialComplex};
use asphera_core::grp::FiniteGroup;
use asphera_core::lattice::{coset_poset, order_complex};
use asphera_core::topo::{
    boundary_matrix, chain_complex, coinvariant_complex, components, euler_characteristic, homology, homology_group, is_free_action,
    AbelianGroup, SparseMatrix,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Rank over `F_p` by Gaussian elimination.
fn rank_mod(m: &SparseMatrix, p: i64) -> usize {
    let mut rows: Vec<Vec<i64>> = m
        .to_dense()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| (x % BigInt::from(p)).try_into().unwrap()).collect())
        .collect();
    let cols = m.cols();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c].rem_euclid(p) != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c].rem_euclid(p), p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c].rem_euclid(p) != 0 {
                let f = rows[r][c].rem_euclid(p) * inv % p;
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] - f * rows[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `dim H_k(K; F_p)` from ranks of the boundary maps.
fn betti_mod(k: &SimplicialComplex, d: usize, p: i64) -> usize {
    let out = if d == 0 { 0 } else { rank_mod(&boundary_matrix(k, d), p) };
    let inn = rank_mod(&boundary_matrix(k, d + 1), p);
    k.count(d) - out - inn
}

fn even_torsion(h: &AbelianGroup) -> usize {
    h.torsion().iter().filter(|t| *t % 2u32 == BigInt::from(0)).count()
}

fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
    (4usize..=8)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=4), 1..10),
            )
        })
        .prop_map(|(n, facets)| {
            let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
            SimplicialComplex::from_facets(n, &facets).unwrap()
        })
}

fn rotation(n: usize, k: usize) -> SimplicialAction {
    let c = SimplicialComplex::cycle(n * k).unwrap();
    let perms = (0..n).map(|x| (0..n * k).map(|v| (v + x * k) % (n * k)).collect()).collect();
    SimplicialAction::from_perms(c, FiniteGroup::cyclic(n).unwrap(), perms).unwrap()
}

fn alternating_betti(k: &SimplicialComplex) -> i64 {
    let dim = k.dimension().unwrap_or(0);
    (0..=dim)
        .map(|d| (if d % 2 == 0 { 1 } else { -1 }) * homology_group(k, d).unwrap().free_rank() as i64)
        .sum()
}

#[test]
fn boundary_squares_to_zero_on_constructed_complexes() {
    let mut corpus = vec![SimplicialComplex::point(), SimplicialComplex::cycle(7).unwrap()];
    for g in [
        FiniteGroup::cyclic(6).unwrap(),
        FiniteGroup::dihedral(3).unwrap(),
        FiniteGroup::cyclic(8).unwrap(),
    ] {
        let k = order_complex(&coset_poset(&g));
        corpus.push(barycentric_subdivision(&k));
        corpus.push(k);
        corpus.push(milnor_join(&g, 3).unwrap().complex().clone());
    }
    for k in &corpus {
        let dim = k.dimension().unwrap_or(0);
        for d in 1..dim {
            assert!(boundary_matrix(k, d).mul(&boundary_matrix(k, d + 1)).unwrap().is_zero());
        }
        chain_complex(k).unwrap();
        assert_eq!(euler_characteristic(k), alternating_betti(k));
    }
}

#[test]
fn free_rotations_of_cycles() {
    for n in 1..=6 {
        for k in 1..=6 {
            if n * k < 3 {
                continue;
            }
            let sa = rotation(n, k);
            assert!(is_free_action(&sa).is_free());
            let quotient = coinvariant_complex(&sa).unwrap();
            assert_eq!(euler_characteristic(sa.complex()), n as i64 * quotient.euler_characteristic());
            let rank = homology_group(sa.complex(), 1).unwrap().free_rank() as i64;
            let quotient_rank = quotient.homology_group(1).free_rank() as i64;
            assert_eq!(rank - 1, n as i64 * (quotient_rank - 1));
        }
    }
}

#[test]
fn projective_plane_torsion() {
    // six-vertex triangulation
    let facets = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [1, 3, 5],
        [2, 4, 5],
    ];
    let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
    let k = SimplicialComplex::from_facets(6, &facets).unwrap();
    assert_eq!(homology_group(&k, 1).unwrap(), AbelianGroup::cyclic(2));
    assert!(homology_group(&k, 2).unwrap().is_zero());
    assert_eq!(betti_mod(&k, 2, 2), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn homology_matches_field_ranks(k in random_complex()) {
        let dim = k.dimension().unwrap_or(0);
        let groups: Vec<AbelianGroup> = (0..=dim + 1).map(|d| homology_group(&k, d).unwrap()).collect();
        for d in 0..=dim {
            prop_assert_eq!(groups[d].free_rank(), betti_mod(&k, d, 1_000_003));
            let below = if d == 0 { 0 } else { even_torsion(&groups[d - 1]) };
            prop_assert_eq!(groups[d].free_rank() + even_torsion(&groups[d]) + below, betti_mod(&k, d, 2));
        }
        prop_assert_eq!(groups[0].free_rank(), components(&k));
        prop_assert_eq!(euler_characteristic(&k), alternating_betti(&k));
    }

    #[test]
    fn generators_are_cycles(k in random_complex()) {
        let dim = k.dimension().unwrap_or(0);
        for d in 0..=dim {
            let basis = homology(&k, d).unwrap();
            for (v, _) in basis.generators() {
                prop_assert!(basis.is_cycle(&v));
                prop_assert_eq!(basis.coordinates(&v).unwrap().iter().filter(|c| **c != BigInt::from(0)).count(), 1);
            }
        }
    }
}
