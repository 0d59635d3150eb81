//! Integral homology of simplicial complexes, free-action detection and
//! orbit (coinvariant) chain complexes of free actions.

pub mod chain;
pub mod matrix;
pub mod snf;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use chain::{AbelianGroup, ChainComplex, HomologyBasis};
pub use matrix::{IntMatrix, SparseMatrix};
pub use snf::{smith_normal_form, SnfResult};

use crate::complex::{face_of, permute_simplex, Simplex, SimplicialAction, SimplicialComplex};
use crate::error::{Error, Result};

/// `∂_k` with rows indexed by (k-1)-simplices and columns by k-simplices.
/// Removing vertex `i` of a sorted simplex contributes `(-1)^i`.
pub fn boundary_matrix(k: &SimplicialComplex, dim: usize) -> SparseMatrix {
    if dim == 0 {
        return SparseMatrix::zeros(0, k.count(0));
    }
    let cols = k
        .simplices(dim)
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|i| {
                    let row = k.index_of(&face_of(s, i)).expect("face-closed complex");
                    (row, if i % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect();
    SparseMatrix::from_columns(k.count(dim - 1), cols)
}

pub fn chain_complex(k: &SimplicialComplex) -> Result<ChainComplex> {
    let top = k.dimension().map_or(0, |d| d + 1);
    let ranks: Vec<usize> = (0..top).map(|d| k.count(d)).collect();
    let boundaries = (1..top).map(|d| boundary_matrix(k, d)).collect();
    ChainComplex::new(ranks, boundaries)
}

/// `H_k(K)` with generating cycles (dense reduction).
pub fn homology(k: &SimplicialComplex, dim: usize) -> Result<HomologyBasis> {
    chain_complex(k)?.homology(dim)
}

/// `H_k(K)` as an abelian group (sparse reduction, no generators).
pub fn homology_group(k: &SimplicialComplex, dim: usize) -> Result<AbelianGroup> {
    Ok(chain_complex(k)?.homology_group(dim))
}

pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    k.all_simplices()
        .iter()
        .enumerate()
        .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
        .sum()
}

/// Connected components of the 1-skeleton.
pub fn components(k: &SimplicialComplex) -> usize {
    let n = k.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut count = n;
    for e in k.simplices(1) {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// Matrix of `g` acting on `C_k(K)` (oriented simplices, sign included).
pub fn chain_map(sa: &SimplicialAction, g: usize, dim: usize) -> SparseMatrix {
    let k = sa.complex();
    let cols = (0..k.count(dim))
        .map(|i| {
            let (j, sign) = sa.simplex_image(g, dim, i);
            vec![(j, sign)]
        })
        .collect();
    SparseMatrix::from_columns(k.count(dim), cols)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum FreeVerdict {
    Free,
    NotFree { element: usize, simplex: Simplex },
}

impl FreeVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, FreeVerdict::Free)
    }
}

/// Free on the geometric realization iff no `g ≠ e` maps a simplex onto
/// itself as a set. Reports the first witness in (dimension, simplex,
/// element) order.
pub fn is_free_action(sa: &SimplicialAction) -> FreeVerdict {
    let g = sa.group();
    let e = g.identity();
    for level in sa.complex().all_simplices() {
        for s in level {
            for x in g.elements().filter(|&x| x != e) {
                let (img, _) = permute_simplex(sa.vertex_perm(x), s);
                if &img == s {
                    return FreeVerdict::NotFree {
                        element: x,
                        simplex: s.clone(),
                    };
                }
            }
        }
    }
    FreeVerdict::Free
}

/// Chain complex of orbits of oriented simplices under a free action,
/// `C_*(K) ⊗_{ZG} Z`. Its homology is that of `K/G`.
#[derive(Debug, Clone)]
pub struct OrbitComplex {
    chain: ChainComplex,
    /// Per dimension: orbit index and sign of every simplex of `K`.
    orbit_of: Vec<Vec<(usize, i64)>>,
    /// Per dimension: index in `K` of each orbit's least simplex.
    representatives: Vec<Vec<usize>>,
}

impl OrbitComplex {
    pub fn chain_complex(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn orbit_count(&self, dim: usize) -> usize {
        self.representatives.get(dim).map_or(0, Vec::len)
    }

    pub fn representatives(&self, dim: usize) -> &[usize] {
        self.representatives.get(dim).map_or(&[], Vec::as_slice)
    }

    /// The quotient map `C_k(K) → C_k(K)_G`.
    pub fn projection(&self, dim: usize) -> SparseMatrix {
        let cols = self
            .orbit_of
            .get(dim)
            .map_or(Vec::new(), |o| o.iter().map(|&(orb, sign)| vec![(orb, sign)]).collect());
        SparseMatrix::from_columns(self.orbit_count(dim), cols)
    }

    pub fn homology_group(&self, dim: usize) -> AbelianGroup {
        self.chain.homology_group(dim)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.chain.euler_characteristic()
    }
}

/// Fails with the witness when the action is not free.
pub fn coinvariant_complex(sa: &SimplicialAction) -> Result<OrbitComplex> {
    if let FreeVerdict::NotFree { element, simplex } = is_free_action(sa) {
        return Err(Error::NotFree { element, simplex });
    }
    orbit_complex_unchecked(sa)
}

pub(crate) fn orbit_complex_unchecked(sa: &SimplicialAction) -> Result<OrbitComplex> {
    let k = sa.complex();
    let g = sa.group();
    let top = k.dimension().map_or(0, |d| d + 1);
    let mut orbit_of = Vec::with_capacity(top);
    let mut representatives = Vec::with_capacity(top);
    for dim in 0..top {
        let n = k.count(dim);
        let mut assign: Vec<Option<(usize, i64)>> = vec![None; n];
        let mut reps = Vec::new();
        // Simplices are in lexicographic order, so the first unassigned one
        // is the least element of its orbit.
        for i in 0..n {
            if assign[i].is_some() {
                continue;
            }
            let orb = reps.len();
            reps.push(i);
            for x in g.elements() {
                let (j, sign) = sa.simplex_image(x, dim, i);
                match assign[j] {
                    None => assign[j] = Some((orb, sign)),
                    Some((o, s)) if o == orb && s == sign => {}
                    Some(_) => return Err(Error::Internal(format!("orientation clash on simplex {:?}", k.simplices(dim)[j]))),
                }
            }
        }
        orbit_of.push(assign.into_iter().map(|a| a.unwrap()).collect::<Vec<_>>());
        representatives.push(reps);
    }
    let ranks: Vec<usize> = representatives.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for dim in 1..top {
        let cols = representatives[dim]
            .iter()
            .map(|&i| {
                let s = &k.simplices(dim)[i];
                (0..s.len())
                    .map(|f| {
                        let face = k.index_of(&face_of(s, f)).unwrap();
                        let (orb, sign) = orbit_of[dim - 1][face];
                        (orb, if f % 2 == 0 { sign } else { -sign })
                    })
                    .collect()
            })
            .collect();
        boundaries.push(SparseMatrix::from_columns(ranks[dim - 1], cols));
    }
    Ok(OrbitComplex {
        chain: ChainComplex::new(ranks, boundaries)?,
        orbit_of,
        representatives,
    })
}

/// Induced map `H_k(K) → H_k(K/G)` in the generators of both sides.
pub fn projection_on_homology(sa_quotient: &OrbitComplex, k: &SimplicialComplex, dim: usize) -> Result<IntMatrix> {
    let src = homology(k, dim)?;
    let dst = sa_quotient.chain_complex().homology(dim)?;
    let proj = sa_quotient.projection(dim).to_dense();
    let cols: Result<Vec<Vec<BigInt>>> = src.generators().iter().map(|(v, _)| dst.coordinates(&proj.mul_vec(v))).collect();
    Ok(IntMatrix::from_columns(dst.generators().len(), &cols?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::FiniteGroup;
    use crate::lattice::{coset_poset, coset_shift_action, order_complex, simplicial_action, subgroup_lattice};
    use num_traits::Zero;

    fn rotation(n: usize, k: usize) -> SimplicialAction {
        // Z_n rotating the (k·n)-cycle by k steps per generator
        let c = SimplicialComplex::cycle(k * n).unwrap();
        let g = FiniteGroup::cyclic(n).unwrap();
        let perms = (0..n).map(|x| (0..k * n).map(|v| (v + x * k) % (k * n)).collect()).collect();
        SimplicialAction::from_perms(c, g, perms).unwrap()
    }

    fn hexagon_reflection() -> SimplicialAction {
        let c = SimplicialComplex::cycle(6).unwrap();
        let g = FiniteGroup::cyclic(2).unwrap();
        SimplicialAction::from_perms(c, g, vec![(0..6).collect(), (0..6).map(|v| (6 - v) % 6).collect()]).unwrap()
    }

    fn octahedron() -> SimplicialComplex {
        // join of three copies of S^0: vertices 2i, 2i+1 at level i
        let mut facets = Vec::new();
        for mask in 0..8usize {
            facets.push((0..3).map(|l| 2 * l + (mask >> l & 1)).collect());
        }
        SimplicialComplex::from_facets(6, &facets).unwrap()
    }

    /// Homology by brute force: ranks over Q and torsion from an independent
    /// dense reduction of the full boundary matrix.
    fn brute_betti(k: &SimplicialComplex, d: usize) -> usize {
        let rank = |m: &IntMatrix| snf::invariant_factors(m).len();
        let out = if d == 0 { 0 } else { rank(&boundary_matrix(k, d).to_dense()) };
        let inc = rank(&boundary_matrix(k, d + 1).to_dense());
        k.count(d) - out - inc
    }

    #[test]
    fn triangle_boundary() {
        let k = SimplicialComplex::cycle(3).unwrap();
        let d = boundary_matrix(&k, 1).to_dense();
        assert_eq!((d.rows(), d.cols()), (3, 3));
        for j in 0..3 {
            let col = d.column(j);
            assert_eq!(col.iter().filter(|x| **x == BigInt::from(1)).count(), 1);
            assert_eq!(col.iter().filter(|x| **x == BigInt::from(-1)).count(), 1);
        }
        let d2 = boundary_matrix(&k, 2);
        assert_eq!((d2.rows(), d2.cols()), (3, 0));
    }

    #[test]
    fn gamma6() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let k = order_complex(&coset_poset(&z6));
        let d = boundary_matrix(&k, 1);
        assert_eq!((d.rows(), d.cols()), (11, 12));
        let d2 = boundary_matrix(&k, 2);
        assert_eq!((d2.rows(), d2.cols()), (12, 0));
        assert_eq!(homology_group(&k, 0).unwrap(), AbelianGroup::free(1));
        assert_eq!(homology_group(&k, 1).unwrap(), AbelianGroup::free(2));
        assert_eq!(homology(&k, 1).unwrap().group(), &AbelianGroup::free(2));
        assert_eq!(euler_characteristic(&k), -1);
        assert_eq!(components(&k), 1);
    }

    #[test]
    fn small_examples() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let l = order_complex(&subgroup_lattice(&z6));
        assert_eq!(homology_group(&l, 0).unwrap(), AbelianGroup::free(2));
        let oct = octahedron();
        assert_eq!(homology_group(&oct, 2).unwrap(), AbelianGroup::free(1));
        assert_eq!(homology_group(&oct, 1).unwrap(), AbelianGroup::zero());
        for d in 0..3 {
            assert_eq!(homology_group(&oct, d).unwrap().free_rank(), brute_betti(&oct, d));
        }
        assert_eq!(euler_characteristic(&SimplicialComplex::point()), 1);
        let s3 = order_complex(&coset_poset(&FiniteGroup::dihedral(3).unwrap()));
        assert_eq!(euler_characteristic(&s3), -7);
        assert_eq!(components(&s3), 1);
    }

    #[test]
    fn torsion_in_projective_plane() {
        // 6-vertex RP^2
        let facets = vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 5, 1],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![3, 4, 1],
            vec![4, 5, 2],
            vec![5, 1, 3],
        ];
        let k = SimplicialComplex::from_facets(6, &facets).unwrap();
        assert_eq!(homology_group(&k, 1).unwrap(), AbelianGroup::cyclic(2));
        assert_eq!(homology_group(&k, 2).unwrap(), AbelianGroup::zero());
        let h = homology(&k, 1).unwrap();
        assert_eq!(h.group(), &AbelianGroup::cyclic(2));
        let d1 = boundary_matrix(&k, 1).to_dense();
        for (v, _) in h.generators() {
            assert!(d1.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn generators_are_cycles() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let k = order_complex(&coset_poset(&z6));
        let h = homology(&k, 1).unwrap();
        let d1 = boundary_matrix(&k, 1).to_dense();
        for (v, ord) in h.generators() {
            assert!(ord.is_none());
            assert!(d1.mul_vec(&v).iter().all(Zero::is_zero));
            assert!(h.is_cycle(&v));
        }
        let not_cycle: Vec<BigInt> = (0..12).map(|i| BigInt::from((i == 0) as i64)).collect();
        assert_eq!(h.coordinates(&not_cycle), Err(Error::NotACycle));
    }

    #[test]
    fn freeness_examples() {
        let tri = rotation(3, 1);
        assert!(is_free_action(&tri).is_free());
        match is_free_action(&hexagon_reflection()) {
            FreeVerdict::NotFree { element, simplex } => {
                assert_eq!(element, 1);
                assert_eq!(simplex, vec![0]);
            }
            v => panic!("{v:?}"),
        }
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let sa = simplicial_action(&coset_shift_action(&z6, &coset_poset(&z6)).unwrap()).unwrap();
        match is_free_action(&sa) {
            FreeVerdict::NotFree { element, simplex } => {
                let p = coset_poset(&z6);
                let members = p.element(simplex[0]).origin.members().unwrap().to_vec();
                // first non-singleton vertex fixed by a nontrivial element
                assert_eq!(members, vec![0, 3]);
                assert_eq!(element, 3);
                // and a <2>-coset vertex has stabilizer <2>
                let c = (0..p.len()).find(|&i| p.element(i).origin.members() == Some(&[0, 2, 4])).unwrap();
                assert_eq!(sa.action().stabilizer(c).members(), &[0, 2, 4]);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn quotients() {
        let q = coinvariant_complex(&rotation(3, 1)).unwrap();
        assert_eq!(q.homology_group(0), AbelianGroup::free(1));
        assert_eq!(q.homology_group(1), AbelianGroup::free(1));

        let c = SimplicialComplex::cycle(6).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let anti =
            SimplicialAction::from_perms(c.clone(), z2.clone(), vec![(0..6).collect(), (0..6).map(|v| (v + 3) % 6).collect()]).unwrap();
        let q = coinvariant_complex(&anti).unwrap();
        assert_eq!(q.orbit_count(0), 3);
        assert_eq!(q.homology_group(1), AbelianGroup::free(1));
        let m = projection_on_homology(&q, &c, 1).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m.get(0, 0).magnitude(), &num_bigint::BigUint::from(2u32));

        let triv = SimplicialAction::trivial(c.clone(), FiniteGroup::cyclic(1).unwrap());
        let q = coinvariant_complex(&triv).unwrap();
        assert_eq!(q.chain_complex(), &chain_complex(&c).unwrap());

        assert!(matches!(coinvariant_complex(&hexagon_reflection()), Err(Error::NotFree { .. })));
    }

    #[test]
    fn euler_multiplicativity_and_nielsen_schreier() {
        for n in 1..=6 {
            for k in 1..=6 {
                if k * n < 3 {
                    continue;
                }
                let sa = rotation(n, k);
                let q = coinvariant_complex(&sa).unwrap();
                let chi = euler_characteristic(sa.complex());
                assert_eq!(chi, n as i64 * q.euler_characteristic());
                let r = homology_group(sa.complex(), 1).unwrap().free_rank() as i64;
                let rq = q.homology_group(1).free_rank() as i64;
                assert_eq!(r - 1, n as i64 * (rq - 1));
            }
        }
    }

    #[test]
    fn euler_matches_betti_numbers() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let complexes = vec![
            order_complex(&coset_poset(&z6)),
            order_complex(&coset_poset(&FiniteGroup::cyclic(8).unwrap())),
            octahedron(),
            SimplicialComplex::point(),
        ];
        for k in complexes {
            let top = k.dimension().unwrap();
            let alt: i64 = (0..=top)
                .map(|d| {
                    let b = homology_group(&k, d).unwrap().free_rank() as i64;
                    if d % 2 == 0 {
                        b
                    } else {
                        -b
                    }
                })
                .sum();
            assert_eq!(alt, euler_characteristic(&k));
        }
    }
}
