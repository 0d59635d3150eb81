//! Finite posets built from a group: the coset poset and the subgroup
//! lattice, their segments, order complexes and the actions a group induces
//! on them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::{SimplicialAction, SimplicialComplex};
use crate::error::{Error, Result};
use crate::grp::{all_subgroups, left_cosets, Coset, FiniteGroup, GroupAction, Subgroup};

/// Where a poset element came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    Plain,
    Coset(Coset),
    Subgroup(Subgroup),
}

impl Origin {
    /// Underlying element set, when the element is a set of group elements.
    pub fn members(&self) -> Option<&[usize]> {
        match self {
            Origin::Plain => None,
            Origin::Coset(c) => Some(&c.members),
            Origin::Subgroup(h) => Some(h.members()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetElement {
    pub label: String,
    pub origin: Origin,
}

/// A finite strict partial order.
///
/// Stores the covering pairs and, for every element, the sorted list of
/// elements strictly above it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    elements: Vec<PosetElement>,
    hasse: Vec<(usize, usize)>,
    above: Vec<Vec<usize>>,
}

impl Poset {
    /// Builds the order generated by `relations` (pairs `a < b`), rejecting
    /// cycles.
    pub fn from_relations(elements: Vec<PosetElement>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut reach = vec![vec![false; n]; n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("relation ({a}, {b}) out of range")));
            }
            reach[a][b] = true;
        }
        // Floyd–Warshall style transitive closure.
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| reach[i][i]) {
            return Err(Error::InvalidPoset(format!("element {i} lies on a cycle")));
        }
        let above = reach.iter().map(|row| (0..n).filter(|&j| row[j]).collect()).collect();
        Ok(Self::from_closure(elements, above))
    }

    /// `lt(a, b)` must already be a strict order.
    pub fn from_order_fn(elements: Vec<PosetElement>, lt: impl Fn(usize, usize) -> bool) -> Self {
        let n = elements.len();
        let above = (0..n).map(|a| (0..n).filter(|&b| a != b && lt(a, b)).collect()).collect();
        Self::from_closure(elements, above)
    }

    fn from_closure(elements: Vec<PosetElement>, above: Vec<Vec<usize>>) -> Self {
        let n = elements.len();
        let mut hasse = Vec::new();
        for a in 0..n {
            for &b in &above[a] {
                let shortcut = above[a].iter().any(|&c| c != b && above[c].binary_search(&b).is_ok());
                if !shortcut {
                    hasse.push((a, b));
                }
            }
        }
        Poset { elements, hasse, above }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PosetElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PosetElement {
        &self.elements[i]
    }

    /// Covering pairs `(lower, upper)`.
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn above(&self, a: usize) -> &[usize] {
        &self.above[a]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.above[a].binary_search(&b).is_ok()
    }

    /// Induced subposet on `keep` (in the given order).
    pub fn induced(&self, keep: &[usize]) -> Poset {
        let elements = keep.iter().map(|&i| self.elements[i].clone()).collect();
        Poset::from_order_fn(elements, |a, b| self.lt(keep[a], keep[b]))
    }

    /// Adds a new maximum element.
    pub fn with_top(&self, label: &str, origin: Origin) -> Poset {
        let mut elements = self.elements.clone();
        elements.push(PosetElement {
            label: label.to_string(),
            origin,
        });
        let top = self.len();
        Poset::from_order_fn(elements, |a, b| b == top && a != top || a < top && b < top && self.lt(a, b))
    }

    /// Adds a new minimum element at the end of the element list.
    pub fn with_bottom(&self, label: &str, origin: Origin) -> Poset {
        let mut elements = self.elements.clone();
        elements.push(PosetElement {
            label: label.to_string(),
            origin,
        });
        let bot = self.len();
        Poset::from_order_fn(elements, |a, b| a == bot && b != bot || a < bot && b < bot && self.lt(a, b))
    }

    /// Number of chains `x_0 < … < x_k`, indexed by `k`.
    pub fn chain_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        // chains starting at a with exactly len elements, by dynamic programming
        let n = self.len();
        let mut cur: Vec<usize> = vec![1; n];
        while cur.iter().any(|&c| c > 0) {
            counts.push(cur.iter().sum());
            cur = (0..n).map(|a| self.above[a].iter().map(|&b| cur[b]).sum()).collect();
        }
        counts
    }

    /// Hasse diagram in Graphviz DOT.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", e.label.replace('"', "\\\""));
        }
        for &(a, b) in &self.hasse {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }
}

fn set_label(g: &FiniteGroup, members: &[usize]) -> String {
    let names: Vec<&str> = members.iter().map(|&x| g.name(x)).collect();
    format!("{{{}}}", names.join(","))
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Cosets of all proper subgroups (singletons included), ordered by strict
/// inclusion. Elements are sorted by `(size, members)`, which is a linear
/// extension of the order.
pub fn coset_poset(g: &FiniteGroup) -> Poset {
    let mut cosets: Vec<Coset> = Vec::new();
    for h in all_subgroups(g).iter().filter(|h| !h.is_whole()) {
        cosets.extend(left_cosets(g, h).expect("enumerated subgroup"));
    }
    cosets.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
    let elements: Vec<PosetElement> = cosets
        .into_iter()
        .map(|c| PosetElement {
            label: set_label(g, &c.members),
            origin: Origin::Coset(c),
        })
        .collect();
    let sets: Vec<Vec<usize>> = elements.iter().map(|e| e.origin.members().unwrap().to_vec()).collect();
    Poset::from_order_fn(elements, |a, b| sets[a].len() < sets[b].len() && is_subset(&sets[a], &sets[b]))
}

/// Proper nontrivial subgroups under strict inclusion.
pub fn subgroup_lattice(g: &FiniteGroup) -> Poset {
    let subs: Vec<Subgroup> = all_subgroups(g).into_iter().filter(|h| !h.is_whole() && !h.is_trivial()).collect();
    let sets: Vec<Vec<usize>> = subs.iter().map(|h| h.members().to_vec()).collect();
    let elements = subs
        .into_iter()
        .map(|h| PosetElement {
            label: set_label(g, h.members()),
            origin: Origin::Subgroup(h),
        })
        .collect();
    Poset::from_order_fn(elements, |a, b| sets[a].len() < sets[b].len() && is_subset(&sets[a], &sets[b]))
}

/// Endpoint of a segment; the sentinels sit below and above everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Bottom,
    Element(usize),
    Top,
}

/// Elements strictly between `lo` and `hi`.
pub fn segment(p: &Poset, lo: Bound, hi: Bound) -> Result<Poset> {
    let check = |b: Bound| match b {
        Bound::Element(i) if i >= p.len() => Err(Error::InvalidSegment(format!("element {i} out of range"))),
        _ => Ok(()),
    };
    check(lo)?;
    check(hi)?;
    let ordered = match (lo, hi) {
        (Bound::Bottom, Bound::Bottom) | (Bound::Top, _) | (_, Bound::Bottom) => false,
        (Bound::Bottom, _) | (_, Bound::Top) => true,
        (Bound::Element(a), Bound::Element(b)) => p.lt(a, b),
    };
    if !ordered {
        return Err(Error::InvalidSegment(format!("{lo:?} is not below {hi:?}")));
    }
    let keep: Vec<usize> = (0..p.len())
        .filter(|&x| match lo {
            Bound::Element(a) => p.lt(a, x),
            _ => true,
        })
        .filter(|&x| match hi {
            Bound::Element(b) => p.lt(x, b),
            _ => true,
        })
        .collect();
    Ok(p.induced(&keep))
}

/// A group action on the elements of a poset that preserves the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetAction {
    action: GroupAction,
    poset: Poset,
}

impl PosetAction {
    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }
}

/// Checks that every group element maps every covering pair to a strict
/// relation. For a bijection of a finite poset this makes it an automorphism.
pub fn induced_poset_action(a: &GroupAction, p: &Poset) -> Result<PosetAction> {
    if a.ground_size() != p.len() {
        return Err(Error::Dimension(format!(
            "action on {} points, poset has {} elements",
            a.ground_size(),
            p.len()
        )));
    }
    for g in a.group().elements() {
        for &(lo, hi) in p.hasse() {
            if !p.lt(a.apply(g, lo), a.apply(g, hi)) {
                return Err(Error::NotOrderPreserving {
                    element: g,
                    lower: lo,
                    upper: hi,
                });
            }
        }
    }
    Ok(PosetAction {
        action: a.clone(),
        poset: p.clone(),
    })
}

/// Shift action of `g` on its coset poset.
pub fn coset_shift_action(g: &FiniteGroup, p: &Poset) -> Result<PosetAction> {
    let sets = member_sets(p)?;
    induced_poset_action(&crate::grp::shift_action_on_sets(g, &sets)?, p)
}

/// Conjugation action of `g` on a poset of cosets or subgroups.
pub fn conjugation_poset_action(g: &FiniteGroup, p: &Poset) -> Result<PosetAction> {
    let sets = member_sets(p)?;
    induced_poset_action(&crate::grp::conjugation_action_on_sets(g, &sets)?, p)
}

fn member_sets(p: &Poset) -> Result<Vec<Vec<usize>>> {
    p.elements()
        .iter()
        .map(|e| {
            e.origin
                .members()
                .map(<[usize]>::to_vec)
                .ok_or_else(|| Error::InvalidArgument(format!("element `{}` is not a set of group elements", e.label)))
        })
        .collect()
}

/// Chains `x_0 < … < x_k` become k-simplices on the element indices.
pub fn order_complex(p: &Poset) -> SimplicialComplex {
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(p: &Poset, stack: &mut Vec<usize>, levels: &mut Vec<Vec<Vec<usize>>>) {
        let d = stack.len() - 1;
        if levels.len() <= d {
            levels.push(Vec::new());
        }
        let mut s = stack.clone();
        s.sort_unstable();
        levels[d].push(s);
        let last = *stack.last().unwrap();
        for &b in p.above(last) {
            stack.push(b);
            extend(p, stack, levels);
            stack.pop();
        }
    }
    for a in 0..p.len() {
        stack.push(a);
        extend(p, &mut stack, &mut levels);
        stack.pop();
    }
    for level in &mut levels {
        level.sort();
    }
    SimplicialComplex::from_sorted_unchecked(p.len(), levels).expect("chains are face-closed")
}

pub fn simplicial_action(pa: &PosetAction) -> Result<SimplicialAction> {
    SimplicialAction::new(order_complex(&pa.poset), pa.action.clone())
}

/// DOT rendering of the 1-skeleton of a complex.
pub fn complex_to_dot(k: &SimplicialComplex, name: &str) -> String {
    let mut s = format!("graph \"{name}\" {{\n");
    for v in 0..k.vertex_count() {
        let _ = writeln!(s, "  n{v};");
    }
    for e in k.simplices(1) {
        let _ = writeln!(s, "  n{} -- n{};", e[0], e[1]);
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All cosets of proper subgroups, enumerated straight from subsets.
    fn cosets_brute_force(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if s.len() == n {
                continue;
            }
            // s is a left coset iff s0^-1 s is a subgroup
            let h: Vec<usize> = s.iter().map(|&x| g.mul(g.inv(s[0]), x)).collect();
            if Subgroup::new(g, h.iter().copied()).is_ok() {
                out.push(s);
            }
        }
        out
    }

    fn plain(n: usize) -> Vec<PosetElement> {
        (0..n)
            .map(|i| PosetElement {
                label: i.to_string(),
                origin: Origin::Plain,
            })
            .collect()
    }

    #[test]
    fn coset_poset_counts() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let p = coset_poset(&z6);
        assert_eq!(p.len(), 11);
        assert_eq!(p.hasse().len(), 12);

        let z2 = FiniteGroup::cyclic(2).unwrap();
        let p = coset_poset(&z2);
        assert_eq!(p.len(), 2);
        assert!(p.hasse().is_empty());

        let s3 = FiniteGroup::dihedral(3).unwrap();
        let p = coset_poset(&s3);
        let brute = cosets_brute_force(&s3);
        assert_eq!(p.len(), brute.len());
        assert_eq!(p.len(), 17);
        let covers = brute
            .iter()
            .flat_map(|a| brute.iter().map(move |b| (a, b)))
            .filter(|(a, b)| a.len() < b.len() && a.iter().all(|x| b.contains(x)))
            .count();
        assert_eq!(p.hasse().len(), 24);
        // no chains of length 3 in S_3, so every relation is a cover
        assert_eq!(covers, 24);
    }

    #[test]
    fn coset_poset_of_zpq() {
        for (p, q) in [(2usize, 3usize), (2, 5), (3, 5)] {
            let g = FiniteGroup::cyclic(p * q).unwrap();
            let c = coset_poset(&g);
            assert_eq!(c.len(), p * q + p + q);
            assert_eq!(c.hasse().len(), 2 * p * q);
        }
    }

    #[test]
    fn subgroup_lattices() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let l = subgroup_lattice(&z6);
        assert_eq!(l.len(), 2);
        assert!(l.hasse().is_empty());
        let d6 = FiniteGroup::dihedral(3).unwrap();
        let l = subgroup_lattice(&d6);
        assert_eq!(l.len(), 4);
        assert!(l.hasse().is_empty());
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let l = subgroup_lattice(&z4);
        assert_eq!(l.len(), 1);
        assert_eq!(l.element(0).origin.members(), Some(&[0, 2][..]));
    }

    #[test]
    fn segments() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let p = coset_poset(&z6);
        let e = p.elements().iter().position(|x| x.origin.members() == Some(&[0])).unwrap();
        let above_e = segment(&p, Bound::Element(e), Bound::Top).unwrap();
        // direct filter oracle
        let expected: Vec<&PosetElement> = p
            .elements()
            .iter()
            .filter(|x| {
                let m = x.origin.members().unwrap();
                m.len() > 1 && m.contains(&0)
            })
            .collect();
        assert_eq!(above_e.len(), expected.len());
        // {0,3}, {0,2,4}
        assert_eq!(above_e.len(), 2);

        let (lo, hi) = p.hasse()[0];
        assert!(segment(&p, Bound::Element(lo), Bound::Element(hi)).unwrap().is_empty());
        assert!(segment(&p, Bound::Element(hi), Bound::Element(lo)).is_err());
        assert!(segment(&p, Bound::Top, Bound::Bottom).is_err());
        assert_eq!(segment(&p, Bound::Bottom, Bound::Top).unwrap().len(), 11);
    }

    #[test]
    fn translated_segments_are_isomorphic() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let p = coset_poset(&g)
            .with_bottom("∅", Origin::Plain)
            .with_top("G", Origin::Subgroup(g.whole()));
        let set = |i: usize| p.element(i).origin.members().map(<[usize]>::to_vec);
        let index_of = |s: &[usize]| (0..p.len()).find(|&i| set(i).as_deref() == Some(s));
        let mut checked = 0;
        for a in 0..p.len() {
            for b in 0..p.len() {
                let (Some(sa), Some(sb)) = (set(a), set(b)) else { continue };
                if !p.lt(a, b) {
                    continue;
                }
                // translate by the inverse of the representative of the lower coset
                let Origin::Coset(c) = &p.element(a).origin else { continue };
                let t = g.inv(c.representative);
                let shift = |s: &[usize]| {
                    let mut v: Vec<usize> = s.iter().map(|&x| g.mul(t, x)).collect();
                    v.sort_unstable();
                    v
                };
                let (ha, hb) = (index_of(&shift(&sa)).unwrap(), index_of(&shift(&sb)).unwrap());
                let s1 = segment(&p, Bound::Element(a), Bound::Element(b)).unwrap();
                let s2 = segment(&p, Bound::Element(ha), Bound::Element(hb)).unwrap();
                assert_eq!(s1.len(), s2.len());
                let pos: Vec<usize> = (0..s1.len())
                    .map(|i| {
                        let img = shift(s1.element(i).origin.members().unwrap());
                        (0..s2.len()).find(|&j| s2.element(j).origin.members() == Some(&img[..])).unwrap()
                    })
                    .collect();
                for x in 0..s1.len() {
                    for y in 0..s1.len() {
                        assert_eq!(s1.lt(x, y), s2.lt(pos[x], pos[y]));
                    }
                }
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn shift_action_is_order_preserving() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let p = coset_poset(&z6);
        let pa = coset_shift_action(&z6, &p).unwrap();
        // inclusion is shift-equivariant, checked on every pair
        for g in z6.elements() {
            for a in 0..p.len() {
                for b in 0..p.len() {
                    assert_eq!(p.lt(a, b), p.lt(pa.action().apply(g, a), pa.action().apply(g, b)));
                }
            }
        }
        let sa = simplicial_action(&pa).unwrap();
        assert_eq!(sa.complex().vertex_count(), 11);
        assert!(sa.is_order_compatible());
    }

    #[test]
    fn conjugation_on_subgroup_lattice() {
        let d6 = FiniteGroup::dihedral(3).unwrap();
        let l = subgroup_lattice(&d6);
        let pa = conjugation_poset_action(&d6, &l).unwrap();
        let r = 1;
        let p = pa.action().perm(r);
        let z2s: Vec<usize> = (0..l.len())
            .filter(|&i| l.element(i).origin.members().unwrap().len() == 2)
            .collect();
        assert!(z2s.iter().all(|&i| p[i] != i && z2s.contains(&p[i])));
        let sa = simplicial_action(&pa).unwrap();
        assert_eq!(sa.complex().vertex_count(), 4);
        assert_eq!(sa.complex().dimension(), Some(0));
    }

    #[test]
    fn non_order_preserving_rejected() {
        let p = Poset::from_relations(plain(3), &[(0, 1)]).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let a = GroupAction::new(z2.clone(), vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        let err = induced_poset_action(&a, &p).unwrap_err();
        assert_eq!(
            err,
            Error::NotOrderPreserving {
                element: 1,
                lower: 0,
                upper: 1
            }
        );
        let t = GroupAction::trivial(z2, 3);
        assert!(induced_poset_action(&t, &p).is_ok());
    }

    #[test]
    fn order_complexes() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let k = order_complex(&coset_poset(&z6));
        assert_eq!((k.count(0), k.count(1), k.count(2)), (11, 12, 0));
        let k = order_complex(&subgroup_lattice(&z6));
        assert_eq!((k.count(0), k.count(1)), (2, 0));
        let chain = Poset::from_relations(plain(3), &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain.hasse(), &[(0, 1), (1, 2)]);
        let k = order_complex(&chain);
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 3, 1));
    }

    #[test]
    fn chain_counts_match_simplex_counts() {
        for g in [FiniteGroup::cyclic(8).unwrap(), FiniteGroup::dihedral(4).unwrap()] {
            let p = coset_poset(&g);
            let k = order_complex(&p);
            let counts = p.chain_counts();
            for (d, c) in counts.iter().enumerate() {
                assert_eq!(k.count(d), *c);
            }
        }
    }

    #[test]
    fn cycle_detection() {
        assert!(Poset::from_relations(plain(2), &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn dot_output() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let dot = coset_poset(&z6).to_dot("C Z6");
        assert_eq!(dot.matches("->").count(), 12);
        assert_eq!(dot.matches("label=").count(), 11);
    }
}
