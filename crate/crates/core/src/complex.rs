//! Abstract simplicial complexes with sorted vertex tuples, and simplicial
//! group actions on them.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grp::{FiniteGroup, GroupAction};

pub type Simplex = Vec<usize>;

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
}

/// `simplices[k]` holds the k-simplices as strictly increasing vertex
/// tuples, in lexicographic order. Closed under faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComplexRepr", into = "ComplexRepr")]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
    #[serde(skip)]
    index: Vec<HashMap<Simplex, usize>>,
}

impl TryFrom<ComplexRepr> for SimplicialComplex {
    type Error = Error;
    fn try_from(r: ComplexRepr) -> Result<Self> {
        SimplicialComplex::new(r.vertex_count, r.simplices)
    }
}

impl From<SimplicialComplex> for ComplexRepr {
    fn from(k: SimplicialComplex) -> Self {
        ComplexRepr {
            vertex_count: k.vertex_count,
            simplices: k.simplices,
        }
    }
}

fn build_index(simplices: &[Vec<Simplex>]) -> Vec<HashMap<Simplex, usize>> {
    simplices
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect()
}

impl SimplicialComplex {
    /// Validates an explicit simplex list. Each dimension is re-sorted.
    pub fn new(vertex_count: usize, mut simplices: Vec<Vec<Simplex>>) -> Result<Self> {
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        for (k, level) in simplices.iter_mut().enumerate() {
            for s in level.iter() {
                if s.len() != k + 1 {
                    return Err(Error::InvalidComplex(format!("{s:?} listed in dimension {k}")));
                }
                if s.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidComplex(format!("{s:?} is not strictly increasing")));
                }
                if s.iter().any(|&v| v >= vertex_count) {
                    return Err(Error::InvalidComplex(format!("{s:?} uses a vertex >= {vertex_count}")));
                }
            }
            level.sort();
            if level.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("duplicate simplex in dimension {k}")));
            }
        }
        if let Some(v) = simplices.first() {
            if v.len() != vertex_count {
                return Err(Error::InvalidComplex(format!(
                    "{} vertices listed, vertex count is {vertex_count}",
                    v.len()
                )));
            }
        } else if vertex_count > 0 {
            return Err(Error::InvalidComplex("vertices missing".into()));
        }
        let index = build_index(&simplices);
        for k in 1..simplices.len() {
            for s in &simplices[k] {
                for i in 0..s.len() {
                    let face = face_of(s, i);
                    if !index[k - 1].contains_key(&face) {
                        return Err(Error::InvalidComplex(format!("face {face:?} of {s:?} missing")));
                    }
                }
            }
        }
        Ok(SimplicialComplex {
            vertex_count,
            simplices,
            index,
        })
    }

    /// Downward closure of a list of simplices (vertex order inside each
    /// facet is irrelevant).
    pub fn from_facets(vertex_count: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let mut levels: Vec<BTreeSet<Simplex>> = Vec::new();
        levels.push((0..vertex_count).map(|v| vec![v]).collect());
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v >= vertex_count) {
                return Err(Error::InvalidComplex(format!("{f:?} uses a vertex >= {vertex_count}")));
            }
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let s: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let d = s.len() - 1;
                while levels.len() <= d {
                    levels.push(BTreeSet::new());
                }
                levels[d].insert(s);
            }
        }
        let simplices: Vec<Vec<Simplex>> = levels.into_iter().map(|l| l.into_iter().collect()).collect();
        Self::from_sorted_unchecked(vertex_count, simplices)
    }

    /// For generators that already produce face-closed, sorted data.
    pub(crate) fn from_sorted_unchecked(vertex_count: usize, mut simplices: Vec<Vec<Simplex>>) -> Result<Self> {
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        let index = build_index(&simplices);
        Ok(SimplicialComplex {
            vertex_count,
            simplices,
            index,
        })
    }

    pub fn point() -> Self {
        Self::from_facets(1, &[]).unwrap()
    }

    /// The cycle graph on `n ≥ 3` vertices `0 – 1 – … – (n-1) – 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("a simplicial cycle needs at least 3 vertices".into()));
        }
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::from_facets(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn all_simplices(&self) -> &[Vec<Simplex>] {
        &self.simplices
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }
}

pub(crate) fn face_of(s: &[usize], i: usize) -> Simplex {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

/// Image of a simplex under a vertex map, re-sorted, with the sign of the
/// sorting permutation.
pub fn permute_simplex(perm: &[usize], s: &[usize]) -> (Simplex, i64) {
    let mut img: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
    let mut sign = 1;
    // insertion sort counting transpositions
    for i in 1..img.len() {
        let mut j = i;
        while j > 0 && img[j - 1] > img[j] {
            img.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (img, sign)
}

/// A group action on the vertices of a complex that sends simplices to
/// simplices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialAction {
    complex: SimplicialComplex,
    action: GroupAction,
}

impl SimplicialAction {
    pub fn new(complex: SimplicialComplex, action: GroupAction) -> Result<Self> {
        if action.ground_size() != complex.vertex_count() {
            return Err(Error::Dimension(format!(
                "action on {} points, complex has {} vertices",
                action.ground_size(),
                complex.vertex_count()
            )));
        }
        for g in action.group().elements() {
            let p = action.perm(g);
            for level in complex.all_simplices().iter().skip(1) {
                for s in level {
                    let (img, _) = permute_simplex(p, s);
                    if img.windows(2).any(|w| w[0] == w[1]) || !complex.contains(&img) {
                        return Err(Error::NotSimplicial {
                            element: g,
                            simplex: s.clone(),
                        });
                    }
                }
            }
        }
        Ok(SimplicialAction { complex, action })
    }

    pub fn trivial(complex: SimplicialComplex, group: FiniteGroup) -> Self {
        let action = GroupAction::trivial(group, complex.vertex_count());
        SimplicialAction { complex, action }
    }

    pub fn from_perms(complex: SimplicialComplex, group: FiniteGroup, perms: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(complex, GroupAction::new(group, perms)?)
    }

    /// The dihedral group of order `2n` permuting the vertices of the
    /// `n`-cycle: `r^i` rotates by `i`, `s·r^i` sends `v` to `−v − i`.
    pub fn dihedral_polygon(n: usize) -> Result<Self> {
        let g = FiniteGroup::dihedral(n)?;
        let perms = g
            .elements()
            .map(|x| {
                (0..n)
                    .map(|v| if x < n { (v + x) % n } else { (2 * n - v - (x - n)) % n })
                    .collect()
            })
            .collect();
        Self::from_perms(SimplicialComplex::cycle(n)?, g, perms)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn vertex_perm(&self, g: usize) -> &[usize] {
        self.action.perm(g)
    }

    /// Image of the k-simplex with index `i` under `g`: `(index, sign)`.
    pub fn simplex_image(&self, g: usize, k: usize, i: usize) -> (usize, i64) {
        let (img, sign) = permute_simplex(self.action.perm(g), &self.complex.simplices(k)[i]);
        (self.complex.index_of(&img).expect("simplicial action"), sign)
    }

    /// Whether every group element preserves the vertex order on every
    /// simplex. Such actions keep ordered product triangulations invariant.
    pub fn is_order_compatible(&self) -> bool {
        self.action
            .perms()
            .iter()
            .all(|p| self.complex.simplices(1).iter().all(|e| p[e[0]] < p[e[1]]))
    }

    pub fn restrict(&self, h: &crate::grp::Subgroup) -> SimplicialAction {
        SimplicialAction {
            complex: self.complex.clone(),
            action: self.action.restrict(h),
        }
    }
}
