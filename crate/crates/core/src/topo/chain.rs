//! Finitely generated abelian groups, integer chain complexes and
//! subquotients `cycles / boundaries` with explicit generators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{IntMatrix, SparseMatrix};
use super::snf::{kernel_basis, smith_normal_form, sparse_invariant_factors, LatticeSolver};
use crate::error::{Error, Result};

/// `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with `1 < d_1 | d_2 | … | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// Normalizes arbitrary positive cyclic orders into invariant factors.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let torsion = normalize_chain(torsion).into_iter().filter(|d| !d.is_one()).collect();
        AbelianGroup { free_rank, torsion }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`, with `n = 0` meaning `Z`.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            n => Self::new(0, vec![BigInt::from(n)]),
        }
    }

    pub fn from_torsion(free_rank: usize, torsion: &[u64]) -> Self {
        Self::new(free_rank, torsion.iter().map(|&d| BigInt::from(d)).collect())
    }

    /// Cokernel of a map `Z^m → Z^dim` whose nonzero invariant factors are
    /// given.
    pub fn cokernel(dim: usize, factors: &[BigInt]) -> Self {
        Self::new(dim - factors.len(), factors.to_vec())
    }

    /// Cokernel of a relation matrix with `gens` rows.
    pub fn presented(relations: &IntMatrix) -> Self {
        let f = super::snf::invariant_factors(relations);
        Self::cokernel(relations.rows(), &f)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Minimal number of generators.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        AbelianGroup::new(self.free_rank + other.free_rank, t)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z_{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    free_rank: usize,
    torsion: Vec<serde_json::Value>,
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let torsion = self.torsion.iter().map(bigint_to_json).collect();
        GroupRepr {
            free_rank: self.free_rank,
            torsion,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        let torsion = r
            .torsion
            .iter()
            .map(bigint_from_json)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| serde::de::Error::custom("bad invariant factor"))?;
        Ok(AbelianGroup::new(r.free_rank, torsion))
    }
}

/// JSON number when it fits in `i64`, decimal string otherwise.
pub fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

pub fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// Sorted gcd/lcm normal form of a list of nonzero integers.
pub(crate) fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for x in &mut d {
        *x = x.abs();
    }
    d.retain(|x| !x.is_zero());
    d.sort();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if !d[j].is_multiple_of(&d[i]) {
                let g = d[i].gcd(&d[j]);
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// Free chain complex `… → C_k → C_{k-1} → … → C_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k : C_k → C_{k-1}`.
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Checks shapes and `∂_{k} ∘ ∂_{k+1} = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != ranks.len().max(1) {
            return Err(Error::InvalidChainComplex(format!(
                "{} ranks need {} boundary maps, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            let k = i + 1;
            if d.rows() != ranks[k - 1] || d.cols() != ranks[k] {
                return Err(Error::InvalidChainComplex(format!(
                    "∂_{k} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    ranks[k - 1],
                    ranks[k]
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k])?.is_zero() {
                return Err(Error::InvalidChainComplex(format!("∂_{k} ∘ ∂_{} ≠ 0", k + 1)));
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// Highest degree with a (possibly empty) chain group.
    pub fn top(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    /// `∂_k`; zero maps outside the stored range.
    pub fn boundary(&self, k: usize) -> SparseMatrix {
        if k >= 1 && k <= self.boundaries.len() {
            self.boundaries[k - 1].clone()
        } else {
            SparseMatrix::zeros(if k == 0 { 0 } else { self.rank(k - 1) }, self.rank(k))
        }
    }

    pub fn boundaries(&self) -> &[SparseMatrix] {
        &self.boundaries
    }

    /// `H_k` from invariant factors only: sparse elimination, no generators.
    pub fn homology_group(&self, k: usize) -> AbelianGroup {
        let n = self.rank(k);
        if n == 0 {
            return AbelianGroup::zero();
        }
        let rank_out = if k == 0 {
            0
        } else {
            sparse_invariant_factors(&self.boundary(k)).len()
        };
        let incoming = sparse_invariant_factors(&self.boundary(k + 1));
        AbelianGroup::cokernel(n - rank_out, &incoming)
    }

    /// `H_k` with generating cycles.
    pub fn homology(&self, k: usize) -> Result<HomologyBasis> {
        let out = self.boundary(k).to_dense();
        let empty_next = IntMatrix::zeros(out.rows(), 0);
        let inc = self.boundary(k + 1).to_dense();
        let empty_mid = IntMatrix::zeros(self.rank(k), 0);
        HomologyBasis::compute(&out, &empty_next, &inc, &empty_mid)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

/// A subquotient `Z / B` of a free module `Z^n` together with generators.
///
/// `Z` is `{x : d_out·x ∈ span(rel_next)}` and `B` is spanned by the
/// columns of `d_in` and `rel_mid`. With empty relation matrices this is
/// ordinary homology `ker ∂_k / im ∂_{k+1}`.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    ambient: usize,
    cycles: IntMatrix,
    solver: LatticeSolver,
    p: IntMatrix,
    p_inv: IntMatrix,
    /// Diagonal of the Smith form of boundaries in cycle coordinates,
    /// padded with zeros to the number of cycle generators.
    diag: Vec<BigInt>,
    group: AbelianGroup,
}

impl HomologyBasis {
    pub fn compute(d_out: &IntMatrix, rel_next: &IntMatrix, d_in: &IntMatrix, rel_mid: &IntMatrix) -> Result<Self> {
        let n = d_out.cols();
        if d_in.rows() != n || rel_mid.rows() != n || rel_next.rows() != d_out.rows() {
            return Err(Error::Dimension("subquotient maps do not compose".into()));
        }
        let k = kernel_basis(&d_out.hconcat(&rel_next.neg()));
        let cycles = k.submatrix(0, n, 0, k.cols());
        let solver = LatticeSolver::new(&cycles).ok_or_else(|| Error::Internal("relation matrix is not injective".into()))?;
        let bounds = d_in.hconcat(rel_mid);
        let x = solver
            .solve(&bounds)
            .ok_or_else(|| Error::Internal("boundaries are not cycles".into()))?;
        let snf = smith_normal_form(&x);
        let z = cycles.cols();
        let diag: Vec<BigInt> = (0..z)
            .map(|i| if i < snf.rank { snf.s.get(i, i).clone() } else { BigInt::zero() })
            .collect();
        let torsion = diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        let group = AbelianGroup::new(z - snf.rank, torsion);
        Ok(HomologyBasis {
            ambient: n,
            cycles,
            solver,
            p: snf.u,
            p_inv: snf.u_inv,
            diag,
            group,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Positions in cycle coordinates that carry a generator: free ones
    /// first, then torsion ones in increasing order.
    fn generator_slots(&self) -> Vec<usize> {
        let free = (0..self.diag.len()).filter(|&i| self.diag[i].is_zero());
        let tors = (0..self.diag.len()).filter(|&i| !self.diag[i].is_zero() && !self.diag[i].is_one());
        free.chain(tors).collect()
    }

    /// Generating vectors, free generators first. Each comes with its order
    /// (`None` for infinite order).
    pub fn generators(&self) -> Vec<(Vec<BigInt>, Option<BigInt>)> {
        self.generator_slots()
            .into_iter()
            .map(|i| {
                let c = self.p_inv.column(i);
                let v = self.cycles.mul_vec(&c);
                let ord = (!self.diag[i].is_zero()).then(|| self.diag[i].clone());
                (v, ord)
            })
            .collect()
    }

    pub fn free_generators(&self) -> Vec<Vec<BigInt>> {
        self.generators().into_iter().filter(|(_, o)| o.is_none()).map(|(v, _)| v).collect()
    }

    pub fn torsion_generators(&self) -> Vec<(Vec<BigInt>, BigInt)> {
        self.generators().into_iter().filter_map(|(v, o)| o.map(|o| (v, o))).collect()
    }

    /// Coordinates of a cycle in the generators, torsion coordinates reduced
    /// to `0..order`.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.ambient {
            return Err(Error::Dimension(format!("vector of length {} in rank {}", v.len(), self.ambient)));
        }
        let c = self.solver.solve_vec(v).ok_or(Error::NotACycle)?;
        let y = self.p.mul_vec(&c);
        Ok(self
            .generator_slots()
            .into_iter()
            .map(|i| {
                if self.diag[i].is_zero() {
                    y[i].clone()
                } else {
                    y[i].mod_floor(&self.diag[i])
                }
            })
            .collect())
    }

    /// Whether `v` lies in the cycle lattice.
    pub fn is_cycle(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient && self.solver.solve_vec(v).is_some()
    }

    /// Relation matrix of the generators: zero columns for free generators
    /// are omitted, torsion generators get `order · e_i`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let gens = self.generators();
        let n = gens.len();
        let tors: Vec<(usize, BigInt)> = gens
            .iter()
            .enumerate()
            .filter_map(|(i, (_, o))| o.clone().map(|o| (i, o)))
            .collect();
        let mut r = IntMatrix::zeros(n, tors.len());
        for (j, (i, o)) in tors.into_iter().enumerate() {
            r.set(i, j, o);
        }
        r
    }
}
