//! Modules over finite groups, group (co)homology and second-cohomology
//! classes.
//!
//! A module is `Z^n / R` with `R` of full column rank. Each `A_g` preserves
//! the lattice spanned by `R`, and `X_g` is the unique matrix with
//! `A_g · R = R · X_g`. Chain groups of a resolution tensored with the module
//! are then presented by a free cover and a relation complex built from the
//! same formulas with `A` replaced by `X`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialAction;
use crate::error::{Error, Limits, Result};
use crate::grp::{all_subgroups, FiniteGroup};
use crate::topo::chain::{bigint_to_json, AbelianGroup, HomologyBasis};
use crate::topo::matrix::{IntMatrix, SparseMatrix};
use crate::topo::snf::{smith_normal_form, sparse_invariant_factors, sparse_rank, LatticeSolver};
use crate::topo::{boundary_matrix, chain_map, homology};

#[derive(Debug, Clone)]
pub struct GModule {
    group: FiniteGroup,
    n: usize,
    relations: IntMatrix,
    solver: LatticeSolver,
    action: Vec<IntMatrix>,
    rel_action: Vec<IntMatrix>,
    action_i64: Vec<Vec<Vec<i64>>>,
    rel_action_i64: Vec<Vec<Vec<i64>>>,
    relations_i64: Vec<Vec<i64>>,
    exact: bool,
}

/// Validates a module `Z^n / span(relations)` with `action[g]` the matrix of `g`.
///
/// Dependent relation columns are replaced by a basis of their span.
pub fn make_gmodule(group: FiniteGroup, n: usize, relations: IntMatrix, action: Vec<IntMatrix>) -> Result<GModule> {
    if relations.rows() != n {
        return Err(Error::Dimension(format!(
            "relation matrix has {} rows, expected {n}",
            relations.rows()
        )));
    }
    if action.len() != group.order() {
        return Err(Error::Dimension(format!(
            "{} action matrices for a group of order {}",
            action.len(),
            group.order()
        )));
    }
    if let Some(g) = action.iter().position(|a| a.rows() != n || a.cols() != n) {
        return Err(Error::Dimension(format!("action matrix of element {g} is not {n}x{n}")));
    }
    let relations = independent_columns(&relations);
    let solver = LatticeSolver::new(&relations).ok_or_else(|| Error::Internal("relation basis is dependent".into()))?;
    let mut rel_action = Vec::with_capacity(action.len());
    for (g, a) in action.iter().enumerate() {
        let x = solver.solve(&a.mul(&relations)).ok_or(Error::LatticeNotPreserved(g))?;
        rel_action.push(x);
    }
    let e = group.identity();
    let id = IntMatrix::identity(n);
    if solver.solve(&action[e].sub(&id)).is_none() {
        return Err(Error::HomomorphismLaw(e, e));
    }
    let mut exact = action[e] == id;
    for g in group.elements() {
        for h in group.elements() {
            let diff = action[g].mul(&action[h]).sub(&action[group.mul(g, h)]);
            if !diff.is_zero() {
                exact = false;
                if solver.solve(&diff).is_none() {
                    return Err(Error::HomomorphismLaw(g, h));
                }
            }
        }
    }
    let wide = |m: &IntMatrix| {
        m.to_i64_rows()
            .map_err(|_| Error::InvalidArgument("module matrix entries exceed the 64-bit range".into()))
    };
    let action_i64 = action.iter().map(wide).collect::<Result<Vec<_>>>()?;
    let rel_action_i64 = rel_action.iter().map(wide).collect::<Result<Vec<_>>>()?;
    let relations_i64 = wide(&relations)?;
    Ok(GModule {
        group,
        n,
        relations,
        solver,
        action,
        rel_action,
        action_i64,
        rel_action_i64,
        relations_i64,
        exact,
    })
}

/// Basis of the column lattice of `r`.
fn independent_columns(r: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(r);
    if snf.rank == r.cols() {
        return r.clone();
    }
    let cols: Vec<Vec<BigInt>> = (0..snf.rank)
        .map(|i| snf.u_inv.column(i).into_iter().map(|x| x * snf.s.get(i, i)).collect())
        .collect();
    IntMatrix::from_columns(r.rows(), &cols)
}

impl GModule {
    /// `Z_m` with trivial action; `m = 0` gives `Z`.
    pub fn trivial(group: &FiniteGroup, m: u64) -> GModule {
        let rel = if m == 0 {
            IntMatrix::zeros(1, 0)
        } else {
            IntMatrix::from_rows(&[vec![m]])
        };
        let action = vec![IntMatrix::identity(1); group.order()];
        make_gmodule(group.clone(), 1, rel, action).expect("trivial module is valid")
    }

    /// `Z` twisted by a character `G → {±1}`.
    pub fn character(group: &FiniteGroup, signs: &[i64]) -> Result<GModule> {
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidArgument("character values must be ±1".into()));
        }
        let action = signs.iter().map(|&s| IntMatrix::from_rows(&[vec![s]])).collect();
        make_gmodule(group.clone(), 1, IntMatrix::zeros(1, 0), action)
    }

    /// Sign module: `Z` on which the unique index-2 subgroup acts trivially
    /// and its complement by `−1`.
    pub fn sign(group: &FiniteGroup) -> Result<GModule> {
        let halves: Vec<_> = all_subgroups(group).into_iter().filter(|h| h.index() == 2).collect();
        match halves.as_slice() {
            [h] => {
                let signs: Vec<i64> = group.elements().map(|g| if h.contains(g) { 1 } else { -1 }).collect();
                GModule::character(group, &signs)
            }
            [] => Err(Error::InvalidArgument("group has no subgroup of index 2".into())),
            _ => Err(Error::InvalidArgument("group has several subgroups of index 2".into())),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn generator_count(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn relation_count(&self) -> usize {
        self.relations.cols()
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    /// `X_g` with `A_g · R = R · X_g`.
    pub fn relation_action(&self, g: usize) -> &IntMatrix {
        &self.rel_action[g]
    }

    /// Whether `A_g A_h = A_{gh}` and `A_e = I` hold on the nose, not only
    /// modulo relations.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Underlying abelian group.
    pub fn abelian_group(&self) -> AbelianGroup {
        AbelianGroup::presented(&self.relations)
    }

    /// Whether `v` represents zero in the module.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        v.len() == self.n && self.solver.solve_vec(v).is_some()
    }

    pub fn act(&self, g: usize, v: &[BigInt]) -> Vec<BigInt> {
        self.action[g].mul_vec(v)
    }

    /// Checks `g·c(h,k) − c(gh,k) + c(g,hk) − c(g,h) ≡ 0` for all triples.
    /// `table[g][h]` is the value `c(g,h)`.
    pub fn is_cocycle(&self, table: &[Vec<Vec<BigInt>>]) -> bool {
        let g_ = &self.group;
        let ord = g_.order();
        if table.len() != ord || table.iter().any(|row| row.len() != ord || row.iter().any(|v| v.len() != self.n)) {
            return false;
        }
        g_.elements().all(|g| {
            g_.elements().all(|h| {
                g_.elements().all(|k| {
                    let mut v = self.act(g, &table[h][k]);
                    for (i, x) in v.iter_mut().enumerate() {
                        *x -= &table[g_.mul(g, h)][k][i];
                        *x += &table[g][g_.mul(h, k)][i];
                        *x -= &table[g][h][i];
                    }
                    self.is_zero_element(&v)
                })
            })
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GModuleRepr {
    group: FiniteGroup,
    generators: usize,
    /// Relation vectors, each of length `generators`.
    relations: Vec<Vec<i64>>,
    /// One row-major matrix per group element.
    action: Vec<Vec<Vec<i64>>>,
}

impl Serialize for GModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let relations = (0..self.relations.cols())
            .map(|j| (0..self.n).map(|i| self.relations_i64[i][j]).collect())
            .collect();
        GModuleRepr {
            group: self.group.clone(),
            generators: self.n,
            relations,
            action: self.action_i64.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GModuleRepr::deserialize(d)?;
        let n = r.generators;
        if r.relations.iter().any(|c| c.len() != n) {
            return Err(serde::de::Error::custom("relation vector of wrong length"));
        }
        let cols: Vec<Vec<BigInt>> = r.relations.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let rel = IntMatrix::from_columns(n, &cols);
        let action = r
            .action
            .iter()
            .map(|m| {
                if m.len() != n || m.iter().any(|row| row.len() != n) {
                    Err(serde::de::Error::custom("action matrix of wrong size"))
                } else if n == 0 {
                    Ok(IntMatrix::zeros(0, 0))
                } else {
                    Ok(IntMatrix::from_rows(m))
                }
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        make_gmodule(r.group, n, rel, action).map_err(serde::de::Error::custom)
    }
}

/// `H_k(K)` as a module, in the generators of `topo::homology`.
pub fn homology_gmodule(sa: &SimplicialAction, k: usize) -> Result<GModule> {
    Ok(homology_gmodule_with_basis(sa, k)?.0)
}

pub fn homology_gmodule_with_basis(sa: &SimplicialAction, k: usize) -> Result<(GModule, HomologyBasis)> {
    let basis = homology(sa.complex(), k)?;
    induced_module(sa, basis, |g| chain_map(sa, g, k).to_dense())
}

/// `H^k(K)` as a module; `g` acts on cochains by `f ↦ f ∘ g⁻¹`.
pub fn cohomology_gmodule(sa: &SimplicialAction, k: usize) -> Result<GModule> {
    Ok(cohomology_gmodule_with_basis(sa, k)?.0)
}

pub fn cohomology_gmodule_with_basis(sa: &SimplicialAction, k: usize) -> Result<(GModule, HomologyBasis)> {
    let cx = sa.complex();
    let d_out = boundary_matrix(cx, k + 1).transpose().to_dense();
    let d_in = if k == 0 {
        IntMatrix::zeros(cx.count(0), 0)
    } else {
        boundary_matrix(cx, k).transpose().to_dense()
    };
    let basis = HomologyBasis::compute(&d_out, &IntMatrix::zeros(d_out.rows(), 0), &d_in, &IntMatrix::zeros(cx.count(k), 0))?;
    induced_module(sa, basis, |g| chain_map(sa, sa.group().inv(g), k).transpose().to_dense())
}

fn induced_module(sa: &SimplicialAction, basis: HomologyBasis, matrix_of: impl Fn(usize) -> IntMatrix) -> Result<(GModule, HomologyBasis)> {
    let gens = basis.generators();
    let n = gens.len();
    let mut action = Vec::with_capacity(sa.group().order());
    for g in sa.group().elements() {
        let c = matrix_of(g);
        let cols = gens
            .iter()
            .map(|(v, _)| basis.coordinates(&c.mul_vec(v)))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Internal(format!("induced map does not preserve cycles: {e}")))?;
        action.push(IntMatrix::from_columns(n, &cols));
    }
    let m = make_gmodule(sa.group().clone(), n, basis.relation_matrix(), action)?;
    Ok((m, basis))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Homology,
    Cohomology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    /// Periodic for cyclic groups, bar otherwise.
    Auto,
    /// Normalized bar resolution.
    Bar,
    /// Period-2 resolution of a cyclic group.
    Periodic,
}

/// How the homology of a presented complex is reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Mapping cone when the action is exact, dense otherwise.
    Auto,
    /// Sparse elimination on the mapping cone of relations → free cover.
    /// Requires an exact action.
    Cone,
    /// Dense subquotient computation. Valid for every module.
    Dense,
}

pub fn group_homology(m: &GModule, k: usize, limits: &Limits) -> Result<AbelianGroup> {
    compute(m, k, Kind::Homology, Resolution::Bar, Route::Auto, limits)
}

pub fn group_cohomology(m: &GModule, k: usize, limits: &Limits) -> Result<AbelianGroup> {
    compute(m, k, Kind::Cohomology, Resolution::Bar, Route::Auto, limits)
}

pub fn cyclic_group_homology(m: &GModule, k: usize) -> Result<AbelianGroup> {
    compute(m, k, Kind::Homology, Resolution::Periodic, Route::Auto, &Limits::default())
}

pub fn cyclic_group_cohomology(m: &GModule, k: usize) -> Result<AbelianGroup> {
    compute(m, k, Kind::Cohomology, Resolution::Periodic, Route::Auto, &Limits::default())
}

/// `H_k(G; M)` or `H^k(G; M)`.
pub fn compute(m: &GModule, k: usize, kind: Kind, res: Resolution, route: Route, limits: &Limits) -> Result<AbelianGroup> {
    let window = build_window(m, k, kind, res, limits)?;
    let route = match route {
        Route::Auto if m.exact => Route::Cone,
        Route::Auto => Route::Dense,
        r => r,
    };
    match route {
        Route::Cone if !m.exact => Err(Error::InvalidArgument(
            "cone route needs an action satisfying the homomorphism law exactly".into(),
        )),
        Route::Cone => window.cone_group(),
        _ => Ok(window.dense_basis()?.group().clone()),
    }
}

/// The resolution `Auto` resolves to for this group.
pub fn resolved(group: &FiniteGroup, res: Resolution) -> Resolution {
    match res {
        Resolution::Auto if group.cyclic_generator().is_some() => Resolution::Periodic,
        Resolution::Auto => Resolution::Bar,
        r => r,
    }
}

fn build_window(m: &GModule, k: usize, kind: Kind, res: Resolution, limits: &Limits) -> Result<Window> {
    let step = if kind == Kind::Homology { -1 } else { 1 };
    match resolved(&m.group, res) {
        Resolution::Periodic => {
            let model = PeriodicModel::new(m, kind)?;
            Ok(window(&model, k as i64, step))
        }
        _ => {
            let model = BarModel::new(m, kind);
            let k = k as i64;
            for j in [k - step, k, k + step, k + 2 * step].into_iter().filter(|&j| j >= 0) {
                let (f, r) = model.sizes(j)?;
                limits.check("bar resolution chain-group rank", f.max(r), limits.max_rank)?;
            }
            Ok(window(&model, k, step))
        }
    }
}

/// Three consecutive degrees of a presented complex: free covers `F`,
/// relation complexes `Rel`, and the inclusions `R : Rel → F`.
/// `mid` is flanked by `prev` (source of `d_in`) and `next` (target of `d_out`).
struct Window {
    d_in: SparseMatrix,
    d_out: SparseMatrix,
    r_mid: SparseMatrix,
    r_next: SparseMatrix,
    e_mid: SparseMatrix,
    e_next: SparseMatrix,
}

impl Window {
    /// Homology of the cone of `R`, which is quasi-isomorphic to the
    /// cokernel complex because `R` is injective in every degree.
    fn cone_group(&self) -> Result<AbelianGroup> {
        let zero_in = SparseMatrix::zeros(self.e_mid.rows(), self.d_in.cols());
        let zero_out = SparseMatrix::zeros(self.e_next.rows(), self.d_out.cols());
        let inn = SparseMatrix::block(&self.d_in, &self.r_mid, &zero_in, &self.e_mid.neg());
        let out = SparseMatrix::block(&self.d_out, &self.r_next, &zero_out, &self.e_next.neg());
        if !out.mul(&inn)?.is_zero() {
            return Err(Error::Internal("cone differential does not square to zero".into()));
        }
        let rank_out = sparse_rank(&out);
        Ok(AbelianGroup::cokernel(inn.rows() - rank_out, &sparse_invariant_factors(&inn)))
    }

    fn dense_basis(&self) -> Result<HomologyBasis> {
        HomologyBasis::compute(
            &self.d_out.to_dense(),
            &self.r_next.to_dense(),
            &self.d_in.to_dense(),
            &self.r_mid.to_dense(),
        )
    }
}

/// A resolution tensored with (or mapped into) a presented module.
trait Presented {
    /// Ranks of the free cover and of the relation module in degree `j ≥ 0`.
    fn sizes(&self, j: i64) -> Result<(usize, usize)>;
    /// Differential out of degree `j`, on the free cover or on relations.
    fn raw_map(&self, j: i64, on_relations: bool) -> SparseMatrix;
    fn relation_block(&self, j: i64) -> SparseMatrix;
}

fn window(p: &dyn Presented, k: i64, step: i64) -> Window {
    let size = |j: i64, rel: bool| -> usize {
        if j < 0 {
            0
        } else {
            let (f, r) = p.sizes(j).expect("sizes checked by caller");
            if rel {
                r
            } else {
                f
            }
        }
    };
    let map = |j: i64, rel: bool| -> SparseMatrix {
        if j < 0 || j + step < 0 {
            SparseMatrix::zeros(size(j + step, rel), size(j, rel))
        } else {
            p.raw_map(j, rel)
        }
    };
    let rel_block = |j: i64| -> SparseMatrix {
        if j < 0 {
            SparseMatrix::zeros(0, 0)
        } else {
            p.relation_block(j)
        }
    };
    let (prev, next) = (k - step, k + step);
    Window {
        d_in: map(prev, false),
        d_out: map(k, false),
        r_mid: rel_block(k),
        r_next: rel_block(next),
        e_mid: map(k, true),
        e_next: map(next, true),
    }
}

fn block_diagonal(block: &[Vec<i64>], rows: usize, cols: usize, copies: usize) -> SparseMatrix {
    let mut columns = Vec::with_capacity(cols * copies);
    for t in 0..copies {
        for c in 0..cols {
            columns.push(
                (0..rows)
                    .filter(|&r| block[r][c] != 0)
                    .map(|r| (t * rows + r, block[r][c]))
                    .collect(),
            );
        }
    }
    SparseMatrix::from_columns(rows * copies, columns)
}

/// Tuples of non-identity elements, indexed in mixed radix with the first
/// entry most significant.
#[derive(Debug, Clone)]
struct Tuples {
    nonid: Vec<usize>,
    pos: Vec<usize>,
}

impl Tuples {
    fn new(g: &FiniteGroup) -> Tuples {
        let e = g.identity();
        let nonid: Vec<usize> = g.elements().filter(|&x| x != e).collect();
        let mut pos = vec![usize::MAX; g.order()];
        for (i, &x) in nonid.iter().enumerate() {
            pos[x] = i;
        }
        Tuples { nonid, pos }
    }

    fn count(&self, j: usize) -> Option<usize> {
        self.nonid.len().checked_pow(j as u32)
    }

    fn decode(&self, mut t: usize, j: usize) -> Vec<usize> {
        let b = self.nonid.len();
        let mut out = vec![0; j];
        for slot in out.iter_mut().rev() {
            *slot = self.nonid[t % b];
            t /= b;
        }
        out
    }

    fn encode(&self, elems: &[usize]) -> usize {
        elems.iter().fold(0, |acc, &x| acc * self.nonid.len() + self.pos[x])
    }
}

struct BarModel<'a> {
    m: &'a GModule,
    tuples: Tuples,
    kind: Kind,
}

impl<'a> BarModel<'a> {
    fn new(m: &'a GModule, kind: Kind) -> Self {
        BarModel {
            m,
            tuples: Tuples::new(&m.group),
            kind,
        }
    }

    fn count(&self, j: i64) -> Result<usize> {
        self.tuples.count(j as usize).ok_or_else(|| Error::ScaleExceeded {
            what: "bar resolution tuples".into(),
            requested: usize::MAX,
            limit: usize::MAX - 1,
        })
    }

    /// Normalized bar differential with coefficient blocks of size `dim`.
    ///
    /// Homology: `m ⊗ [g_1|…|g_j] ↦ g_1⁻¹m ⊗ [g_2|…] + Σ (−1)^i m ⊗ […|g_i g_{i+1}|…]
    /// + (−1)^j m ⊗ [g_1|…|g_{j−1}]`.
    /// Cohomology: `(δf)(g_1,…,g_{j+1}) = g_1·f(g_2,…) + Σ (−1)^i f(…, g_i g_{i+1}, …)
    /// + (−1)^{j+1} f(g_1,…,g_j)`.
    fn bar_matrix(&self, blocks: &[Vec<Vec<i64>>], dim: usize, j: usize) -> SparseMatrix {
        let g = &self.m.group;
        let e = g.identity();
        let t = &self.tuples;
        match self.kind {
            Kind::Homology => {
                let (nsrc, ntgt) = (t.count(j).unwrap(), t.count(j - 1).unwrap());
                let mut cols = Vec::with_capacity(nsrc * dim);
                for s in 0..nsrc {
                    let tup = t.decode(s, j);
                    let first = t.encode(&tup[1..]);
                    let last = t.encode(&tup[..j - 1]);
                    let merges: Vec<(usize, i64)> = (0..j - 1)
                        .filter_map(|i| {
                            let h = g.mul(tup[i], tup[i + 1]);
                            (h != e).then(|| {
                                let mut mt = tup.clone();
                                mt.splice(i..i + 2, [h]);
                                (t.encode(&mt), if i % 2 == 0 { -1 } else { 1 })
                            })
                        })
                        .collect();
                    let b = &blocks[g.inv(tup[0])];
                    let last_sign = if j.is_multiple_of(2) { 1 } else { -1 };
                    for c in 0..dim {
                        let mut col: Vec<(usize, i64)> = (0..dim).filter(|&r| b[r][c] != 0).map(|r| (first * dim + r, b[r][c])).collect();
                        col.extend(merges.iter().map(|&(x, sg)| (x * dim + c, sg)));
                        col.push((last * dim + c, last_sign));
                        cols.push(col);
                    }
                }
                SparseMatrix::from_columns(ntgt * dim, cols)
            }
            Kind::Cohomology => {
                let (nsrc, ntgt) = (t.count(j).unwrap(), t.count(j + 1).unwrap());
                let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nsrc * dim];
                let last_sign = if j.is_multiple_of(2) { -1 } else { 1 };
                for row in 0..ntgt {
                    let tup = t.decode(row, j + 1);
                    let first = t.encode(&tup[1..]);
                    let b = &blocks[tup[0]];
                    for r in 0..dim {
                        for c in 0..dim {
                            if b[r][c] != 0 {
                                cols[first * dim + c].push((row * dim + r, b[r][c]));
                            }
                        }
                    }
                    for i in 0..j {
                        let h = g.mul(tup[i], tup[i + 1]);
                        if h != e {
                            let mut mt = tup.clone();
                            mt.splice(i..i + 2, [h]);
                            let s = t.encode(&mt);
                            let sg = if i % 2 == 0 { -1 } else { 1 };
                            for c in 0..dim {
                                cols[s * dim + c].push((row * dim + c, sg));
                            }
                        }
                    }
                    let s = t.encode(&tup[..j]);
                    for c in 0..dim {
                        cols[s * dim + c].push((row * dim + c, last_sign));
                    }
                }
                SparseMatrix::from_columns(ntgt * dim, cols)
            }
        }
    }
}

impl Presented for BarModel<'_> {
    fn sizes(&self, j: i64) -> Result<(usize, usize)> {
        let c = self.count(j)?;
        let f = c.checked_mul(self.m.n);
        let r = c.checked_mul(self.m.relation_count());
        match (f, r) {
            (Some(f), Some(r)) => Ok((f, r)),
            _ => Err(Error::ScaleExceeded {
                what: "bar resolution chain-group rank".into(),
                requested: usize::MAX,
                limit: usize::MAX - 1,
            }),
        }
    }

    fn raw_map(&self, j: i64, on_relations: bool) -> SparseMatrix {
        if on_relations {
            self.bar_matrix(&self.m.rel_action_i64, self.m.relation_count(), j as usize)
        } else {
            self.bar_matrix(&self.m.action_i64, self.m.n, j as usize)
        }
    }

    fn relation_block(&self, j: i64) -> SparseMatrix {
        block_diagonal(
            &self.m.relations_i64,
            self.m.n,
            self.m.relation_count(),
            self.tuples.count(j as usize).unwrap(),
        )
    }
}

/// `… → M --N--> M --T--> M` with `T = g − 1` for a generator `g` and `N`
/// the sum over the group. Homology uses `T` in odd degrees, cohomology in
/// even ones.
struct PeriodicModel<'a> {
    m: &'a GModule,
    kind: Kind,
    t: [SparseMatrix; 2],
    norm: [SparseMatrix; 2],
}

impl<'a> PeriodicModel<'a> {
    fn new(m: &'a GModule, kind: Kind) -> Result<Self> {
        let g = m
            .group
            .cyclic_generator()
            .ok_or_else(|| Error::NotCyclic(format!("of order {}", m.group.order())))?;
        // right action m·g = g⁻¹m for homology
        let g = if kind == Kind::Homology { m.group.inv(g) } else { g };
        let build = |mats: &[IntMatrix], dim: usize| -> Result<[SparseMatrix; 2]> {
            let t = mats[g].sub(&IntMatrix::identity(dim)).to_sparse()?;
            let mut sum = IntMatrix::zeros(dim, dim);
            for a in mats {
                sum = sum.add(a);
            }
            Ok([t, sum.to_sparse()?])
        };
        let [t_f, n_f] = build(&m.action, m.n)?;
        let [t_x, n_x] = build(&m.rel_action, m.relation_count())?;
        Ok(PeriodicModel {
            m,
            kind,
            t: [t_f, t_x],
            norm: [n_f, n_x],
        })
    }
}

impl Presented for PeriodicModel<'_> {
    fn sizes(&self, _j: i64) -> Result<(usize, usize)> {
        Ok((self.m.n, self.m.relation_count()))
    }

    fn raw_map(&self, j: i64, on_relations: bool) -> SparseMatrix {
        let use_t = match self.kind {
            Kind::Homology => j % 2 == 1,
            Kind::Cohomology => j % 2 == 0,
        };
        let i = on_relations as usize;
        if use_t {
            self.t[i].clone()
        } else {
            self.norm[i].clone()
        }
    }

    fn relation_block(&self, _j: i64) -> SparseMatrix {
        block_diagonal(&self.m.relations_i64, self.m.n, self.m.relation_count(), 1)
    }
}

/// A class in `H²(G; M)` with a normalized representative cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleClass {
    /// Coordinates in the generators of `H²`, torsion ones reduced.
    pub coordinates: Vec<BigInt>,
    /// `table[g][h] = c(g, h)`; zero whenever `g` or `h` is the identity.
    pub table: Vec<Vec<Vec<BigInt>>>,
    pub is_split: bool,
    /// `None` for classes of infinite order.
    pub order: Option<BigInt>,
}

impl CocycleClass {
    pub fn to_json(&self) -> serde_json::Value {
        let vecs = |v: &[BigInt]| serde_json::Value::Array(v.iter().map(bigint_to_json).collect());
        serde_json::json!({
            "coordinates": vecs(&self.coordinates),
            "is_split": self.is_split,
            "order": self.order.as_ref().map(bigint_to_json),
            "cocycle": self.table.iter().map(|row| row.iter().map(|v| vecs(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// `H²(G; M)` with explicit classes.
#[derive(Debug, Clone)]
pub struct H2Classes {
    group: AbelianGroup,
    classes: Vec<CocycleClass>,
    complete: bool,
    basis: HomologyBasis,
    tuples: Tuples,
    n: usize,
    order: usize,
    identity: usize,
}

impl H2Classes {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Every class when `H²` is finite; otherwise the zero class and one
    /// class per generator.
    pub fn classes(&self) -> &[CocycleClass] {
        &self.classes
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Coordinates of the class of a normalized cocycle.
    pub fn class_of(&self, table: &[Vec<Vec<BigInt>>]) -> Result<Vec<BigInt>> {
        if table.len() != self.order || table.iter().any(|r| r.len() != self.order || r.iter().any(|v| v.len() != self.n)) {
            return Err(Error::Dimension("cocycle table has the wrong shape".into()));
        }
        let e = self.identity;
        let normalized = (0..self.order).all(|g| table[e][g].iter().chain(&table[g][e]).all(Zero::is_zero));
        if !normalized {
            return Err(Error::InvalidArgument("cocycle is not normalized".into()));
        }
        let count = self.tuples.count(2).unwrap();
        let mut v = vec![BigInt::zero(); count * self.n];
        for t in 0..count {
            let p = self.tuples.decode(t, 2);
            for c in 0..self.n {
                v[t * self.n + c] = table[p[0]][p[1]][c].clone();
            }
        }
        self.basis.coordinates(&v)
    }

    /// Index into `classes()` of the class of a normalized cocycle.
    pub fn class_index(&self, table: &[Vec<Vec<BigInt>>]) -> Result<Option<usize>> {
        let c = self.class_of(table)?;
        Ok(self.classes.iter().position(|k| k.coordinates == c))
    }
}

/// Classes of `H²(G; M)`, computed from normalized bar cochains.
pub fn h2_classes(m: &GModule, limits: &Limits) -> Result<H2Classes> {
    let window = build_window(m, 2, Kind::Cohomology, Resolution::Bar, limits)?;
    let basis = window.dense_basis()?;
    let group = basis.group().clone();
    let gens = basis.generators();
    let complete = group.free_rank() == 0;
    let coords: Vec<Vec<BigInt>> = if complete {
        let orders: Vec<BigInt> = gens.iter().map(|(_, o)| o.clone().expect("finite")).collect();
        let total = orders.iter().fold(BigInt::one(), |a, b| a * b);
        let requested = usize::try_from(&total).unwrap_or(usize::MAX);
        limits.check("second cohomology classes", requested, limits.max_classes)?;
        let mut out = Vec::with_capacity(requested);
        let mut cur = vec![BigInt::zero(); orders.len()];
        loop {
            out.push(cur.clone());
            let mut i = cur.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < orders[i] {
                    break;
                }
                cur[i] = BigInt::zero();
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX || cur.is_empty() {
                break;
            }
        }
        out
    } else {
        let zero = vec![BigInt::zero(); gens.len()];
        std::iter::once(zero.clone())
            .chain((0..gens.len()).map(|i| {
                let mut c = zero.clone();
                c[i] = BigInt::one();
                c
            }))
            .collect()
    };
    let tuples = Tuples::new(&m.group);
    let ord = m.group.order();
    let e = m.group.identity();
    let classes = coords
        .into_iter()
        .map(|a| {
            let mut v = vec![BigInt::zero(); basis.ambient_rank()];
            for (ai, (g, _)) in a.iter().zip(&gens) {
                for (x, y) in v.iter_mut().zip(g) {
                    *x += ai * y;
                }
            }
            let mut table = vec![vec![vec![BigInt::zero(); m.n]; ord]; ord];
            for (g, row) in table.iter_mut().enumerate() {
                for (h, cell) in row.iter_mut().enumerate() {
                    if g != e && h != e {
                        let t = tuples.encode(&[g, h]);
                        cell.clone_from_slice(&v[t * m.n..(t + 1) * m.n]);
                    }
                }
            }
            let mut order = Some(BigInt::one());
            for (ai, (_, o)) in a.iter().zip(&gens) {
                if ai.is_zero() {
                    continue;
                }
                order = match (order, o) {
                    (Some(acc), Some(d)) => Some(acc.lcm(&(d / ai.gcd(d)))),
                    _ => None,
                };
            }
            CocycleClass {
                is_split: a.iter().all(Zero::is_zero),
                coordinates: a,
                table,
                order,
            }
        })
        .collect();
    Ok(H2Classes {
        group,
        classes,
        complete,
        basis,
        tuples,
        n: m.n,
        order: ord,
        identity: e,
    })
}
