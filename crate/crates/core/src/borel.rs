//! Finite Milnor joins, ordered product triangulations and homology of the
//! homotopy quotient `(T × E_m G) / G`.

use serde::Serialize;

use crate::complex::{Simplex, SimplicialAction, SimplicialComplex};
use crate::error::{Error, Limits, Result};
use crate::grp::FiniteGroup;
use crate::topo::chain::{AbelianGroup, ChainComplex};
use crate::topo::{coinvariant_complex, is_free_action};

/// `E_m G`: vertex `(g, level)` has index `level·|G| + g`; simplices pick at
/// most one vertex per level. `G` acts by left translation on every level.
#[derive(Debug, Clone)]
pub struct JoinComplex {
    action: SimplicialAction,
    levels: usize,
}

impl JoinComplex {
    pub fn complex(&self) -> &SimplicialComplex {
        self.action.complex()
    }

    pub fn action(&self) -> &SimplicialAction {
        &self.action
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

pub fn milnor_join(g: &FiniteGroup, m: usize) -> Result<JoinComplex> {
    if m == 0 {
        return Err(Error::InvalidArgument("a join needs at least one level".into()));
    }
    let n = g.order();
    let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); m];
    // chains of levels l_0 < … < l_k with one element each, in lex order
    fn extend(n: usize, m: usize, cur: &mut Simplex, out: &mut [Vec<Simplex>]) {
        let start = cur.last().map_or(0, |&v| v / n + 1);
        for level in start..m {
            for x in 0..n {
                cur.push(level * n + x);
                out[cur.len() - 1].push(cur.clone());
                extend(n, m, cur, out);
                cur.pop();
            }
        }
    }
    extend(n, m, &mut Vec::new(), &mut levels);
    for l in &mut levels {
        l.sort_unstable();
    }
    let complex = SimplicialComplex::from_sorted_unchecked(n * m, levels)?;
    let perms = g
        .elements()
        .map(|h| (0..n * m).map(|v| (v / n) * n + g.mul(h, v % n)).collect())
        .collect();
    let action = SimplicialAction::from_perms(complex, g.clone(), perms)?;
    debug_assert!(is_free_action(&action).is_free());
    Ok(JoinComplex { action, levels: m })
}

/// Barycentric subdivision: vertices are the simplices of `K` ordered by
/// (dimension, lexicographic), simplices are chains under inclusion.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> SimplicialComplex {
    let flat: Vec<&Simplex> = k.all_simplices().iter().flatten().collect();
    let offsets: Vec<usize> = k
        .all_simplices()
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.len();
            Some(o)
        })
        .collect();
    let id = |s: &[usize]| offsets[s.len() - 1] + k.index_of(s).unwrap();
    let mut levels: Vec<Vec<Simplex>> = Vec::new();
    fn chains(s: &Simplex, id: &dyn Fn(&[usize]) -> usize, tail: &mut Vec<usize>, out: &mut Vec<Vec<Simplex>>) {
        tail.push(id(s));
        let mut c = tail.clone();
        c.sort_unstable();
        if out.len() < c.len() {
            out.resize(c.len(), Vec::new());
        }
        out[c.len() - 1].push(c);
        let n = s.len();
        for mask in 1..(1u64 << n) - 1 {
            let f: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            chains(&f, id, tail, out);
        }
        tail.pop();
    }
    // each chain is reached once, from its largest element downwards
    for s in &flat {
        chains(s, &id, &mut Vec::new(), &mut levels);
    }
    for l in &mut levels {
        l.sort_unstable();
    }
    SimplicialComplex::from_sorted_unchecked(flat.len(), levels).expect("subdivision is a complex")
}

/// Subdivision with the induced action, which is always order-compatible.
pub fn subdivide_action(sa: &SimplicialAction) -> Result<SimplicialAction> {
    let k = sa.complex();
    let sd = barycentric_subdivision(k);
    let offsets: Vec<usize> = k
        .all_simplices()
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.len();
            Some(o)
        })
        .collect();
    let perms = sa
        .group()
        .elements()
        .map(|g| {
            (0..k.all_simplices().len())
                .flat_map(|d| (0..k.count(d)).map(move |i| (d, i)))
                .map(|(d, i)| offsets[d] + sa.simplex_image(g, d, i).0)
                .collect()
        })
        .collect();
    SimplicialAction::from_perms(sd, sa.group().clone(), perms)
}

/// Ordered product: vertex `(t, j)` has index `t·|L| + j`; simplices are
/// chains in the product order whose projections are simplices. Only
/// simplices of dimension `≤ max_dim` are built.
pub fn staircase_product(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    max_dim: Option<usize>,
    limits: &Limits,
) -> Result<SimplicialComplex> {
    let nl = l.vertex_count();
    let top = k.dimension().unwrap_or(0) + l.dimension().unwrap_or(0);
    let dmax = max_dim.map_or(top, |d| d.min(top));
    let up = |c: &SimplicialComplex| {
        let mut adj = vec![Vec::new(); c.vertex_count()];
        for e in c.simplices(1) {
            adj[e[0]].push(e[1]);
        }
        adj
    };
    let (up_k, up_l) = (up(k), up(l));
    let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); dmax + 1];
    struct State<'a> {
        k: &'a SimplicialComplex,
        l: &'a SimplicialComplex,
        up_k: Vec<Vec<usize>>,
        up_l: Vec<Vec<usize>>,
        nl: usize,
        dmax: usize,
        ts: Vec<usize>,
        js: Vec<usize>,
        chain: Simplex,
        top_count: usize,
        limit: usize,
    }
    fn dfs(s: &mut State, t: usize, j: usize, out: &mut [Vec<Simplex>]) -> Result<()> {
        let d = s.chain.len() - 1;
        out[d].push(s.chain.clone());
        if d == s.dmax {
            s.top_count += 1;
            if s.top_count > s.limit {
                return Err(Error::ScaleExceeded {
                    what: "product simplices of top dimension".into(),
                    requested: s.top_count,
                    limit: s.limit,
                });
            }
            return Ok(());
        }
        let next_t: Vec<usize> = std::iter::once(t).chain(s.up_k[t].iter().copied()).collect();
        let next_j: Vec<usize> = std::iter::once(j).chain(s.up_l[j].iter().copied()).collect();
        for &t2 in &next_t {
            if t2 != t {
                s.ts.push(t2);
                if !s.k.contains(&s.ts) {
                    s.ts.pop();
                    continue;
                }
            }
            for &j2 in &next_j {
                if t2 == t && j2 == j {
                    continue;
                }
                if j2 != j {
                    s.js.push(j2);
                    if !s.l.contains(&s.js) {
                        s.js.pop();
                        continue;
                    }
                }
                s.chain.push(t2 * s.nl + j2);
                dfs(s, t2, j2, out)?;
                s.chain.pop();
                if j2 != j {
                    s.js.pop();
                }
            }
            if t2 != t {
                s.ts.pop();
            }
        }
        Ok(())
    }
    let mut st = State {
        k,
        l,
        up_k,
        up_l,
        nl,
        dmax,
        ts: Vec::new(),
        js: Vec::new(),
        chain: Vec::new(),
        top_count: 0,
        limit: limits.max_simplices,
    };
    for t in 0..k.vertex_count() {
        for j in 0..nl {
            st.ts = vec![t];
            st.js = vec![j];
            st.chain = vec![t * nl + j];
            dfs(&mut st, t, j, &mut levels)?;
        }
    }
    for lv in &mut levels {
        lv.sort_unstable();
    }
    SimplicialComplex::from_sorted_unchecked(k.vertex_count() * nl, levels)
}

/// Diagonal action `g·(t, j) = (g t, g j)` on a staircase product. Both
/// factor actions must be order-compatible.
pub fn diagonal_action(product: SimplicialComplex, a: &SimplicialAction, b: &SimplicialAction) -> Result<SimplicialAction> {
    if a.group() != b.group() {
        return Err(Error::InvalidArgument("factor actions are by different groups".into()));
    }
    if !a.is_order_compatible() || !b.is_order_compatible() {
        return Err(Error::InvalidArgument(
            "diagonal action on an ordered product needs order-compatible factor actions".into(),
        ));
    }
    let nl = b.complex().vertex_count();
    let perms = a
        .group()
        .elements()
        .map(|g| {
            let (pa, pb) = (a.vertex_perm(g), b.vertex_perm(g));
            (0..product.vertex_count()).map(|v| pa[v / nl] * nl + pb[v % nl]).collect()
        })
        .collect();
    SimplicialAction::from_perms(product, a.group().clone(), perms)
}

/// Product `T × E_m G` with its diagonal action, `T` subdivided first when
/// its action is not order-compatible.
fn borel_action(sa: &SimplicialAction, m: usize, max_dim: Option<usize>, limits: &Limits) -> Result<(SimplicialAction, bool)> {
    let join = milnor_join(sa.group(), m)?;
    let (t, subdivided) = if sa.is_order_compatible() {
        (sa.clone(), false)
    } else {
        (subdivide_action(sa)?, true)
    };
    let product = staircase_product(t.complex(), join.complex(), max_dim, limits)?;
    Ok((diagonal_action(product, &t, join.action())?, subdivided))
}

/// Orbit chain complex of the diagonal action on `T × E_m G`.
pub fn borel_complex(sa: &SimplicialAction, m: usize, limits: &Limits) -> Result<ChainComplex> {
    if m < 2 {
        return Err(Error::InvalidArgument("Borel construction needs m ≥ 2".into()));
    }
    let (diag, _) = borel_action(sa, m, None, limits)?;
    Ok(coinvariant_complex(&diag)?.chain_complex().clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BorelResult {
    pub levels: usize,
    /// Degrees `≤ certified_degree` do not depend on `levels`.
    pub certified_degree: usize,
    /// `H_0 … H_min(kmax, certified_degree)`.
    pub groups: Vec<AbelianGroup>,
    /// Degrees above the certified bound, flagged unreliable.
    pub unreliable: Vec<(usize, AbelianGroup)>,
    /// Whether `T` was barycentrically subdivided to make the product invariant.
    pub subdivided: bool,
}

/// `H_k((T × E_m G)/G)` for `k ≤ kmax`. Only simplices up to dimension
/// `kmax + 1` are built.
pub fn borel_homology(sa: &SimplicialAction, m: usize, kmax: usize, limits: &Limits) -> Result<BorelResult> {
    if m < 2 {
        return Err(Error::InvalidArgument("Borel construction needs m ≥ 2".into()));
    }
    let (diag, subdivided) = borel_action(sa, m, Some(kmax + 1), limits)?;
    let orbits = coinvariant_complex(&diag)?;
    let certified = m - 2;
    let mut groups = Vec::new();
    let mut unreliable = Vec::new();
    for k in 0..=kmax {
        let h = orbits.homology_group(k);
        if k <= certified {
            groups.push(h);
        } else {
            unreliable.push((k, h));
        }
    }
    Ok(BorelResult {
        levels: m,
        certified_degree: certified,
        groups,
        unreliable,
        subdivided,
    })
}
