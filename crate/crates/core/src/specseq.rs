//! E2 pages of the spectral sequence of a simplicial action, forced-collapse
//! abutment, and extension reports for actions on graphs.

use serde::Serialize;

use crate::complex::SimplicialAction;
use crate::error::{Error, Limits, Result};
use crate::ghom::{cohomology_gmodule, compute, homology_gmodule_with_basis, resolved, GModule, Kind, Resolution, Route};
use crate::grp::{all_subgroups, Subgroup};
use crate::topo::chain::AbelianGroup;
use crate::topo::{coinvariant_complex, components, euler_characteristic, homology_group, is_free_action, projection_on_homology};

/// Which spectral sequence the page is certified as.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum PageLabel {
    /// Connected graph: the page is that of the subordinate extension.
    HochschildMostov,
    CartanSerre,
}

#[derive(Debug, Clone, Serialize)]
pub struct E2Page {
    pmax: usize,
    qmax: usize,
    kind: Kind,
    resolution: Resolution,
    label: PageLabel,
    /// Dimension of the complex; rows above it vanish.
    complex_dimension: usize,
    /// `entries[q][p]` for `p ≤ pmax + 1`. The extra column is only read by
    /// the abutment bookkeeping.
    entries: Vec<Vec<AbelianGroup>>,
    /// Coefficient module of each row.
    rows: Vec<GModule>,
}

impl E2Page {
    pub fn pmax(&self) -> usize {
        self.pmax
    }

    pub fn qmax(&self) -> usize {
        self.qmax
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn label(&self) -> PageLabel {
        self.label
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn row_module(&self, q: usize) -> &GModule {
        &self.rows[q]
    }

    /// `E²_{p,q}` (or `E₂^{p,q}`) for `p ≤ pmax`, `q ≤ qmax`.
    pub fn entry(&self, p: usize, q: usize) -> &AbelianGroup {
        assert!(p <= self.pmax && q <= self.qmax, "entry ({p}, {q}) outside the page");
        &self.entries[q][p]
    }

    pub fn row(&self, q: usize) -> &[AbelianGroup] {
        &self.entries[q][..=self.pmax]
    }

    /// `Some(group)` when known, `None` when outside the computed range.
    fn known(&self, p: i64, q: i64) -> Option<AbelianGroup> {
        if p < 0 || q < 0 || q as usize > self.complex_dimension {
            return Some(AbelianGroup::zero());
        }
        let (p, q) = (p as usize, q as usize);
        if q > self.qmax || p > self.pmax + 1 {
            return None;
        }
        Some(self.entries[q][p].clone())
    }

    /// A nonzero entry survives to `E^∞` when every differential into or
    /// out of it has a zero source or target.
    fn is_stable(&self, p: usize, q: usize) -> bool {
        let (p, q) = (p as i64, q as i64);
        let sign = if self.kind == Kind::Homology { 1 } else { -1 };
        let zero = |x: Option<AbelianGroup>| x.is_some_and(|g| g.is_zero());
        (2..=p.max(q + 1) + 1).all(|r| {
            let outgoing = (p - sign * r, q + sign * (r - 1));
            let incoming = (p + sign * r, q - sign * (r - 1));
            let quadrant = |(a, b): (i64, i64)| a >= 0 && b >= 0;
            (!quadrant(outgoing) || zero(self.known(outgoing.0, outgoing.1)))
                && (!quadrant(incoming) || zero(self.known(incoming.0, incoming.1)))
        })
    }
}

/// Page with `E²_{p,q} = H_p(G; H_q(K))`.
pub fn e2_page(sa: &SimplicialAction, pmax: usize, qmax: usize, limits: &Limits) -> Result<E2Page> {
    e2_page_with(sa, pmax, qmax, Kind::Homology, Resolution::Auto, limits)
}

/// Page with `E₂^{p,q} = H^p(G; H^q(K))`.
pub fn cohomological_e2_page(sa: &SimplicialAction, pmax: usize, qmax: usize, limits: &Limits) -> Result<E2Page> {
    e2_page_with(sa, pmax, qmax, Kind::Cohomology, Resolution::Auto, limits)
}

pub fn e2_page_with(sa: &SimplicialAction, pmax: usize, qmax: usize, kind: Kind, res: Resolution, limits: &Limits) -> Result<E2Page> {
    let k = sa.complex();
    let complex_dimension = k.dimension().unwrap_or(0);
    let mut rows = Vec::with_capacity(qmax + 1);
    let mut entries = Vec::with_capacity(qmax + 1);
    for q in 0..=qmax {
        let m = match kind {
            Kind::Homology => homology_gmodule_with_basis(sa, q)?.0,
            Kind::Cohomology => cohomology_gmodule(sa, q)?,
        };
        let row = (0..=pmax + 1)
            .map(|p| compute(&m, p, kind, res, Route::Auto, limits))
            .collect::<Result<Vec<_>>>()?;
        entries.push(row);
        rows.push(m);
    }
    let label = if k.dimension().is_some_and(|d| d <= 1) && components(k) == 1 {
        PageLabel::HochschildMostov
    } else {
        PageLabel::CartanSerre
    };
    Ok(E2Page {
        pmax,
        qmax,
        kind,
        resolution: resolved(sa.group(), res),
        label,
        complex_dimension,
        entries,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Determinacy {
    Determined,
    GradedOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedPiece {
    pub p: usize,
    pub q: usize,
    pub group: AbelianGroup,
    /// Survives to `E^∞` by forced collapse.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbutmentEntry {
    pub degree: usize,
    /// Nonzero `E²` entries of this total degree.
    pub pieces: Vec<GradedPiece>,
    pub determinacy: Determinacy,
    /// The abutment in this degree when determined.
    pub value: Option<AbelianGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbutmentReport {
    pub kind: Kind,
    /// At most rows 0 and 1 are nonzero.
    pub two_row: bool,
    pub entries: Vec<AbutmentEntry>,
}

impl AbutmentReport {
    /// Values in degrees `0..=pmax`, `None` where not determined.
    pub fn values(&self) -> Vec<Option<AbelianGroup>> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

/// Degree-by-degree abutment using only forced-zero collapse.
pub fn abutment(page: &E2Page) -> Result<AbutmentReport> {
    let mut entries = Vec::with_capacity(page.pmax + 1);
    for n in 0..=page.pmax {
        if n > page.qmax && page.qmax < page.complex_dimension {
            return Err(Error::InsufficientPage(format!(
                "total degree {n} needs rows up to {}, page has {}",
                n.min(page.complex_dimension),
                page.qmax
            )));
        }
        let pieces: Vec<GradedPiece> = (0..=n.min(page.qmax))
            .map(|q| (n - q, q))
            .filter(|&(p, q)| !page.entries[q][p].is_zero())
            .map(|(p, q)| GradedPiece {
                p,
                q,
                group: page.entries[q][p].clone(),
                stable: page.is_stable(p, q),
            })
            .collect();
        let determined = pieces.len() <= 1 && pieces.iter().all(|x| x.stable);
        entries.push(AbutmentEntry {
            degree: n,
            value: determined.then(|| pieces.first().map_or_else(AbelianGroup::zero, |x| x.group.clone())),
            determinacy: if determined {
                Determinacy::Determined
            } else {
                Determinacy::GradedOnly
            },
            pieces,
        });
    }
    let two_row = (2..=page.complex_dimension).all(|q| q <= page.qmax && page.entries[q].iter().all(AbelianGroup::is_zero));
    Ok(AbutmentReport {
        kind: page.kind,
        two_row,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum ExtensionReport {
    Free {
        /// Rank of the free group `π_1(K)`.
        rank: i64,
        /// Rank of `π_1(K/G)`.
        quotient_rank: i64,
        index: usize,
        /// `rank − 1 = |G|·(quotient_rank − 1)`.
        nielsen_schreier: bool,
    },
    SplitFixedPoint {
        fixed_vertex: usize,
        /// Matrix of each group element on `H_1(K)`.
        h1_action: Vec<Vec<Vec<i64>>>,
    },
    DiagramOnly {
        checks: Vec<DiagramReport>,
    },
}

fn require_connected_graph(sa: &SimplicialAction) -> Result<()> {
    let k = sa.complex();
    if k.dimension().is_some_and(|d| d > 1) {
        return Err(Error::NotAspherical(format!("complex has dimension {}", k.dimension().unwrap())));
    }
    if components(k) != 1 {
        return Err(Error::NotAspherical(format!("complex has {} components", components(k))));
    }
    Ok(())
}

/// Classifies the subordinate extension of an action on a connected graph.
pub fn subordinate_report(sa: &SimplicialAction) -> Result<ExtensionReport> {
    require_connected_graph(sa)?;
    let k = sa.complex();
    let g = sa.group();
    let ord = g.order() as i64;
    if is_free_action(sa).is_free() {
        let chi = euler_characteristic(k);
        let q = coinvariant_complex(sa)?;
        let rank = 1 - chi;
        let quotient_rank = 1 - q.euler_characteristic();
        if chi != ord * q.euler_characteristic() || quotient_rank != q.homology_group(1).free_rank() as i64 {
            return Err(Error::Internal("quotient graph is inconsistent with the cover".into()));
        }
        return Ok(ExtensionReport::Free {
            rank,
            quotient_rank,
            index: g.order(),
            nielsen_schreier: rank - 1 == ord * (quotient_rank - 1),
        });
    }
    if let Some(&v) = sa.action().global_fixed_points().first() {
        let (m, _) = homology_gmodule_with_basis(sa, 1)?;
        let h1_action = g.elements().map(|x| m.action(x).to_i64_rows()).collect::<Result<Vec<_>>>()?;
        return Ok(ExtensionReport::SplitFixedPoint {
            fixed_vertex: v,
            h1_action,
        });
    }
    let checks = all_subgroups(g)
        .iter()
        .filter(|h| is_free_action(&sa.restrict(h)).is_free())
        .map(|h| subgroup_diagram_check(sa, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtensionReport::DiagramOnly { checks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub subgroup: Vec<usize>,
    pub index: usize,
    pub quotient_euler: i64,
    pub quotient_h1: AbelianGroup,
    /// Components of `K/H`; a connected cover has a connected quotient.
    pub quotient_connected: bool,
    /// `H_1(K) → H_1(K/H)` with columns indexed by generators of `H_1(K)`.
    pub h1_map: Vec<Vec<i64>>,
    /// Order of the cokernel of `h1_map`, `None` if infinite.
    pub cokernel_order: Option<u64>,
    /// `rank H_1(K) − 1 = |H|·(rank H_1(K/H) − 1)`.
    pub nielsen_schreier: bool,
    /// `χ(K/H) = [G:H]·χ(K/G)`, checked when `G` itself acts freely.
    pub quotient_of_quotient: Option<bool>,
}

/// Numeric shadow of the commutative diagram comparing the extension of
/// `G` with that of a subgroup `H` acting freely.
pub fn subgroup_diagram_check(sa: &SimplicialAction, h: &Subgroup) -> Result<DiagramReport> {
    require_connected_graph(sa)?;
    if h.parent_order() != sa.group().order() {
        return Err(Error::InvalidArgument("subgroup of a different group".into()));
    }
    let k = sa.complex();
    let restricted = sa.restrict(h);
    let quotient = coinvariant_complex(&restricted)?;
    let map = projection_on_homology(&quotient, k, 1)?;
    let h1 = homology_group(k, 1)?.free_rank() as i64;
    let quotient_h1 = quotient.homology_group(1);
    let quotient_connected = quotient.homology_group(0) == AbelianGroup::free(1);
    let cokernel_order = AbelianGroup::presented(&map).order().and_then(|o| u64::try_from(o).ok());
    let quotient_of_quotient = if is_free_action(sa).is_free() {
        let full = coinvariant_complex(sa)?;
        Some(quotient.euler_characteristic() == h.index() as i64 * full.euler_characteristic())
    } else {
        None
    };
    Ok(DiagramReport {
        subgroup: h.members().to_vec(),
        index: h.index(),
        quotient_euler: quotient.euler_characteristic(),
        nielsen_schreier: h1 - 1 == h.order() as i64 * (quotient_h1.free_rank() as i64 - 1),
        quotient_h1,
        quotient_connected,
        h1_map: map.to_i64_rows()?,
        cokernel_order,
        quotient_of_quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::grp::FiniteGroup;
    use crate::lattice::{coset_poset, coset_shift_action, simplicial_action};

    fn gamma6() -> SimplicialAction {
        let g = FiniteGroup::cyclic(6).unwrap();
        simplicial_action(&coset_shift_action(&g, &coset_poset(&g)).unwrap()).unwrap()
    }

    fn hexagon(perm: impl Fn(usize) -> usize) -> SimplicialAction {
        let c = SimplicialComplex::cycle(6).unwrap();
        let g = FiniteGroup::cyclic(2).unwrap();
        SimplicialAction::from_perms(c, g, vec![(0..6).collect(), (0..6).map(perm).collect()]).unwrap()
    }

    #[test]
    fn gamma6_page_and_abutment() {
        let page = e2_page(&gamma6(), 5, 1, &Limits::default()).unwrap();
        let z6 = AbelianGroup::cyclic(6);
        let zero = AbelianGroup::zero();
        let row0 = vec![
            AbelianGroup::free(1),
            z6.clone(),
            zero.clone(),
            z6.clone(),
            zero.clone(),
            z6.clone(),
        ];
        assert_eq!(page.row(0), row0.as_slice());
        assert!(page.row(1).iter().all(AbelianGroup::is_zero));
        assert_eq!(page.label(), PageLabel::HochschildMostov);
        assert_eq!(page.resolution(), Resolution::Periodic);
        let ab = abutment(&page).unwrap();
        assert!(ab.two_row);
        assert!(ab.entries.iter().all(|e| e.determinacy == Determinacy::Determined));
        assert_eq!(ab.values(), row0.into_iter().map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn reflection_rows() {
        let sa = hexagon(|v| (6 - v) % 6);
        let l = Limits::default();
        let z2 = AbelianGroup::cyclic(2);
        let zero = AbelianGroup::zero();
        let page = e2_page(&sa, 2, 1, &l).unwrap();
        assert_eq!(page.row(0), &[AbelianGroup::free(1), z2.clone(), zero.clone()]);
        assert_eq!(page.row(1), &[z2.clone(), zero.clone(), z2.clone()]);
        let co = cohomological_e2_page(&sa, 2, 1, &l).unwrap();
        assert_eq!(co.row(1), &[zero.clone(), z2.clone(), zero.clone()]);
        let ab = abutment(&page).unwrap();
        // degree 1 has pieces Z_2 at (1,0) and (0,1)
        assert_eq!(ab.entries[1].determinacy, Determinacy::GradedOnly);
        assert_eq!(ab.entries[1].pieces.len(), 2);
    }

    #[test]
    fn trivial_group_page() {
        let k = SimplicialComplex::cycle(4).unwrap();
        let sa = SimplicialAction::trivial(k, FiniteGroup::cyclic(1).unwrap());
        let page = e2_page(&sa, 3, 1, &Limits::default()).unwrap();
        assert_eq!(page.row(0)[0], AbelianGroup::free(1));
        assert_eq!(page.row(1)[0], AbelianGroup::free(1));
        assert!((1..=3).all(|p| page.row(0)[p].is_zero() && page.row(1)[p].is_zero()));
        let ab = abutment(&page).unwrap();
        assert_eq!(
            ab.values(),
            vec![
                Some(AbelianGroup::free(1)),
                Some(AbelianGroup::free(1)),
                Some(AbelianGroup::zero()),
                Some(AbelianGroup::zero())
            ]
        );
    }

    #[test]
    fn insufficient_page() {
        let k = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
        let sa = SimplicialAction::trivial(k, FiniteGroup::cyclic(1).unwrap());
        let page = e2_page(&sa, 2, 0, &Limits::default()).unwrap();
        assert!(matches!(abutment(&page), Err(Error::InsufficientPage(_))));
        assert_eq!(page.label(), PageLabel::CartanSerre);
    }

    #[test]
    fn hexagon_reports() {
        match subordinate_report(&hexagon(|v| (v + 3) % 6)).unwrap() {
            ExtensionReport::Free {
                rank,
                quotient_rank,
                index,
                nielsen_schreier,
            } => {
                assert_eq!((rank, quotient_rank, index), (1, 1, 2));
                assert!(nielsen_schreier);
            }
            r => panic!("{r:?}"),
        }
        match subordinate_report(&hexagon(|v| (6 - v) % 6)).unwrap() {
            ExtensionReport::SplitFixedPoint { fixed_vertex, h1_action } => {
                assert_eq!(fixed_vertex, 0);
                assert_eq!(h1_action[1], vec![vec![-1]]);
            }
            r => panic!("{r:?}"),
        }
        match subordinate_report(&hexagon(|v| v)).unwrap() {
            ExtensionReport::SplitFixedPoint { h1_action, .. } => assert_eq!(h1_action[1], vec![vec![1]]),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn dihedral_triangle() {
        let sa = SimplicialAction::dihedral_polygon(3).unwrap();
        let r = subordinate_report(&sa).unwrap();
        let ExtensionReport::DiagramOnly { checks } = r else {
            panic!("{r:?}")
        };
        let rot = checks.iter().find(|c| c.subgroup == vec![0, 1, 2]).unwrap();
        assert_eq!(rot.index, 2);
        assert_eq!(rot.quotient_h1, AbelianGroup::free(1));
        assert_eq!(rot.h1_map, vec![vec![3]]);
        assert_eq!(rot.cokernel_order, Some(3));
        assert!(rot.nielsen_schreier);
        let triv = checks.iter().find(|c| c.subgroup == vec![0]).unwrap();
        assert_eq!(triv.h1_map, vec![vec![1]]);
        assert_eq!(checks.len(), 2);
    }

    #[test]
    fn not_a_graph() {
        let k = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
        let sa = SimplicialAction::trivial(k, FiniteGroup::cyclic(2).unwrap());
        assert!(matches!(subordinate_report(&sa), Err(Error::NotAspherical(_))));
        let two = SimplicialComplex::from_facets(2, &[vec![0], vec![1]]).unwrap();
        let sa = SimplicialAction::trivial(two, FiniteGroup::cyclic(2).unwrap());
        assert!(matches!(subordinate_report(&sa), Err(Error::NotAspherical(_))));
    }
}
