//! Finite groups stored as full multiplication tables, together with their
//! subgroups, cosets, quotients and the permutation actions they induce.
//!
//! Element indices are `usize` values in `0..order`. Every collection of
//! elements is kept as a sorted vector so that all derived objects are
//! reproducible byte-for-byte.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How to build a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Dihedral group of order `2n` acting on an `n`-gon.
    Dihedral(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `cyclic:n`, `dihedral:n`, `symmetric:3` and products written
    /// `a*b`, e.g. `cyclic:2*cyclic:3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('*') {
            return Ok(GroupSpec::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("group spec `{s}` is missing `:`")))?;
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad group parameter `{arg}`")))?;
        match kind.trim() {
            "cyclic" | "Z" | "z" => Ok(GroupSpec::Cyclic(n)),
            "dihedral" | "D" | "d" => Ok(GroupSpec::Dihedral(n)),
            "symmetric" if n == 3 => Ok(GroupSpec::Dihedral(3)),
            other => Err(Error::InvalidArgument(format!("unknown group family `{other}`"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Product(a, b) => write!(f, "{a}*{b}"),
            GroupSpec::Table(t) => write!(f, "table[{}]", t.len()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    order: usize,
    table: Vec<Vec<usize>>,
    names: Vec<String>,
}

/// A finite group given by its multiplication table.
///
/// `table[g][h]` is the index of `g·h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    names: Vec<String>,
    identity: usize,
    inverses: Vec<usize>,
}

impl TryFrom<GroupRepr> for FiniteGroup {
    type Error = Error;

    fn try_from(r: GroupRepr) -> Result<Self> {
        if r.order != r.table.len() {
            return Err(Error::MalformedTable(format!(
                "order {} does not match table size {}",
                r.order,
                r.table.len()
            )));
        }
        FiniteGroup::from_table(r.table, Some(r.names))
    }
}

impl From<FiniteGroup> for GroupRepr {
    fn from(g: FiniteGroup) -> Self {
        GroupRepr {
            order: g.order(),
            table: g.table,
            names: g.names,
        }
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
        GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n),
        GroupSpec::Product(a, b) => Ok(FiniteGroup::direct_product(&build_group(a)?, &build_group(b)?)),
        GroupSpec::Table(t) => FiniteGroup::from_table(t.clone(), None),
    }
}

impl FiniteGroup {
    /// Validates an explicit table: rows and columns must be permutations,
    /// some row must be the identity and the product must be associative.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let is_perm = |v: &mut dyn Iterator<Item = usize>| {
            let mut seen = vec![false; n];
            for x in v {
                if x >= n || seen[x] {
                    return false;
                }
                seen[x] = true;
            }
            true
        };
        for (g, row) in table.iter().enumerate() {
            if row.len() != n || !is_perm(&mut row.iter().copied()) {
                return Err(Error::MalformedTable(format!("row {g} is not a permutation")));
            }
        }
        for h in 0..n {
            if !is_perm(&mut table.iter().map(|row| row[h])) {
                return Err(Error::MalformedTable(format!("column {h} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::MalformedTable("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        // Latin square with identity: every row contains the identity once.
        let inverses = (0..n).map(|g| table[g].iter().position(|&x| x == identity).unwrap()).collect();
        let names = match names {
            Some(v) if v.len() == n => v,
            Some(v) => return Err(Error::MalformedTable(format!("{} names for {} elements", v.len(), n))),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(FiniteGroup {
            table,
            names,
            identity,
            inverses,
        })
    }

    fn from_trusted(table: Vec<Vec<usize>>, names: Vec<String>) -> Self {
        let identity = (0..table.len())
            .find(|&e| table[e].iter().enumerate().all(|(x, &y)| x == y))
            .expect("trusted table has an identity");
        let inverses = table.iter().map(|row| row.iter().position(|&x| x == identity).unwrap()).collect();
        FiniteGroup {
            table,
            names,
            identity,
            inverses,
        }
    }

    /// Residues mod `n`; element 1 generates.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group needs n >= 1".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Ok(Self::from_trusted(table, (0..n).map(|i| i.to_string()).collect()))
    }

    /// Dihedral group of order `2n`. Index `i < n` is `r^i`, index `n + i`
    /// is `s·r^i`, so that `s·r·s = r^-1`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dihedral group needs n >= 1".into()));
        }
        let decode = |x: usize| (x >= n, x % n);
        let encode = |refl: bool, i: usize| if refl { n + i } else { i };
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                let (sa, i) = decode(a);
                let (sb, j) = decode(b);
                // r^i s = s r^-i
                let k = if sb { (j + n - i) % n } else { (i + j) % n };
                table[a][b] = encode(sa ^ sb, k);
            }
        }
        let rot = |i: usize| match i {
            0 => "e".to_string(),
            1 => "r".to_string(),
            _ => format!("r^{i}"),
        };
        let names = (0..2 * n)
            .map(|x| {
                let (s, i) = decode(x);
                match (s, i) {
                    (false, _) => rot(i),
                    (true, 0) => "s".to_string(),
                    (true, 1) => "s·r".to_string(),
                    (true, _) => format!("s·r^{i}"),
                }
            })
            .collect();
        Ok(Self::from_trusted(table, names))
    }

    /// Pairs `(a, b)` stored at index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let mut table = vec![vec![0; na * nb]; na * nb];
        for x in 0..na * nb {
            for y in 0..na * nb {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x][y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
            }
        }
        let names = (0..na * nb).map(|x| format!("({},{})", a.names[x / nb], b.names[x % nb])).collect();
        Self::from_trusted(table, names)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// An element generating the whole group, if there is one.
    pub fn cyclic_generator(&self) -> Option<usize> {
        self.elements().find(|&g| self.element_order(g) == self.order())
    }

    /// Smallest subgroup containing `gens`.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            members: (0..self.order()).filter(|&i| seen[i]).collect(),
            parent_order: self.order(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            members: vec![self.identity],
            parent_order: self.order(),
        }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: self.elements().collect(),
            parent_order: self.order(),
        }
    }

    /// Rebuilds a subgroup as a group in its own right. The second value maps
    /// each new index to the element of `self` it came from.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let emb = h.members.clone();
        let pos: HashMap<usize, usize> = emb.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = emb.iter().map(|&a| emb.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        let names = emb.iter().map(|&x| self.names[x].clone()).collect();
        (Self::from_trusted(table, names), emb)
    }
}

/// A subgroup, as the sorted list of its members.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
    parent_order: usize,
}

impl Subgroup {
    /// Checks closure under products and inverses.
    pub fn new(g: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        let set: HashSet<usize> = members.iter().copied().collect();
        let ok = members.iter().all(|&x| x < g.order())
            && set.contains(&g.identity())
            && members
                .iter()
                .all(|&a| set.contains(&g.inv(a)) && members.iter().all(|&b| set.contains(&g.mul(a, b))));
        if !ok {
            return Err(Error::NotSubgroup(members));
        }
        Ok(Subgroup {
            members,
            parent_order: g.order(),
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }
}

/// Every subgroup of `g`, sorted by `(size, members)`.
///
/// Breadth-first closure: each known subgroup is extended by every element it
/// misses. Exponential in general, exhaustive and fast for small tables.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let start = g.trivial_subgroup();
    found.insert(start.members.clone());
    queue.push_back(start.clone());
    out.push(start);
    while let Some(h) = queue.pop_front() {
        for x in g.elements() {
            if h.contains(x) {
                continue;
            }
            let mut gens = h.members.clone();
            gens.push(x);
            let k = g.closure(&gens);
            if found.insert(k.members.clone()) {
                queue.push_back(k.clone());
                out.push(k);
            }
        }
    }
    out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    out
}

/// A left coset `representative · subgroup`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coset {
    pub subgroup: Subgroup,
    pub representative: usize,
    pub members: Vec<usize>,
}

impl Coset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Left cosets ordered by their minimal element, which is also the
/// representative.
pub fn left_cosets(g: &FiniteGroup, h: &Subgroup) -> Result<Vec<Coset>> {
    let h = Subgroup::new(g, h.members.iter().copied())?;
    let mut assigned = vec![false; g.order()];
    let mut out = Vec::new();
    for x in g.elements() {
        if assigned[x] {
            continue;
        }
        let mut members: Vec<usize> = h.members.iter().map(|&y| g.mul(x, y)).collect();
        members.sort_unstable();
        for &m in &members {
            assigned[m] = true;
        }
        out.push(Coset {
            subgroup: h.clone(),
            representative: x,
            members,
        });
    }
    Ok(out)
}

pub fn is_normal(g: &FiniteGroup, h: &Subgroup) -> bool {
    g.elements().all(|x| h.members.iter().all(|&y| h.contains(g.conj(x, y))))
}

/// Multiplication table on the cosets of a normal subgroup, ordered as
/// `left_cosets` returns them.
pub fn quotient_group(g: &FiniteGroup, h: &Subgroup) -> Result<FiniteGroup> {
    let cosets = left_cosets(g, h)?;
    if !is_normal(g, h) {
        return Err(Error::NotNormal(h.members.clone()));
    }
    let mut which = vec![0; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &m in &c.members {
            which[m] = i;
        }
    }
    let table = cosets
        .iter()
        .map(|a| cosets.iter().map(|b| which[g.mul(a.representative, b.representative)]).collect())
        .collect();
    let names = cosets.iter().map(|c| format!("[{}]", g.name(c.representative))).collect();
    Ok(FiniteGroup::from_trusted(table, names))
}

/// A permutation action of a finite group on `0..ground_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    group: FiniteGroup,
    perms: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Checks that each entry is a permutation, that the identity acts
    /// trivially and that `perms[g·h] = perms[g] ∘ perms[h]`.
    pub fn new(group: FiniteGroup, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::Dimension(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        let n = perms.first().map_or(0, Vec::len);
        for (g, p) in perms.iter().enumerate() {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidPermutation(g));
            }
        }
        let e = group.identity();
        if perms[e].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::HomomorphismLaw(e, e));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = &perms[group.mul(g, h)];
                if (0..n).any(|x| gh[x] != perms[g][perms[h][x]]) {
                    return Err(Error::HomomorphismLaw(g, h));
                }
            }
        }
        Ok(GroupAction { group, perms })
    }

    pub fn trivial(group: FiniteGroup, ground_size: usize) -> Self {
        let perms = vec![(0..ground_size).collect(); group.order()];
        GroupAction { group, perms }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn ground_size(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup {
            members: self.group.elements().filter(|&g| self.perms[g][x] == x).collect(),
            parent_order: self.group.order(),
        }
    }

    /// Points fixed by every group element.
    pub fn global_fixed_points(&self) -> Vec<usize> {
        (0..self.ground_size()).filter(|&x| self.perms.iter().all(|p| p[x] == x)).collect()
    }

    /// Restriction to a subgroup, re-indexed as in
    /// [`FiniteGroup::subgroup_as_group`].
    pub fn restrict(&self, h: &Subgroup) -> GroupAction {
        let (sub, emb) = self.group.subgroup_as_group(h);
        let perms = emb.iter().map(|&g| self.perms[g].clone()).collect();
        GroupAction { group: sub, perms }
    }
}

fn action_on_sets(g: &FiniteGroup, sets: &[Vec<usize>], image: impl Fn(usize, usize) -> usize) -> Result<GroupAction> {
    let index: HashMap<&[usize], usize> = sets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut perms = Vec::with_capacity(g.order());
    for x in g.elements() {
        let mut p = Vec::with_capacity(sets.len());
        for (i, s) in sets.iter().enumerate() {
            let mut img: Vec<usize> = s.iter().map(|&y| image(x, y)).collect();
            img.sort_unstable();
            let j = index.get(img.as_slice()).ok_or(Error::ActionNotClosed { element: x, item: i })?;
            p.push(*j);
        }
        perms.push(p);
    }
    GroupAction::new(g.clone(), perms)
}

/// Left translation `x ↦ g·x` on a list of element sets.
pub fn shift_action_on_sets(g: &FiniteGroup, sets: &[Vec<usize>]) -> Result<GroupAction> {
    action_on_sets(g, sets, |x, y| g.mul(x, y))
}

/// Conjugation `x ↦ g·x·g⁻¹` on a list of element sets.
pub fn conjugation_action_on_sets(g: &FiniteGroup, sets: &[Vec<usize>]) -> Result<GroupAction> {
    action_on_sets(g, sets, |x, y| g.conj(x, y))
}

pub fn shift_action(g: &FiniteGroup, cosets: &[Coset]) -> Result<GroupAction> {
    let sets: Vec<Vec<usize>> = cosets.iter().map(|c| c.members.clone()).collect();
    shift_action_on_sets(g, &sets)
}

pub fn conjugation_action_on_subgroups(g: &FiniteGroup, targets: &[Subgroup]) -> Result<GroupAction> {
    let sets: Vec<Vec<usize>> = targets.iter().map(|h| h.members.clone()).collect();
    conjugation_action_on_sets(g, &sets)
}

pub fn conjugation_action_on_cosets(g: &FiniteGroup, targets: &[Coset]) -> Result<GroupAction> {
    let sets: Vec<Vec<usize>> = targets.iter().map(|c| c.members.clone()).collect();
    conjugation_action_on_sets(g, &sets)
}
