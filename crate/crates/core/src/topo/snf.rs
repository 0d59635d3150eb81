//! Smith normal form over ℤ.
//!
//! Dense reduction pivots on the entry of least absolute value and clears its
//! row and column by Euclidean steps. With transforms tracked, a
//! divisibility fix-up runs before each pivot is accepted; without them the
//! diagonal is normalized afterwards by gcd/lcm exchanges.
//!
//! [`sparse_invariant_factors`] first eliminates ±1 pivots directly on the
//! sparse `i64` matrix and hands only the remainder to the dense routine.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::chain::normalize_chain;
use super::matrix::{IntMatrix, SparseMatrix};

/// `u · a · v = s` with `u`, `v` unimodular and `s` diagonal,
/// `s[0][0] | s[1][1] | …`, all nonnegative.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// Nonzero diagonal entries.
    pub fn factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Reducer {
    m: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    track: bool,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += q * s;
        }
    }
}

fn two_rows(m: &mut [Vec<BigInt>], i: usize, j: usize) -> (&mut Vec<BigInt>, &Vec<BigInt>) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = m.split_at_mut(j);
        (&mut a[i], &b[0])
    } else {
        let (a, b) = m.split_at_mut(i);
        (&mut b[0], &a[j])
    }
}

impl Reducer {
    fn new(a: &IntMatrix, track: bool) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        Reducer {
            m: a.to_rows(),
            rows,
            cols,
            track,
            u: if track { identity_rows(rows) } else { Vec::new() },
            u_inv: if track { identity_rows(rows) } else { Vec::new() },
            v: if track { identity_rows(cols) } else { Vec::new() },
            v_inv: if track { identity_rows(cols) } else { Vec::new() },
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.m.swap(i, j);
        if self.track {
            self.u.swap(i, j);
            for row in &mut self.u_inv {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.m {
            row.swap(i, j);
        }
        if self.track {
            for row in &mut self.v {
                row.swap(i, j);
            }
            self.v_inv.swap(i, j);
        }
    }

    /// row_i += q · row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        let (dst, src) = two_rows(&mut self.m, i, j);
        axpy(dst, q, src);
        if self.track {
            let (dst, src) = two_rows(&mut self.u, i, j);
            axpy(dst, q, src);
            // u_inv: col_j -= q col_i
            for row in &mut self.u_inv {
                let t = &row[i] * q;
                row[j] -= t;
            }
        }
    }

    /// col_i += q · col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for row in &mut self.m {
            if !row[j].is_zero() {
                let t = &row[j] * q;
                row[i] += t;
            }
        }
        if self.track {
            for row in &mut self.v {
                if !row[j].is_zero() {
                    let t = &row[j] * q;
                    row[i] += t;
                }
            }
            // v_inv: row_j -= q row_i
            let nq = -q;
            let (dst, src) = two_rows(&mut self.v_inv, j, i);
            axpy(dst, &nq, src);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.m[i] {
            *x = -&*x;
        }
        if self.track {
            for x in &mut self.u[i] {
                *x = -&*x;
            }
            for row in &mut self.u_inv {
                row[i] = -&row[i];
            }
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.m[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.m[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn reduce(&mut self) -> usize {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.m[t][t].clone();
                for i in t + 1..self.rows {
                    if !self.m[i][t].is_zero() {
                        let q = -self.m[i][t].div_floor(&p);
                        self.add_row(i, t, &q);
                    }
                }
                for j in t + 1..self.cols {
                    if !self.m[t][j].is_zero() {
                        let q = -self.m[t][j].div_floor(&p);
                        self.add_col(j, t, &q);
                    }
                }
                // a leftover remainder is smaller than the pivot: move it in
                let pabs = p.abs();
                let col_rem = (t + 1..self.rows).find(|&i| !self.m[i][t].is_zero() && self.m[i][t].abs() < pabs);
                if let Some(i) = col_rem {
                    self.swap_rows(t, i);
                    continue;
                }
                let row_rem = (t + 1..self.cols).find(|&j| !self.m[t][j].is_zero() && self.m[t][j].abs() < pabs);
                if let Some(j) = row_rem {
                    self.swap_cols(t, j);
                    continue;
                }
                if (t + 1..self.rows).any(|i| !self.m[i][t].is_zero()) || (t + 1..self.cols).any(|j| !self.m[t][j].is_zero()) {
                    continue;
                }
                if self.track {
                    let bad = (t + 1..self.rows)
                        .find(|&i| (t + 1..self.cols).any(|j| !self.m[i][j].is_zero() && !self.m[i][j].is_multiple_of(&p)));
                    if let Some(i) = bad {
                        self.add_row(t, i, &BigInt::one());
                        continue;
                    }
                }
                break;
            }
            if self.m[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

fn into_matrix(rows: Vec<Vec<BigInt>>, r: usize, c: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(r, c);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut red = Reducer::new(a, true);
    let rank = red.reduce();
    let (r, c) = (red.rows, red.cols);
    SnfResult {
        s: into_matrix(red.m, r, c),
        u: into_matrix(red.u, r, r),
        u_inv: into_matrix(red.u_inv, r, r),
        v: into_matrix(red.v, c, c),
        v_inv: into_matrix(red.v_inv, c, c),
        rank,
    }
}

/// Nonzero invariant factors of a dense matrix (no transforms).
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut red = Reducer::new(a, false);
    let rank = red.reduce();
    normalize_chain((0..rank).map(|i| red.m[i][i].clone()).collect())
}

/// Columns spanning `{x : a·x = 0}`, a basis of the kernel lattice.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    snf.v.submatrix(0, a.cols(), snf.rank, a.cols())
}

/// Exact solver for `basis · x = target` where `basis` has full column rank.
#[derive(Debug, Clone)]
pub struct LatticeSolver {
    snf: SnfResult,
    cols: usize,
}

impl LatticeSolver {
    /// Returns `None` if the columns of `basis` are linearly dependent.
    pub fn new(basis: &IntMatrix) -> Option<Self> {
        let snf = smith_normal_form(basis);
        (snf.rank == basis.cols()).then_some(LatticeSolver { snf, cols: basis.cols() })
    }

    pub fn solve_vec(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.snf.u.mul_vec(target);
        if y[self.cols..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut z = Vec::with_capacity(self.cols);
        for (i, yi) in y.iter().take(self.cols).enumerate() {
            let (q, r) = yi.div_rem(self.snf.s.get(i, i));
            if !r.is_zero() {
                return None;
            }
            z.push(q);
        }
        Some(self.snf.v.mul_vec(&z))
    }

    /// Solves column by column.
    pub fn solve(&self, target: &IntMatrix) -> Option<IntMatrix> {
        let cols: Option<Vec<Vec<BigInt>>> = (0..target.cols()).map(|j| self.solve_vec(&target.column(j))).collect();
        Some(IntMatrix::from_columns(self.cols, &cols?))
    }
}

/// Nonzero invariant factors of a sparse matrix, including the ones.
///
/// Unit pivots are eliminated in place (column operations followed by
/// dropping the pivot row and column). Every intermediate `i64` operation is
/// checked; on overflow the elimination stops, which leaves an equivalent
/// matrix, and the dense routine takes over.
pub fn sparse_invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let nrows = m.rows();
    let mut cols: Vec<Vec<(usize, i64)>> = m.columns().to_vec();
    let mut row_cols: Vec<HashSet<usize>> = vec![HashSet::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for &(i, _) in c {
            row_cols[i].insert(j);
        }
    }
    let mut col_alive = vec![true; cols.len()];
    let mut row_alive = vec![true; nrows];
    let mut ones = 0usize;

    'outer: loop {
        let mut order: Vec<usize> = (0..cols.len()).filter(|&j| col_alive[j] && !cols[j].is_empty()).collect();
        order.sort_by_key(|&j| cols[j].len());
        let mut progressed = false;
        for c in order {
            if !col_alive[c] {
                continue;
            }
            let pivot = cols[c]
                .iter()
                .filter(|&&(_, v)| v == 1 || v == -1)
                .min_by_key(|&&(i, _)| row_cols[i].len())
                .copied();
            let Some((r, u)) = pivot else { continue };
            let others: Vec<usize> = row_cols[r].iter().copied().filter(|&j| j != c).collect();
            let pivot_col = cols[c].clone();
            for j in others {
                let a = cols[j][cols[j].binary_search_by_key(&r, |&(i, _)| i).unwrap()].1;
                // col_j -= a·u · col_c
                let Some(merged) = a.checked_mul(u).and_then(|k| axpy_sparse(&cols[j], k, &pivot_col)) else {
                    break 'outer;
                };
                for &(i, _) in &cols[j] {
                    row_cols[i].remove(&j);
                }
                for &(i, _) in &merged {
                    row_cols[i].insert(j);
                }
                cols[j] = merged;
            }
            for &(i, _) in &pivot_col {
                row_cols[i].remove(&c);
            }
            // The pivot row now only meets column c; dropping row r and
            // column c is a unimodular row clean-up followed by deletion.
            debug_assert!(row_cols[r].is_empty(), "stray entry in pivot row");
            row_alive[r] = false;
            col_alive[c] = false;
            cols[c].clear();
            ones += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..nrows).filter(|&i| row_alive[i] && !row_cols[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&j| col_alive[j] && !cols[j].is_empty()).collect();
    let mut factors = vec![BigInt::one(); ones];
    if !live_rows.is_empty() && !live_cols.is_empty() {
        let pos: std::collections::HashMap<usize, usize> = live_rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut dense = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (k, &j) in live_cols.iter().enumerate() {
            for &(i, v) in &cols[j] {
                dense.set(pos[&i], k, BigInt::from(v));
            }
        }
        factors.extend(invariant_factors(&dense));
    }
    factors
}

/// `a - k·b` on sorted sparse columns; `None` on overflow.
fn axpy_sparse(a: &[(usize, i64)], k: i64, b: &[(usize, i64)]) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let take_a = y >= b.len() || (x < a.len() && a[x].0 < b[y].0);
        let take_b = x >= a.len() || (y < b.len() && b[y].0 < a[x].0);
        if take_a {
            out.push(a[x]);
            x += 1;
        } else if take_b {
            out.push((b[y].0, k.checked_mul(b[y].1)?.checked_neg()?));
            y += 1;
        } else {
            let v = a[x].1.checked_sub(k.checked_mul(b[y].1)?)?;
            if v != 0 {
                out.push((a[x].0, v));
            }
            x += 1;
            y += 1;
        }
    }
    Some(out)
}

pub fn sparse_rank(m: &SparseMatrix) -> usize {
    sparse_invariant_factors(m).len()
}
