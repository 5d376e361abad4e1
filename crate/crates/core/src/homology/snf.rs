//! Sparse Smith normal form over the integers.
//!
//! Elimination with minimal-fill pivot selection: unit pivots are preferred
//! (they never grow entries), then smallest absolute value with a Markowitz
//! fill estimate as tiebreak. Non-unit pivots are handled by Euclidean
//! reduction of their row and column until exact elimination is possible.
//! Arbitrary-precision integers throughout; entry growth is real.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SparseIntMatrix;

/// Invariant factors `d1 | d2 | ... | dr` with `r = rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub rank: usize,
    /// All diagonal factors including 1s, in divisibility order.
    pub factors: Vec<BigInt>,
}

impl Snf {
    /// The factors exceeding 1, i.e. the torsion part of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }
}

/// Smith normal form with unimodular transforms:
/// `u * m * v` is diagonal with `factors` at positions (i, i), and
/// `u * u_inv = v * v_inv = identity`.
#[derive(Clone, Debug)]
pub struct SnfTransforms {
    pub rank: usize,
    pub factors: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

struct TransformState {
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

struct Work {
    rows: Vec<BTreeMap<usize, BigInt>>,
    /// For each column, the rows holding a nonzero entry.
    col_rows: Vec<BTreeSet<usize>>,
    /// (occupancy, column) for every selectable nonempty column.
    col_index: BTreeSet<(usize, usize)>,
    transforms: Option<TransformState>,
}

impl Work {
    fn new(m: &SparseIntMatrix, with_transforms: bool) -> Work {
        let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows()];
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
        for (r, c, v) in m.triplets() {
            rows[*r].insert(*c, v.clone());
            col_rows[*c].insert(*r);
        }
        let col_index = (0..m.cols())
            .filter(|c| !col_rows[*c].is_empty())
            .map(|c| (col_rows[c].len(), c))
            .collect();
        let transforms = with_transforms.then(|| TransformState {
            u: identity(m.rows()),
            u_inv: identity(m.rows()),
            v: identity(m.cols()),
            v_inv: identity(m.cols()),
        });
        Work { rows, col_rows, col_index, transforms }
    }

    fn entry(&self, r: usize, c: usize) -> Option<&BigInt> {
        self.rows[r].get(&c)
    }

    fn set_entry(&mut self, r: usize, c: usize, v: BigInt) {
        let old_len = self.col_rows[c].len();
        if v.is_zero() {
            if self.rows[r].remove(&c).is_some() {
                self.col_rows[c].remove(&r);
            }
        } else if self.rows[r].insert(c, v).is_none() {
            self.col_rows[c].insert(r);
        }
        let new_len = self.col_rows[c].len();
        if new_len != old_len {
            self.col_index.remove(&(old_len, c));
            if new_len > 0 {
                self.col_index.insert((new_len, c));
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_row: Vec<(usize, BigInt)> =
            self.rows[src].iter().map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in src_row {
            let cur = self.entry(dst, c).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(dst, c, cur - q * &v);
        }
        if let Some(t) = self.transforms.as_mut() {
            // U <- E U ; U_inv <- U_inv E^-1 with E: row[dst] -= q * row[src]
            let n = t.u.len();
            for j in 0..n {
                let delta = q * &t.u[src][j];
                t.u[dst][j] = &t.u[dst][j] - delta;
            }
            for i in 0..n {
                let delta = q * &t.u_inv[i][dst];
                t.u_inv[i][src] = &t.u_inv[i][src] + delta;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_col: Vec<usize> = self.col_rows[src].iter().copied().collect();
        for r in src_col {
            let v = self.rows[r].get(&src).cloned().expect("col_rows consistent");
            let cur = self.entry(r, dst).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(r, dst, cur - q * &v);
        }
        if let Some(t) = self.transforms.as_mut() {
            // V <- V F ; V_inv <- F^-1 V_inv with F: col[dst] -= q * col[src]
            let n = t.v.len();
            for i in 0..n {
                let delta = q * &t.v[i][src];
                t.v[i][dst] = &t.v[i][dst] - delta;
            }
            for j in 0..n {
                let delta = q * &t.v_inv[dst][j];
                t.v_inv[src][j] = &t.v_inv[src][j] + delta;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for v in self.rows[r].values_mut() {
            *v = -&*v;
        }
        if let Some(t) = self.transforms.as_mut() {
            for x in t.u[r].iter_mut() {
                *x = -&*x;
            }
            for i in 0..t.u_inv.len() {
                t.u_inv[i][r] = -&t.u_inv[i][r];
            }
        }
    }

    /// Makes the isolated pivot unselectable; the entry itself stays.
    fn retire(&mut self, c: usize) {
        self.col_index.remove(&(self.col_rows[c].len(), c));
    }

    /// Next pivot: prefer |v| = 1, then minimal Markowitz fill
    /// `(row_len - 1) * (col_len - 1)`, then minimal |v|. Columns are
    /// scanned in increasing occupancy with early exit once a unit pivot
    /// can no longer be beaten.
    fn select_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(bool, usize, BigInt, usize, usize)> = None;
        let mut cols_scanned = 0usize;
        for &(col_len, c) in &self.col_index {
            if let Some((false, bfill, ..)) = &best {
                // best is a unit pivot; denser columns can only do worse
                if *bfill <= col_len.saturating_sub(1) {
                    break;
                }
            }
            for &r in &self.col_rows[c] {
                let v = &self.rows[r][&c];
                let key =
                    (!v.abs().is_one(), (self.rows[r].len() - 1) * (col_len - 1), v.abs(), r, c);
                if best.as_ref().map_or(true, |b| key < *b) {
                    best = Some(key);
                }
            }
            cols_scanned += 1;
            if cols_scanned >= 32 && matches!(&best, Some((false, ..))) {
                break;
            }
        }
        best.map(|(_, _, _, r, c)| (r, c))
    }

    /// Isolates one pivot: Euclidean reduction of its column and row until
    /// exact elimination clears both. Returns the final pivot position.
    fn isolate_pivot(&mut self, mut pr: usize, mut pc: usize) -> (usize, usize) {
        loop {
            let pv = self.entry(pr, pc).expect("pivot present").clone();
            let col: Vec<usize> = self.col_rows[pc].iter().copied().filter(|r| *r != pr).collect();
            let mut moved = false;
            for r in col {
                let v = self.entry(r, pc).expect("consistent").clone();
                let (q, rem) = v.div_rem(&pv);
                self.row_op(r, pr, &q);
                if !rem.is_zero() {
                    // remainder is strictly smaller; continue from there
                    pr = r;
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            let pv = self.entry(pr, pc).expect("pivot present").clone();
            let row: Vec<usize> = self.rows[pr].keys().copied().filter(|c| *c != pc).collect();
            let mut moved = false;
            for c in row {
                let v = self.entry(pr, c).expect("consistent").clone();
                let (q, rem) = v.div_rem(&pv);
                self.col_op(c, pc, &q);
                if !rem.is_zero() {
                    pc = c;
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            if self.col_rows[pc].len() == 1 && self.rows[pr].len() == 1 {
                break;
            }
        }
        if self.entry(pr, pc).expect("pivot").sign() == num_bigint::Sign::Minus {
            self.negate_row(pr);
        }
        (pr, pc)
    }

    /// Restores `d1 | d2` for two isolated pivots, replacing their values by
    /// (gcd, lcm) through unimodular operations. Returns the new positions
    /// of the (gcd, lcm) pivots.
    fn fix_pair(
        &mut self,
        (r1, c1): (usize, usize),
        (r2, c2): (usize, usize),
    ) -> ((usize, usize), (usize, usize)) {
        // bring the second pivot value into column c1: col c1 += col c2
        self.col_op(c1, c2, &BigInt::from(-1));
        // Euclid on rows r1, r2 within column c1
        let (mut ra, mut rb) = (r1, r2);
        loop {
            let b = self.entry(rb, c1).cloned().unwrap_or_else(BigInt::zero);
            if b.is_zero() {
                break;
            }
            let a = self.entry(ra, c1).cloned().unwrap_or_else(BigInt::zero);
            let (q, _) = a.div_rem(&b);
            self.row_op(ra, rb, &q);
            std::mem::swap(&mut ra, &mut rb);
        }
        // ra holds g = gcd at c1; clear its possible entry at c2 (g divides it)
        if let Some(s) = self.entry(ra, c2).cloned() {
            let g = self.entry(ra, c1).expect("gcd pivot").clone();
            let q = s / g;
            self.col_op(c2, c1, &q);
        }
        if self.entry(ra, c1).expect("pivot").sign() == num_bigint::Sign::Minus {
            self.negate_row(ra);
        }
        if self.entry(rb, c2).expect("pivot").sign() == num_bigint::Sign::Minus {
            self.negate_row(rb);
        }
        debug_assert_eq!(self.rows[ra].len(), 1);
        debug_assert_eq!(self.rows[rb].len(), 1);
        ((ra, c1), (rb, c2))
    }
}

fn eliminate(m: &SparseIntMatrix, with_transforms: bool) -> (Vec<(usize, usize)>, Work) {
    let mut w = Work::new(m, with_transforms);
    let mut pivots = Vec::new();
    while let Some((pr, pc)) = w.select_pivot() {
        let (pr, pc) = w.isolate_pivot(pr, pc);
        w.retire(pc);
        pivots.push((pr, pc));
    }
    (pivots, w)
}

/// Sorted invariant factors obeying the divisibility chain: repeatedly
/// replaces a violating pair (a, b) by (gcd, lcm), which is the standard
/// unimodular move on a diagonal matrix.
fn divisibility_fixup(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let n = d.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                if !(&d[j] % &d[i]).is_zero() {
                    let g = d[i].gcd(&d[j]);
                    let l = (&d[i] / &g) * &d[j];
                    d[i] = g;
                    d[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d.sort();
    d
}

/// Invariant factors of `m` (including 1s) in divisibility order, plus the
/// rank. Exact integer arithmetic throughout.
pub fn smith_normal_form(m: &SparseIntMatrix) -> Snf {
    let (pivots, w) = eliminate(m, false);
    let values: Vec<BigInt> =
        pivots.iter().map(|(r, c)| w.entry(*r, *c).expect("pivot").clone()).collect();
    let factors = divisibility_fixup(values);
    Snf { rank: factors.len(), factors }
}

/// Smith normal form together with unimodular transforms `u`, `v` such that
/// `u * m * v = diag(factors)` (padded with zeros), plus their inverses.
pub fn smith_normal_form_with_transforms(m: &SparseIntMatrix) -> SnfTransforms {
    let (mut pivots, mut w) = eliminate(m, true);

    // enforce d_i | d_j for all i < j with explicit unimodular moves
    loop {
        let mut changed = false;
        for i in 0..pivots.len() {
            for j in i + 1..pivots.len() {
                let a = w.entry(pivots[i].0, pivots[i].1).expect("pivot").clone();
                let b = w.entry(pivots[j].0, pivots[j].1).expect("pivot").clone();
                if (&b % &a).is_zero() {
                    continue;
                }
                let (p1, p2) = w.fix_pair(pivots[i], pivots[j]);
                pivots[i] = p1;
                pivots[j] = p2;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let factors: Vec<BigInt> =
        pivots.iter().map(|(r, c)| w.entry(*r, *c).expect("pivot").clone()).collect();
    for win in factors.windows(2) {
        debug_assert!((&win[1] % &win[0]).is_zero(), "divisibility chain after fixup");
    }

    // Compose with permutations so pivot i lands at diagonal position (i, i).
    let t = w.transforms.take().expect("transforms requested");
    let (rows_n, cols_n) = (t.u.len(), t.v.len());
    let mut row_order: Vec<usize> = pivots.iter().map(|(r, _)| *r).collect();
    let mut seen_rows: Vec<bool> = {
        let mut s = vec![false; rows_n];
        for &r in &row_order {
            s[r] = true;
        }
        s
    };
    for r in 0..rows_n {
        if !seen_rows[r] {
            row_order.push(r);
            seen_rows[r] = true;
        }
    }
    let mut col_order: Vec<usize> = pivots.iter().map(|(_, c)| *c).collect();
    let mut seen_cols: Vec<bool> = {
        let mut s = vec![false; cols_n];
        for &c in &col_order {
            s[c] = true;
        }
        s
    };
    for c in 0..cols_n {
        if !seen_cols[c] {
            col_order.push(c);
            seen_cols[c] = true;
        }
    }
    // P U M V Q = D with P the row permutation, Q the column permutation.
    let u = row_order.iter().map(|&r| t.u[r].clone()).collect();
    let mut u_inv = vec![vec![BigInt::zero(); rows_n]; rows_n];
    for (new, &old) in row_order.iter().enumerate() {
        for i in 0..rows_n {
            u_inv[i][new] = t.u_inv[i][old].clone();
        }
    }
    let mut v = vec![vec![BigInt::zero(); cols_n]; cols_n];
    for (new, &old) in col_order.iter().enumerate() {
        for i in 0..cols_n {
            v[i][new] = t.v[i][old].clone();
        }
    }
    let v_inv = col_order.iter().map(|&c| t.v_inv[c].clone()).collect();

    SnfTransforms { rank: pivots.len(), factors, u, u_inv, v, v_inv }
}

/// Rank of `m` over GF(p) for a word-sized prime: a fast prepass for Betti
/// numbers. Always a lower bound for the integer rank, with equality unless
/// p divides a nonzero invariant factor; never a substitute for the exact
/// form when torsion is wanted.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    assert!(p > 1 && p < (1 << 31), "p must be a word-sized prime");
    let p_big = BigInt::from(p);
    let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m.rows()];
    for (r, c, v) in m.triplets() {
        let mv = v.mod_floor(&p_big).to_u64().expect("reduced value fits");
        if mv != 0 {
            rows[*r].insert(*c, mv);
        }
    }
    let mut rank = 0usize;
    let mut pivot_rows: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    for r in 0..rows.len() {
        let mut row = std::mem::take(&mut rows[r]);
        while let Some((&lead, &val)) = row.iter().next() {
            match pivot_rows.get(&lead) {
                Some(prow) => {
                    let pval = prow[&lead];
                    let factor = val as u128 * mod_inv(pval, p) as u128 % p as u128;
                    for (&c, &pv) in prow.clone().iter() {
                        let sub = (pv as u128 * factor % p as u128) as u64;
                        let cur = row.get(&c).copied().unwrap_or(0);
                        let nv = (cur + p - sub) % p;
                        if nv == 0 {
                            row.remove(&c);
                        } else {
                            row.insert(c, nv);
                        }
                    }
                }
                None => {
                    pivot_rows.insert(lead, row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a as u128;
    let mut exp = p - 2;
    let mut acc: u128 = 1;
    let m = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}
