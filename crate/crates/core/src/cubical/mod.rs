//! Finite truncated cubical sets with validated face structure: the rack
//! space of a finite rack, its extended (covering) variant, the standard
//! n-cube, and the associated James complexes.

pub mod james;

use thiserror::Error;

use crate::rack::Rack;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CubicalError {
    #[error("cubical cache parse error at line {line}: {reason}")]
    CacheParse { line: usize, reason: String },
    #[error("base set has dimension {have}, but codimension {n} with top degree {k_max} needs {needed}")]
    InsufficientBaseDimension { have: usize, n: usize, k_max: usize, needed: usize },
    #[error("cell is not from a codimension-1 James complex (n = {n})")]
    NotCodimensionOne { n: usize },
}

/// A violation of the cubical identity, with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalViolation {
    pub dim: usize,
    pub cell: usize,
    pub i: usize,
    pub j: usize,
    pub eps: u8,
    pub omega: u8,
}

impl std::fmt::Display for CubicalViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cubical identity fails on {}-cell {} at i={}, j={}, eps={}, omega={}",
            self.dim, self.cell, self.i, self.j, self.eps, self.omega
        )
    }
}

/// A finite truncated cubical set: anonymous cells indexed `0..count` in
/// each dimension, with explicit codimension-1 face tables. Deeper faces
/// are composites, which the cubical identity makes unambiguous.
///
/// Face layout: `faces[k][cell * 2k + 2(i-1) + eps]` is the index of the
/// (k-1)-cell `d_i^eps(cell)`, for directions `1 <= i <= k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalSet {
    counts: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

impl CubicalSet {
    /// Builds from explicit cell counts and face tables. `faces[0]` is the
    /// (empty) table for dimension 0 and is not inspected.
    pub fn from_parts(counts: Vec<usize>, faces: Vec<Vec<usize>>) -> CubicalSet {
        assert_eq!(counts.len(), faces.len(), "counts and face tables disagree");
        for k in 1..counts.len() {
            assert_eq!(faces[k].len(), counts[k] * 2 * k, "face table size in dim {k}");
            for &t in &faces[k] {
                assert!(t < counts[k - 1], "face target out of range in dim {k}");
            }
        }
        CubicalSet { counts, faces }
    }

    pub fn max_dim(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn cell_count(&self, k: usize) -> usize {
        if k < self.counts.len() {
            self.counts[k]
        } else {
            0
        }
    }

    /// `d_i^eps(cell)` for a k-cell, `1 <= i <= k`, `eps` 0 or 1.
    #[inline]
    pub fn face(&self, k: usize, cell: usize, i: usize, eps: u8) -> usize {
        debug_assert!(1 <= i && i <= k);
        self.faces[k][cell * 2 * k + 2 * (i - 1) + eps as usize]
    }

    /// The rack space of a finite rack, truncated at `max_dim`: k-cells are
    /// the k-tuples over the rack (lexicographically indexed),
    /// `d_i^0` deletes coordinate i, and `d_i^1` deletes it after acting on
    /// all earlier coordinates:
    /// `d_i^1(x_1,..,x_k) = (x_1^{x_i},..,x_{i-1}^{x_i},x_{i+1},..,x_k)`.
    pub fn rack_space(rack: &Rack, max_dim: usize) -> CubicalSet {
        let n = rack.size();
        let mut counts = Vec::with_capacity(max_dim + 1);
        let mut faces = Vec::with_capacity(max_dim + 1);
        counts.push(1);
        faces.push(Vec::new());
        let mut tuple = Vec::new();
        for k in 1..=max_dim {
            let count = n.pow(k as u32);
            let mut table = vec![0usize; count * 2 * k];
            for cell in 0..count {
                decode_tuple(cell, k, n, &mut tuple);
                for i in 1..=k {
                    let xi = tuple[i - 1];
                    let mut f0 = 0usize;
                    let mut f1 = 0usize;
                    for (t, &x) in tuple.iter().enumerate() {
                        if t == i - 1 {
                            continue;
                        }
                        f0 = f0 * n + x;
                        f1 = f1 * n + if t < i - 1 { rack.op(x, xi) } else { x };
                    }
                    table[cell * 2 * k + 2 * (i - 1)] = f0;
                    table[cell * 2 * k + 2 * (i - 1) + 1] = f1;
                }
            }
            counts.push(count);
            faces.push(table);
        }
        CubicalSet { counts, faces }
    }

    /// The extended rack space, truncated at `max_dim`: m-cells are tuples
    /// `(x; x_1,..,x_m)`, faces act like the rack-space faces of the
    /// (m+1)-tuple `(x, x_1,..,x_m)` in directions 2..m+1. Its homology is
    /// that of the rack space shifted down one degree.
    pub fn extended_rack_space(rack: &Rack, max_dim: usize) -> CubicalSet {
        let n = rack.size();
        let mut counts = Vec::with_capacity(max_dim + 1);
        let mut faces = Vec::with_capacity(max_dim + 1);
        counts.push(n);
        faces.push(Vec::new());
        let mut tuple = Vec::new();
        for m in 1..=max_dim {
            let count = n.pow((m + 1) as u32);
            let mut table = vec![0usize; count * 2 * m];
            for cell in 0..count {
                // tuple = (x, x_1, .., x_m), lexicographic
                decode_tuple(cell, m + 1, n, &mut tuple);
                for j in 1..=m {
                    let xj = tuple[j];
                    let mut f0 = 0usize;
                    let mut f1 = 0usize;
                    for (t, &x) in tuple.iter().enumerate() {
                        if t == j {
                            continue;
                        }
                        f0 = f0 * n + x;
                        f1 = f1 * n + if t < j { rack.op(x, xj) } else { x };
                    }
                    table[cell * 2 * m + 2 * (j - 1)] = f0;
                    table[cell * 2 * m + 2 * (j - 1) + 1] = f1;
                }
            }
            counts.push(count);
            faces.push(table);
        }
        CubicalSet { counts, faces }
    }

    /// The standard n-cube as a cubical set: k-cells are pairs of a k-subset
    /// of free directions and a 0/1 assignment on the rest; faces pin a free
    /// direction to a constant.
    pub fn cube(n: usize) -> CubicalSet {
        let mut counts = Vec::with_capacity(n + 1);
        let mut faces = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let nk = binomial(n, k);
            let count = nk << (n - k);
            counts.push(count);
            if k == 0 {
                faces.push(Vec::new());
                continue;
            }
            let mut table = vec![0usize; count * 2 * k];
            for s_rank in 0..nk {
                let free = unrank_subset(s_rank, k, n);
                for bits in 0..(1usize << (n - k)) {
                    let cell = s_rank << (n - k) | bits;
                    for i in 1..=k {
                        for eps in 0..2u8 {
                            // remove free[i-1], insert eps into the assignment
                            let removed = free[i - 1];
                            let mut new_free = free.clone();
                            new_free.remove(i - 1);
                            // assignment bits are ordered by the sorted complement
                            let mut fixed: Vec<usize> =
                                (1..=n).filter(|d| !free.contains(d)).collect();
                            let mut assignment: Vec<u8> = (0..n - k)
                                .map(|t| ((bits >> (n - k - 1 - t)) & 1) as u8)
                                .collect();
                            let pos = fixed.iter().position(|&d| d > removed).unwrap_or(fixed.len());
                            fixed.insert(pos, removed);
                            assignment.insert(pos, eps);
                            let new_bits = assignment
                                .iter()
                                .fold(0usize, |acc, &b| (acc << 1) | b as usize);
                            let target = rank_subset(&new_free, n) << (n - k + 1) | new_bits;
                            table[cell * 2 * k + 2 * (i - 1) + eps as usize] = target;
                        }
                    }
                }
            }
            faces.push(table);
        }
        CubicalSet { counts, faces }
    }

    /// Verifies the cubical identity
    /// `d_{j-1}^omega . d_i^eps = d_i^eps . d_j^omega` for all `i < j` on
    /// every cell, reporting each violation with its witness.
    pub fn validate(&self) -> Result<(), Vec<CubicalViolation>> {
        let mut violations = Vec::new();
        for k in 2..=self.max_dim() {
            for cell in 0..self.cell_count(k) {
                for i in 1..=k {
                    for j in (i + 1)..=k {
                        for eps in 0..2u8 {
                            for omega in 0..2u8 {
                                let lhs = self.face(k - 1, self.face(k, cell, i, eps), j - 1, omega);
                                let rhs = self.face(k - 1, self.face(k, cell, j, omega), i, eps);
                                if lhs != rhs {
                                    violations.push(CubicalViolation {
                                        dim: k,
                                        cell,
                                        i,
                                        j,
                                        eps,
                                        omega,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Checks that mapping `(x; x1,..,xm) -> (x, x1,..,xm)` from the
    /// extended rack space into the rack space intertwines faces:
    /// `iota . d_j^eps = d_{j+1}^eps . iota`. With lexicographic indexing
    /// the injection is the identity on indices.
    pub fn extended_injects_into(extended: &CubicalSet, base: &CubicalSet) -> bool {
        let d = extended.max_dim();
        if base.max_dim() < d + 1 {
            return false;
        }
        for m in 1..=d {
            if extended.cell_count(m) != base.cell_count(m + 1) {
                return false;
            }
            for cell in 0..extended.cell_count(m) {
                for j in 1..=m {
                    for eps in 0..2u8 {
                        if extended.face(m, cell, j, eps) != base.face(m + 1, cell, j + 1, eps) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Canonical cache text: header `CUBSET v1 dims=<d>`, per dimension a
    /// line `<k> <count>`, then `f <cell> <i> <eps> <target>` face records
    /// in ascending (cell, i, eps) order.
    pub fn to_cache_text(&self) -> String {
        let mut s = format!("CUBSET v1 dims={}\n", self.max_dim());
        for k in 0..=self.max_dim() {
            s.push_str(&format!("{} {}\n", k, self.cell_count(k)));
            for cell in 0..self.cell_count(k) {
                for i in 1..=k {
                    for eps in 0..2u8 {
                        s.push_str(&format!("f {cell} {i} {eps} {}\n", self.face(k, cell, i, eps)));
                    }
                }
            }
        }
        s
    }

    pub fn from_cache_text(text: &str) -> Result<CubicalSet, CubicalError> {
        let mut lines = text.lines().enumerate().peekable();
        let err = |line: usize, reason: &str| CubicalError::CacheParse {
            line: line + 1,
            reason: reason.to_string(),
        };
        let (first_no, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
        let dims: usize = header
            .strip_prefix("CUBSET v1 dims=")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| err(first_no, "expected `CUBSET v1 dims=<d>`"))?;
        let mut counts = Vec::with_capacity(dims + 1);
        let mut faces = Vec::with_capacity(dims + 1);
        for k in 0..=dims {
            let (no, line) = lines.next().ok_or_else(|| err(0, "missing dimension line"))?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 || parts[0] != k.to_string() {
                return Err(err(no, &format!("expected `{k} <count>`")));
            }
            let count: usize =
                parts[1].parse().map_err(|_| err(no, &format!("bad count `{}`", parts[1])))?;
            counts.push(count);
            let mut table = vec![usize::MAX; count * 2 * k];
            for _ in 0..count * 2 * k {
                let (no, line) = lines.next().ok_or_else(|| err(0, "missing face record"))?;
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 5 || parts[0] != "f" {
                    return Err(err(no, "expected `f <cell> <i> <eps> <target>`"));
                }
                let nums: Vec<usize> = parts[1..]
                    .iter()
                    .map(|s| s.parse().map_err(|_| err(no, &format!("bad integer `{s}`"))))
                    .collect::<Result<_, _>>()?;
                let (cell, i, eps, target) = (nums[0], nums[1], nums[2], nums[3]);
                if cell >= count || i < 1 || i > k || eps > 1 {
                    return Err(err(no, "face record out of range"));
                }
                if k == 0 || target >= counts[k - 1] {
                    return Err(err(no, "face target out of range"));
                }
                let slot = cell * 2 * k + 2 * (i - 1) + eps;
                if table[slot] != usize::MAX {
                    return Err(err(no, "duplicate face record"));
                }
                table[slot] = target;
            }
            faces.push(table);
        }
        if let Some((no, _)) = lines.next() {
            return Err(err(no, "trailing data"));
        }
        Ok(CubicalSet { counts, faces })
    }
}

/// Decodes `index` as a k-tuple over `0..n`, first coordinate most
/// significant (lexicographic order).
pub(crate) fn decode_tuple(index: usize, k: usize, n: usize, out: &mut Vec<usize>) {
    out.clear();
    out.resize(k, 0);
    let mut rem = index;
    for t in (0..k).rev() {
        out[t] = rem % n;
        rem /= n;
    }
}

#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn encode_tuple(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * n + x)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lexicographic rank of a strictly increasing k-subset of `{1..n}`.
pub(crate) fn rank_subset(subset: &[usize], n: usize) -> usize {
    let k = subset.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (t, &s) in subset.iter().enumerate() {
        for v in prev + 1..s {
            rank += binomial(n - v, k - t - 1);
        }
        prev = s;
    }
    rank
}

/// Inverse of `rank_subset`: the k-subset of `{1..n}` of given rank.
pub(crate) fn unrank_subset(mut rank: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut v = 1usize;
    for t in 0..k {
        loop {
            let block = binomial(n - v, k - t - 1);
            if rank < block {
                out.push(v);
                v += 1;
                break;
            }
            rank -= block;
            v += 1;
        }
    }
    out
}
