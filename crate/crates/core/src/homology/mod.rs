//! Exact integer chain complexes of cubical sets and their homology via
//! sparse Smith normal form, including coordinates of cycles in homology.

pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::cubical::CubicalSet;
use crate::rack::AbelianGroup;
use snf::{smith_normal_form, smith_normal_form_with_transforms, Snf, SnfTransforms};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("triplet ({row},{col}) out of bounds for {rows}x{cols} matrix")]
    TripletOutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("duplicate triplet at ({row},{col})")]
    DuplicateTriplet { row: usize, col: usize },
    #[error("homology in degree {degree} needs the complex built to dimension {needed}, have {have}")]
    InsufficientDimension { degree: usize, needed: usize, have: usize },
    #[error("chain is not a cycle: boundary has nonzero coefficient {value} on cell {cell}")]
    NotACycle { cell: usize, value: BigInt },
    #[error("chain length {got} does not match {expected} cells in degree {degree}")]
    BadChainLength { degree: usize, got: usize, expected: usize },
    #[error("matrix cache parse error at line {line}: {reason}")]
    CacheParse { line: usize, reason: String },
}

/// A sparse integer matrix stored as a sorted triplet list
/// (row, col, value), no explicit zeros, no duplicate positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> SparseIntMatrix {
        SparseIntMatrix { rows, cols, entries: Vec::new() }
    }

    /// Builds from triplets; zeros are dropped, duplicates rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, BigInt)>,
    ) -> Result<SparseIntMatrix, HomologyError> {
        triplets.retain(|(_, _, v)| !v.is_zero());
        for &(r, c, _) in &triplets {
            if r >= rows || c >= cols {
                return Err(HomologyError::TripletOutOfBounds { row: r, col: c, rows, cols });
            }
        }
        triplets.sort_by_key(|(r, c, _)| (*r, *c));
        for w in triplets.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(HomologyError::DuplicateTriplet { row: w[0].0, col: w[0].1 });
            }
        }
        Ok(SparseIntMatrix { rows, cols, entries: triplets })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = &(usize, usize, BigInt)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self * rhs`, exact. Row-major accumulation:
    /// `out[i] = sum_k self[i][k] * rhs[k]`.
    pub fn multiply(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut self_rows: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            self_rows[*r].push((*c, v));
        }
        let mut rhs_rows: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); rhs.rows];
        for (r, c, v) in &rhs.entries {
            rhs_rows[*r].push((*c, v));
        }
        let mut triplets = Vec::new();
        for (i, self_row) in self_rows.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, BigInt> =
                std::collections::BTreeMap::new();
            for (k, v) in self_row {
                for (j, w) in &rhs_rows[*k] {
                    let cur = acc.entry(*j).or_insert_with(BigInt::zero);
                    *cur += *v * *w;
                }
            }
            for (j, v) in acc {
                if !v.is_zero() {
                    triplets.push((i, j, v));
                }
            }
        }
        SparseIntMatrix { rows: self.rows, cols: rhs.cols, entries: triplets }
    }

    /// Applies the matrix to a dense integer vector.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for (r, c, v) in &self.entries {
            if !x[*c].is_zero() {
                out[*r] += v * &x[*c];
            }
        }
        out
    }

    /// Canonical text form: `m <rows> <cols>` then one `e <r> <c> <v>` line
    /// per entry, sorted by (row, col).
    pub fn to_cache_text(&self) -> String {
        let mut s = format!("m {} {}\n", self.rows, self.cols);
        for (r, c, v) in &self.entries {
            s.push_str(&format!("e {r} {c} {v}\n"));
        }
        s
    }

    pub fn from_cache_text(text: &str) -> Result<SparseIntMatrix, HomologyError> {
        let mut lines = text.lines().enumerate();
        let (rows, cols) = match lines.next() {
            Some((_, line)) => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 3 || parts[0] != "m" {
                    return Err(HomologyError::CacheParse {
                        line: 1,
                        reason: "expected `m <rows> <cols>`".into(),
                    });
                }
                let parse = |s: &str, line: usize| {
                    s.parse::<usize>().map_err(|_| HomologyError::CacheParse {
                        line,
                        reason: format!("bad integer `{s}`"),
                    })
                };
                (parse(parts[1], 1)?, parse(parts[2], 1)?)
            }
            None => {
                return Err(HomologyError::CacheParse { line: 1, reason: "empty input".into() })
            }
        };
        let mut triplets = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "e" {
                return Err(HomologyError::CacheParse {
                    line: i + 1,
                    reason: "expected `e <row> <col> <value>`".into(),
                });
            }
            let r: usize = parts[1].parse().map_err(|_| HomologyError::CacheParse {
                line: i + 1,
                reason: format!("bad row `{}`", parts[1]),
            })?;
            let c: usize = parts[2].parse().map_err(|_| HomologyError::CacheParse {
                line: i + 1,
                reason: format!("bad col `{}`", parts[2]),
            })?;
            let v: BigInt = parts[3].parse().map_err(|_| HomologyError::CacheParse {
                line: i + 1,
                reason: format!("bad value `{}`", parts[3]),
            })?;
            triplets.push((r, c, v));
        }
        SparseIntMatrix::from_triplets(rows, cols, triplets)
    }
}

/// The chain complex of a cubical set: exact integer boundary matrices
/// `boundary[k]` mapping k-chains to (k-1)-chains, bases in cell-index order.
///
/// The boundary of a k-cell c is `sum_{i=1..k} (-1)^i (f(i,0,c) - f(i,1,c))`;
/// `boundary . boundary = 0` is verified exactly at build time.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// `boundaries[k-1]` is the boundary from degree k, for 1 <= k <= max_dim.
    boundaries: Vec<SparseIntMatrix>,
    /// Cells per degree, 0..=max_dim.
    dims: Vec<usize>,
}

impl ChainComplex {
    /// Builds the boundary matrices of a cubical set and checks d.d = 0.
    ///
    /// Panics if the composite of consecutive boundaries is nonzero; that
    /// indicates a corrupt face table, not a user error.
    pub fn from_cubical(set: &CubicalSet) -> ChainComplex {
        let dims: Vec<usize> = (0..=set.max_dim()).map(|k| set.cell_count(k)).collect();
        let mut boundaries = Vec::new();
        for k in 1..=set.max_dim() {
            let rows = dims[k - 1];
            let cols = dims[k];
            let mut acc: std::collections::BTreeMap<(usize, usize), BigInt> =
                std::collections::BTreeMap::new();
            for cell in 0..cols {
                let mut sign = BigInt::from(1);
                for i in 1..=k {
                    sign = -sign; // (-1)^i
                    let f0 = set.face(k, cell, i, 0);
                    let f1 = set.face(k, cell, i, 1);
                    *acc.entry((f0, cell)).or_insert_with(BigInt::zero) += &sign;
                    *acc.entry((f1, cell)).or_insert_with(BigInt::zero) -= &sign;
                }
            }
            let triplets: Vec<(usize, usize, BigInt)> =
                acc.into_iter().map(|((r, c), v)| (r, c, v)).collect();
            boundaries.push(
                SparseIntMatrix::from_triplets(rows, cols, triplets).expect("boundary triplets"),
            );
        }
        for k in 1..boundaries.len() {
            let composite = boundaries[k - 1].multiply(&boundaries[k]);
            assert!(
                composite.is_zero(),
                "boundary of boundary is nonzero in degree {}: face table is corrupt",
                k + 1
            );
        }
        ChainComplex { boundaries, dims }
    }

    /// Rebuilds a complex from stored boundary matrices (degree 1 upward),
    /// checking shapes and that consecutive composites vanish.
    pub fn from_boundaries(boundaries: Vec<SparseIntMatrix>) -> Result<ChainComplex, HomologyError> {
        let mut dims = Vec::with_capacity(boundaries.len() + 1);
        if let Some(first) = boundaries.first() {
            dims.push(first.rows());
        } else {
            dims.push(1);
        }
        for b in &boundaries {
            dims.push(b.cols());
        }
        for k in 1..boundaries.len() {
            if boundaries[k].rows() != boundaries[k - 1].cols() {
                return Err(HomologyError::CacheParse {
                    line: 0,
                    reason: format!(
                        "boundary {} has {} rows but boundary {} has {} columns",
                        k + 1,
                        boundaries[k].rows(),
                        k,
                        boundaries[k - 1].cols()
                    ),
                });
            }
            let composite = boundaries[k - 1].multiply(&boundaries[k]);
            if !composite.is_zero() {
                return Err(HomologyError::CacheParse {
                    line: 0,
                    reason: format!("composite of boundaries {} and {} is nonzero", k, k + 1),
                });
            }
        }
        Ok(ChainComplex { boundaries, dims })
    }

    pub fn max_dim(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.dims[k]
    }

    /// The boundary matrix out of degree k (1 <= k <= max_dim).
    pub fn boundary(&self, k: usize) -> &SparseIntMatrix {
        &self.boundaries[k - 1]
    }
}

/// A homology group in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    /// Invariant factors d1 | d2 | ..., all >= 2, ascending.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::new(self.rank, self.torsion.clone())
    }

    /// Machine format `r;d1,d2,...` on one line.
    pub fn machine_format(&self) -> String {
        self.group().machine_format()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group())
    }
}

/// Homology of the complex in degree k: rank is
/// `dim C_k - rank d_k - rank d_{k+1}`, torsion the invariant factors of
/// `d_{k+1}` exceeding 1. Requires the complex built to dimension k+1;
/// silent truncation would produce wrong Betti numbers, so shallower
/// complexes are an error.
pub fn homology(cc: &ChainComplex, k: usize) -> Result<HomologyGroup, HomologyError> {
    if cc.max_dim() < k + 1 {
        return Err(HomologyError::InsufficientDimension {
            degree: k,
            needed: k + 1,
            have: cc.max_dim(),
        });
    }
    let rank_out = if k == 0 { 0 } else { smith_normal_form(cc.boundary(k)).rank };
    let snf_in: Snf = smith_normal_form(cc.boundary(k + 1));
    let rank = cc.cell_count(k) - rank_out - snf_in.rank;
    Ok(HomologyGroup { degree: k, rank, torsion: snf_in.torsion() })
}

/// Coordinates of a homology class in the decomposition
/// `Z^rank + sum Z/d_i`: free coordinates first, then one coordinate per
/// torsion factor, reduced into `[0, d_i)`.
///
/// The basis is pinned by the Smith normal form transforms of the two
/// boundary maps, so equal classes get identical coordinates and chains
/// differing by a boundary map to the same coordinates. The basis itself is
/// an implementation artifact of the elimination order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for ClassCoordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<String> =
            self.free.iter().chain(self.torsion.iter()).map(|v| v.to_string()).collect();
        write!(f, "[{}]", all.join(", "))
    }
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|v| v.is_zero()) && self.torsion.iter().all(|v| v.is_zero())
    }
}

/// Precomputed data for mapping k-cycles to homology coordinates: the
/// kernel basis of `d_k` (through the SNF column transform) and the Smith
/// form of `d_{k+1}` expressed in that basis.
pub struct CycleClassifier {
    degree: usize,
    group: HomologyGroup,
    n_k: usize,
    /// Rows `rank(d_k)..n_k` of `v_inv` for `d_k`: kernel coordinates.
    kernel_rows: Vec<Vec<BigInt>>,
    /// `u` of the SNF of the boundary-in matrix written in kernel coordinates.
    quotient_u: Vec<Vec<BigInt>>,
    quotient_rank: usize,
    quotient_factors: Vec<BigInt>,
    boundary_out: Option<SparseIntMatrix>,
}

impl CycleClassifier {
    pub fn new(cc: &ChainComplex, k: usize) -> Result<CycleClassifier, HomologyError> {
        if cc.max_dim() < k + 1 {
            return Err(HomologyError::InsufficientDimension {
                degree: k,
                needed: k + 1,
                have: cc.max_dim(),
            });
        }
        let n_k = cc.cell_count(k);
        let (kernel_rows, boundary_out): (Vec<Vec<BigInt>>, _) = if k == 0 {
            (identity_rows(n_k), None)
        } else {
            let t: SnfTransforms = smith_normal_form_with_transforms(cc.boundary(k));
            let rows = (t.rank..n_k).map(|i| t.v_inv[i].clone()).collect();
            (rows, Some(cc.boundary(k).clone()))
        };
        // boundary-in expressed in kernel coordinates
        let b_in = cc.boundary(k + 1);
        let kernel_dim = kernel_rows.len();
        let mut triplets = Vec::new();
        // columns of b_in are cycles, so only kernel rows of v_inv * b_in survive
        let mut b_cols: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); b_in.cols()];
        for (r, c, v) in b_in.triplets() {
            b_cols[*c].push((*r, v.clone()));
        }
        for (c, col) in b_cols.iter().enumerate() {
            for (i, krow) in kernel_rows.iter().enumerate() {
                let mut acc = BigInt::zero();
                for (r, v) in col {
                    if !krow[*r].is_zero() {
                        acc += &krow[*r] * v;
                    }
                }
                if !acc.is_zero() {
                    triplets.push((i, c, acc));
                }
            }
        }
        let b_prime = SparseIntMatrix::from_triplets(kernel_dim, b_in.cols(), triplets)
            .expect("kernel-coordinate boundary");
        let tq = smith_normal_form_with_transforms(&b_prime);
        let rank = kernel_dim - tq.rank;
        let torsion: Vec<BigInt> =
            tq.factors.iter().filter(|d| **d > BigInt::from(1)).cloned().collect();
        let group = HomologyGroup { degree: k, rank, torsion };
        Ok(CycleClassifier {
            degree: k,
            group,
            n_k,
            kernel_rows,
            quotient_u: tq.u,
            quotient_rank: tq.rank,
            quotient_factors: tq.factors,
            boundary_out,
        })
    }

    pub fn group(&self) -> &HomologyGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Maps a cycle (dense coefficient vector over the degree-k cells) to
    /// its homology coordinates. Rejects chains that are not cycles, with
    /// the first offending boundary cell as witness.
    pub fn coordinates(&self, chain: &[BigInt]) -> Result<ClassCoordinates, HomologyError> {
        if chain.len() != self.n_k {
            return Err(HomologyError::BadChainLength {
                degree: self.degree,
                got: chain.len(),
                expected: self.n_k,
            });
        }
        if let Some(b_out) = &self.boundary_out {
            let bd = b_out.apply(chain);
            if let Some((cell, value)) = bd.iter().enumerate().find(|(_, v)| !v.is_zero()) {
                return Err(HomologyError::NotACycle { cell, value: value.clone() });
            }
        }
        // kernel coordinates, then the SNF basis of the quotient
        let kcoords: Vec<BigInt> = self
            .kernel_rows
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for (i, v) in chain.iter().enumerate() {
                    if !v.is_zero() {
                        acc += &row[i] * v;
                    }
                }
                acc
            })
            .collect();
        let y: Vec<BigInt> = self
            .quotient_u
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for (i, v) in kcoords.iter().enumerate() {
                    if !v.is_zero() {
                        acc += &row[i] * v;
                    }
                }
                acc
            })
            .collect();
        let mut torsion = Vec::new();
        for i in 0..self.quotient_rank {
            let d = &self.quotient_factors[i];
            if *d > BigInt::from(1) {
                torsion.push(y[i].mod_floor(d));
            }
        }
        let free: Vec<BigInt> = y[self.quotient_rank..].to_vec();
        debug_assert_eq!(free.len(), self.group.rank);
        Ok(ClassCoordinates { free, torsion })
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n).map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() }).collect()
        })
        .collect()
}
