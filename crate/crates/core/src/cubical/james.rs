//! James complexes of a cubical set: the k-cells of the n-th complex are
//! pairs of an (n+k)-cell of the base with a choice of k retained
//! coordinate directions, modelling the codimension-n central subcubes.

use super::{binomial, rank_subset, unrank_subset, CubicalError, CubicalSet};

/// A retained-coordinate subset: `retained` is a strictly increasing list of
/// k directions out of `1..=ambient`. The number of projections with given
/// (ambient, k) is binomial(ambient, k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub ambient: usize,
    pub retained: Vec<usize>,
}

impl Projection {
    pub fn new(ambient: usize, retained: Vec<usize>) -> Projection {
        assert!(retained.windows(2).all(|w| w[0] < w[1]), "retained list must increase");
        assert!(
            retained.iter().all(|&i| 1 <= i && i <= ambient),
            "retained directions out of range"
        );
        Projection { ambient, retained }
    }

    /// The directions collapsed by the projection, in increasing order.
    pub fn collapsed(&self) -> Vec<usize> {
        (1..=self.ambient).filter(|d| !self.retained.contains(d)).collect()
    }
}

/// The n-th James complex of a base cubical set, truncated at `max_dim`.
/// Cells in degree k are pairs (base (n+k)-cell, projection retaining k of
/// n+k directions), indexed as `base_cell * binomial(n+k, k) + rank(retained)`.
///
/// The face `d_j^eps` of (c, retained = i_1 < .. < i_k) is
/// `(d_{i_j}^eps(c), retained minus i_j with larger entries shifted down)`,
/// the unique solution of the pull-back square defining the face maps.
#[derive(Clone, Debug)]
pub struct JamesComplex {
    set: CubicalSet,
    n: usize,
    /// binomial(n+k, k) per degree k.
    projections_per_degree: Vec<usize>,
}

impl JamesComplex {
    pub fn build(base: &CubicalSet, n: usize, max_dim: usize) -> Result<JamesComplex, CubicalError> {
        if base.max_dim() < n + max_dim {
            return Err(CubicalError::InsufficientBaseDimension {
                have: base.max_dim(),
                n,
                k_max: max_dim,
                needed: n + max_dim,
            });
        }
        let mut counts = Vec::with_capacity(max_dim + 1);
        let mut faces = Vec::with_capacity(max_dim + 1);
        let mut per_degree = Vec::with_capacity(max_dim + 1);
        for k in 0..=max_dim {
            let nk = binomial(n + k, k);
            per_degree.push(nk);
            let count = base.cell_count(n + k) * nk;
            counts.push(count);
            if k == 0 {
                faces.push(Vec::new());
                continue;
            }
            let prev_nk = binomial(n + k - 1, k - 1);
            let mut table = vec![0usize; count * 2 * k];
            for base_cell in 0..base.cell_count(n + k) {
                for lambda_rank in 0..nk {
                    let retained = unrank_subset(lambda_rank, k, n + k);
                    let cell = base_cell * nk + lambda_rank;
                    for j in 1..=k {
                        let ij = retained[j - 1];
                        let mut new_retained: Vec<usize> = Vec::with_capacity(k - 1);
                        for (t, &r) in retained.iter().enumerate() {
                            if t == j - 1 {
                                continue;
                            }
                            new_retained.push(if r > ij { r - 1 } else { r });
                        }
                        let new_rank = rank_subset(&new_retained, n + k - 1);
                        for eps in 0..2u8 {
                            let base_face = base.face(n + k, base_cell, ij, eps);
                            table[cell * 2 * k + 2 * (j - 1) + eps as usize] =
                                base_face * prev_nk + new_rank;
                        }
                    }
                }
            }
            faces.push(table);
        }
        Ok(JamesComplex {
            set: CubicalSet::from_parts(counts, faces),
            n,
            projections_per_degree: per_degree,
        })
    }

    /// The underlying cubical set.
    pub fn set(&self) -> &CubicalSet {
        &self.set
    }

    pub fn codimension(&self) -> usize {
        self.n
    }

    pub fn max_dim(&self) -> usize {
        self.set.max_dim()
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.set.cell_count(k)
    }

    /// The base cell a James cell projects to.
    pub fn project(&self, k: usize, cell: usize) -> usize {
        cell / self.projections_per_degree[k]
    }

    /// The projection (retained directions) of a James cell.
    pub fn projection(&self, k: usize, cell: usize) -> Projection {
        let rank = cell % self.projections_per_degree[k];
        Projection::new(self.n + k, unrank_subset(rank, k, self.n + k))
    }

    /// The level of a codimension-1 James cell: the single collapsed
    /// direction. Satisfies `level(d_i^eps c) = level(c)` for
    /// `i >= level(c)` and `level(c) - 1` otherwise.
    pub fn level(&self, k: usize, cell: usize) -> Result<usize, CubicalError> {
        if self.n != 1 {
            return Err(CubicalError::NotCodimensionOne { n: self.n });
        }
        let collapsed = self.projection(k, cell).collapsed();
        debug_assert_eq!(collapsed.len(), 1);
        Ok(collapsed[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::Rack;

    #[test]
    fn three_cube_has_three_central_squares() {
        // the single 3-cell of the standard 3-cube contributes three 2-cells
        let base = CubicalSet::cube(3);
        let j1 = JamesComplex::build(&base, 1, 2).unwrap();
        // base 3-cells: 1, so J^1 has 1 * binomial(3,2) = 3 top cells
        assert_eq!(j1.cell_count(2), 3);
        assert!(j1.set().validate().is_ok());
        // collapsed-direction notation: the three cells are c_(1), c_(2), c_(3)
        let mut levels: Vec<usize> = (0..3).map(|c| j1.level(2, c).unwrap()).collect();
        levels.sort();
        assert_eq!(levels, vec![1, 2, 3]);
    }

    #[test]
    fn dihedral_james_cell_count() {
        let d3 = Rack::dihedral(3).unwrap();
        let base = CubicalSet::rack_space(&d3, 3);
        let j1 = JamesComplex::build(&base, 1, 2).unwrap();
        assert_eq!(j1.cell_count(2), 27 * 3);
        assert!(j1.set().validate().is_ok());
    }

    #[test]
    fn face_reindexing_on_a_three_cube() {
        // for a 3-cube c, d_1^0(c, retained {1,3}) = (d_1^0 c, retained {2})
        let d2 = Rack::dihedral(2).unwrap();
        let base = CubicalSet::rack_space(&d2, 3);
        let j1 = JamesComplex::build(&base, 1, 2).unwrap();
        let base_cell = 5; // any 3-cell
        let lambda = rank_subset(&[1, 3], 3);
        let cell = base_cell * 3 + lambda;
        assert_eq!(j1.projection(2, cell).retained, vec![1, 3]);
        let face = j1.set().face(2, cell, 1, 0);
        assert_eq!(j1.project(1, face), base.face(3, base_cell, 1, 0));
        assert_eq!(j1.projection(1, face).retained, vec![2]);
    }

    #[test]
    fn cell_count_identity() {
        let d3 = Rack::dihedral(3).unwrap();
        let base = CubicalSet::rack_space(&d3, 4);
        for n in 1..=2usize {
            let j = JamesComplex::build(&base, n, 4 - n).unwrap();
            for k in 0..=(4 - n) {
                assert_eq!(
                    j.cell_count(k),
                    base.cell_count(n + k) * binomial(n + k, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn level_of_one_cube() {
        // J^1 of a 1-dimensional base: unique 0-cell per edge with level 1
        let t = Rack::trivial(1).unwrap();
        let base = CubicalSet::rack_space(&t, 1);
        let j1 = JamesComplex::build(&base, 1, 0).unwrap();
        assert_eq!(j1.cell_count(0), 1);
        assert_eq!(j1.level(0, 0).unwrap(), 1);
    }

    #[test]
    fn level_face_rule_exhaustive() {
        let d3 = Rack::dihedral(3).unwrap();
        let base = CubicalSet::rack_space(&d3, 3);
        let j1 = JamesComplex::build(&base, 1, 2).unwrap();
        for k in 1..=2usize {
            for cell in 0..j1.cell_count(k) {
                let level = j1.level(k, cell).unwrap();
                for i in 1..=k {
                    for eps in 0..2u8 {
                        let face = j1.set().face(k, cell, i, eps);
                        let face_level = j1.level(k - 1, face).unwrap();
                        let expected = if i >= level { level } else { level - 1 };
                        assert_eq!(face_level, expected, "cell {cell} dim {k} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn level_requires_codimension_one() {
        let d3 = Rack::dihedral(3).unwrap();
        let base = CubicalSet::rack_space(&d3, 3);
        let j2 = JamesComplex::build(&base, 2, 1).unwrap();
        assert!(matches!(j2.level(1, 0), Err(CubicalError::NotCodimensionOne { n: 2 })));
    }

    #[test]
    fn insufficient_base_dimension() {
        let d3 = Rack::dihedral(3).unwrap();
        let base = CubicalSet::rack_space(&d3, 2);
        assert!(matches!(
            JamesComplex::build(&base, 1, 3),
            Err(CubicalError::InsufficientBaseDimension { .. })
        ));
    }
}
