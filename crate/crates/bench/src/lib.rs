//! Shared builders for the benchmark targets.

use rackkit_core::cubical::CubicalSet;
use rackkit_core::homology::{ChainComplex, SparseIntMatrix};
use rackkit_core::rack::Rack;

/// The boundary matrix out of the given degree for a dihedral rack space.
pub fn dihedral_boundary(n: usize, degree: usize) -> SparseIntMatrix {
    let rack = Rack::dihedral(n).expect("n >= 1");
    let set = CubicalSet::rack_space(&rack, degree);
    let cc = ChainComplex::from_cubical(&set);
    cc.boundary(degree).clone()
}
