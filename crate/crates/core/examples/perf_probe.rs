//! Timing probe for rack-space homology: builds the space of a dihedral
//! rack and reports how long the exact computation takes.
//!
//!     cargo run --release -p rackkit-core --example perf_probe -- 12 3

use std::time::Instant;

use rackkit_core::cubical::CubicalSet;
use rackkit_core::homology::{homology, ChainComplex};
use rackkit_core::rack::Rack;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let deg: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(3);
    let rack = Rack::dihedral(n).expect("n >= 1");
    let t0 = Instant::now();
    let set = CubicalSet::rack_space(&rack, deg + 1);
    println!("build space: {:?}", t0.elapsed());
    let t1 = Instant::now();
    let cc = ChainComplex::from_cubical(&set);
    println!("chain complex (incl. d.d = 0 check): {:?}", t1.elapsed());
    let t2 = Instant::now();
    let h = homology(&cc, deg).expect("built to deg + 1");
    println!("H_{deg} of the {n}-element dihedral rack space = {h}   in {:?}", t2.elapsed());
    println!("total: {:?}", t0.elapsed());
}
