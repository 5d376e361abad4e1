//! Rack-theoretic invariants of knots, links and virtual links: finite
//! racks and their axioms, the cubical rack space and its James complexes,
//! exact integer homology via sparse Smith normal form, diagram parsing and
//! coloring counts, and the degree-2 cycle class that classifies framed
//! virtual links up to cobordism.

pub mod cobordism;
pub mod cubical;
pub mod diagram;
pub mod homology;
pub mod rack;

pub use cobordism::{
    canonical_form, enumerate_moves, reduce, CycleClass, LabelledDiagram, Move, MoveError,
    MoveOptions, RackH2, ReduceReport,
};
pub use cubical::james::{JamesComplex, Projection};
pub use cubical::{CubicalError, CubicalSet, CubicalViolation};
pub use diagram::{
    Arcs, Colorings, Crossing, CrossingKind, DiagramError, GapRef, Labelling, LinkDiagram,
    Passage, Role,
};
pub use homology::{
    homology, ChainComplex, ClassCoordinates, CycleClassifier, HomologyError, HomologyGroup,
    SparseIntMatrix,
};
pub use rack::{
    check_rack_axioms, enumerate_homs, AbelianGroup, AxiomViolation, HomSearch, HomSearchMode,
    PresentedRack, Rack, RackError, RackKind,
};
