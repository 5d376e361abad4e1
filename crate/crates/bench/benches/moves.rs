use criterion::{criterion_group, criterion_main, Criterion};

use rackkit_core::cobordism::{canonical_form, reduce, LabelledDiagram, Move, RackH2};
use rackkit_core::diagram::{GapRef, LinkDiagram};
use rackkit_core::rack::{HomSearchMode, Rack};

fn trefoil() -> LabelledDiagram {
    let diagram = LinkDiagram::parse_gauss("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
    let rack = Rack::dihedral(3).unwrap();
    let labelling = diagram.colorings(&rack, HomSearchMode::List).labellings.unwrap().remove(0);
    LabelledDiagram::new(diagram, rack, &labelling).unwrap()
}

fn bench_cycle_class(c: &mut Criterion) {
    let ld = trefoil();
    let h2 = RackH2::new(ld.rack());
    c.bench_function("cycle_class_trefoil", |b| b.iter(|| h2.class_of(&ld).unwrap()));
}

fn bench_canonical_form(c: &mut Criterion) {
    let ld = trefoil()
        .apply_move(&Move::R11Plus { gap: GapRef { component: 0, gap: 0 }, first_sign: 1 })
        .unwrap();
    c.bench_function("canonical_form_8_passages", |b| b.iter(|| canonical_form(&ld)));
}

fn bench_reduce(c: &mut Criterion) {
    let ld = trefoil()
        .apply_move(&Move::R11Plus { gap: GapRef { component: 0, gap: 0 }, first_sign: 1 })
        .unwrap();
    c.bench_function("reduce_kinked_trefoil_200", |b| b.iter(|| reduce(&ld, 200, false)));
}

fn bench_colorings(c: &mut Criterion) {
    let diagram = LinkDiagram::parse_gauss("O1+ U2+ O3- U4- O2+ U1+ O4- U3-").unwrap();
    let rack = Rack::dihedral(7).unwrap();
    c.bench_function("colorings_fig8_d7", |b| {
        b.iter(|| diagram.colorings(&rack, HomSearchMode::Count).count)
    });
}

criterion_group!(benches, bench_cycle_class, bench_canonical_form, bench_reduce, bench_colorings);
criterion_main!(benches);
