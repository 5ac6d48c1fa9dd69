use criterion::{black_box, criterion_group, criterion_main, Criterion};

use pbdom_core::corpus;
use pbdom_core::diagram::{reconstruct_and_verify, verify_pba_roundtrip};
use pbdom_core::domain::{check_def31, check_prop42};
use pbdom_core::lattice::{partition_lattice, poset_iso};
use pbdom_core::orient::enumerate_orientations;
use pbdom_core::pba::sub;

fn lattices(c: &mut Criterion) {
    c.bench_function("partition_lattice(5)", |b| {
        b.iter(|| partition_lattice(black_box(5)).unwrap())
    });
    let p5 = partition_lattice(5).unwrap();
    c.bench_function("poset_iso Π_5", |b| {
        b.iter(|| poset_iso(&p5, &p5).unwrap())
    });
}

fn recognisers(c: &mut Criterion) {
    let d5 = partition_lattice(5).unwrap().dual();
    c.bench_function("check_def31 dual Π_5", |b| b.iter(|| check_def31(&d5)));
    c.bench_function("check_prop42 dual Π_5", |b| b.iter(|| check_prop42(&d5)));
}

fn reconstruction(c: &mut Criterion) {
    let d4 = partition_lattice(4).unwrap().dual();
    let o = enumerate_orientations(&d4).next().unwrap();
    c.bench_function("reconstruct dual Π_4", |b| {
        b.iter(|| reconstruct_and_verify(&d4, &o).unwrap())
    });
    let sixteen = corpus::pba("sixteen").unwrap();
    c.bench_function("sub(2^4)", |b| b.iter(|| sub(&sixteen).unwrap()));
    c.bench_function("colim(PBoolD(2^4)) roundtrip", |b| {
        b.iter(|| verify_pba_roundtrip(&sixteen).unwrap())
    });
}

criterion_group!(benches, lattices, recognisers, reconstruction);
criterion_main!(benches);
