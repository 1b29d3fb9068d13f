use criterion::{black_box, criterion_group, criterion_main, Criterion};
use kbraid_core::coloring::propagate_colors;
use kbraid_core::vssb::{check_phi_well_defined, Family, PhiCheckOptions};
use kbraid_core::*;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for (m, k) in [(2, 3), (3, 3)] {
        g.bench_function(format!("m{m}_k{k}"), |b| {
            b.iter(|| enumerate_kbiquandles(black_box(m), black_box(k), true).unwrap())
        });
    }
    g.finish();
}

fn word_problem(c: &mut Criterion) {
    let abcd2 = FreeKBraidWord::parse(
        4,
        3,
        "a{1,2,3} a{1,2,4} a{1,3,4} a{2,3,4} a{1,2,3} a{1,2,4} a{1,3,4} a{2,3,4}",
    )
    .unwrap();
    let e = FreeKBraidWord::identity(4, 3).unwrap();
    c.bench_function("equal_bounded/abcd_squared", |b| {
        b.iter(|| equal_bounded(black_box(&abcd2), &e, SearchBudget::default()).unwrap())
    });
}

fn coloring(c: &mut Criterion) {
    let w = FreeKBraidWord::parse(
        5,
        3,
        "a{1,2,3} a{2,4,5} a{1,3,5} a{1,2,4} a{3,4,5} a{1,2,3} a{2,3,4} a{1,4,5}",
    )
    .unwrap();
    let b = conditional_involution(
        &Involution::new(3, &[(0, 1)]).unwrap(),
        &MultiplicitySet::new(3, 1, [vec![1], vec![3]]).unwrap(),
        3,
    )
    .unwrap();
    c.bench_function("propagate/n5_len8", |bench| {
        bench.iter(|| propagate_colors(black_box(&w), &b, &[0, 1, 2, 0, 1]).unwrap())
    });
    c.bench_function("count_colorings/n5_len8", |bench| {
        bench.iter(|| count_colorings(black_box(&w), &b).unwrap())
    });
}

fn vssb(c: &mut Criterion) {
    let mut g = c.benchmark_group("vssb");
    g.sample_size(10);
    g.bench_function("verify_v_n4", |b| {
        b.iter(|| check_phi_well_defined(4, Family::V, PhiCheckOptions::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, enumeration, word_problem, coloring, vssb);
criterion_main!(benches);
