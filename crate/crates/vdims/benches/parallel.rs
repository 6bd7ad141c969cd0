//! Parallel-vs-serial comparison of the data-parallel hot paths. With the
//! default `parallel` feature the same code runs inside a 1-thread and an
//! n-thread rayon pool; without it only the sequential path exists.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use vdims::case::{CaseSpec, R1Mode, R23Mode};
use vdims::diagram::{enumerate_diagrams, SkeletonKind};
use vdims::linalg::{rank_mod_p, SparseIntMatrix};
use vdims::polyak::{polyak_matrix, SignMode};
use vdims::relations::weight_matrix;

fn long_standard() -> CaseSpec {
    CaseSpec::new(SkeletonKind::Long, R23Mode::Standard, R1Mode::ModR1)
}

#[cfg(feature = "parallel")]
fn bench_both<F: Fn() + Sync>(c: &mut Criterion, name: &str, f: F) {
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let parallel = rayon::ThreadPoolBuilder::new().build().unwrap();
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    group.bench_function("serial", |b| b.iter(|| serial.install(&f)));
    group.bench_function(
        format!("parallel-{}", parallel.current_num_threads()),
        |b| b.iter(|| parallel.install(&f)),
    );
    group.finish();
}

#[cfg(not(feature = "parallel"))]
fn bench_both<F: Fn() + Sync>(c: &mut Criterion, name: &str, f: F) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    group.bench_function("sequential-fallback", |b| b.iter(&f));
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    bench_both(c, "enumerate/long-n5", || {
        let d = enumerate_diagrams(SkeletonKind::Long, 5, false);
        assert_eq!(d.len(), 30240);
    });
    bench_both(c, "enumerate/round-n4", || {
        let d = enumerate_diagrams(SkeletonKind::Round, 4, false);
        criterion::black_box(d);
    });
}

fn relation_rows(c: &mut Criterion) {
    let case = long_standard();
    bench_both(c, "rows/weight-long-n4", || {
        let wm = weight_matrix(&case, 4);
        criterion::black_box(wm.matrix.nnz());
    });
    bench_both(c, "rows/polyak-long-n3", || {
        let pm = polyak_matrix(&case, 3, SignMode::PositiveOnly);
        criterion::black_box(pm.matrix.nnz());
    });
}

fn rank(c: &mut Criterion) {
    let wm = weight_matrix(&long_standard(), 4);
    let matrix: SparseIntMatrix = wm.matrix;
    let mut group = c.benchmark_group("rank/weight-long-n4");
    group.sample_size(10);
    group.bench_function("mod-p", |b| {
        b.iter_batched(
            || matrix.clone(),
            |m| rank_mod_p(&m, 1_000_003).unwrap(),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(benches, enumeration, relation_rows, rank);
criterion_main!(benches);
