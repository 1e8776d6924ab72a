use criterion::{criterion_group, criterion_main, Criterion};
use curvkit_bench::{barbell, sparse_graph};
use curvkit_core::audit::audit_rewiring;
use curvkit_core::{sdrf, CurvatureKind, SdrfParams};

fn rewiring(c: &mut Criterion) {
    let g = sparse_graph(1500, 4.0, 3);
    let p = SdrfParams::new(CurvatureKind::Bfc, 50, 100.0, 7).with_c_plus(1.0);
    c.bench_function("sdrf_bfc_50_local", |b| b.iter(|| sdrf(&g, &p).unwrap()));
    let full = p.clone().with_full_recompute(true);
    c.bench_function("sdrf_bfc_50_full", |b| b.iter(|| sdrf(&g, &full).unwrap()));

    let bb = barbell(60, 0.3, 5);
    let p = SdrfParams::new(CurvatureKind::Bfc, 20, 50.0, 1);
    c.bench_function("audit_barbell_20", |b| {
        b.iter(|| audit_rewiring(&bb, &p, "barbell").unwrap())
    });
}

criterion_group!(benches, rewiring);
criterion_main!(benches);
