use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dicentra::bifurcation::{classify, classify_grid, ChartRegion};
use dicentra::elliptic::{complete_k, jacobi_sn_cn_dn, EllipticParameter};
use dicentra::geometry::{ProblemParams, Sign};
use dicentra::invariants::{InvariantPair, PlanarInvariants};
use dicentra::oracle::{integrate_separated, IntegratorConfig};
use dicentra::orbit::build_spec;
use std::f64::consts::FRAC_PI_6;

fn params() -> ProblemParams {
    ProblemParams::from_gamma(1.0, FRAC_PI_6, 1.0 / 3.0).unwrap()
}

fn inv(h: f64, g: f64) -> InvariantPair {
    InvariantPair::from_planar(PlanarInvariants { h, g }, &params())
}

fn bench_elliptic(c: &mut Criterion) {
    let m = EllipticParameter::new(0.83).unwrap();
    c.bench_function("complete_k m=0.83", |b| {
        b.iter(|| complete_k(black_box(m)).unwrap())
    });
    c.bench_function("jacobi_sn_cn_dn s=2.7 m=0.83", |b| {
        b.iter(|| jacobi_sn_cn_dn(black_box(2.7), black_box(m)))
    });
}

fn bench_orbit(c: &mut Criterion) {
    let p = params();
    let spec = build_spec(
        &inv(0.8, 0.2),
        &p,
        (1.0, 2.0),
        (Sign::Plus, Sign::Plus, Sign::Plus),
    )
    .unwrap();
    c.bench_function("orbit position", |b| {
        let mut zeta = 0.0;
        b.iter(|| {
            zeta += 0.01;
            black_box(spec.position(black_box(zeta)))
        })
    });
    c.bench_function("orbit physical_time zeta=5", |b| {
        b.iter(|| spec.physical_time(black_box(5.0)))
    });
    c.bench_function("orbit sample 256 over [0,10]", |b| {
        b.iter(|| spec.sample(black_box((0.0, 10.0)), 256).unwrap())
    });
}

fn bench_bifurcation(c: &mut Criterion) {
    let p = params();
    let i = inv(-0.27, 0.8);
    c.bench_function("classify point", |b| {
        b.iter(|| classify(black_box(&i), &p).unwrap())
    });
    let region = ChartRegion {
        h_min: -1.0,
        h_max: 2.0,
        g_min: -1.5,
        g_max: 2.5,
    };
    c.bench_function("classify_grid 50x50", |b| {
        b.iter(|| classify_grid(black_box(&region), (50, 50), &p).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let p = params();
    let i = inv(-0.3, 0.6);
    let cfg = IntegratorConfig::default();
    c.bench_function("integrate_separated span 5", |b| {
        b.iter(|| {
            integrate_separated(
                black_box(&i),
                &p,
                (1.4, 0.0, Sign::Plus, Sign::Plus),
                (0.0, 5.0),
                64,
                &cfg,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_elliptic,
    bench_orbit,
    bench_bifurcation,
    bench_oracle
);
criterion_main!(benches);
