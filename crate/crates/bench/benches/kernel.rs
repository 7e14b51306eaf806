use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use evokernel::constraints::parse_constraint;
use evokernel::oracle::{generate_history, SmallUniverseSpec};
use evokernel::{
    apply_event, constr_implies, eval_constraint, fixtures, replay, validate, Tick, TickRange,
};
use evokernel_bench::{broker_scaled, store_replay};

fn bench_validate(c: &mut Criterion) {
    let mut g = c.benchmark_group("validate");
    for (name, h) in [
        ("store", fixtures::store()),
        ("airplane", fixtures::airplane()),
        ("rental_store", fixtures::rental_store_table()),
    ] {
        g.bench_function(name, |b| b.iter(|| validate(black_box(&h))));
    }
    for n in [10, 100, 1000] {
        let h = broker_scaled(n, 5);
        g.bench_with_input(BenchmarkId::new("broker_scaled", n), &h, |b, h| {
            b.iter(|| validate(black_box(h)))
        });
    }
    g.finish();
}

fn bench_constraints(c: &mut Criterion) {
    let h = fixtures::airplane();
    let range = TickRange::between(Tick(1), Tick(3)).expect("ordered range");
    let mut g = c.benchmark_group("eval_constraint");
    for (name, text) in [
        ("total", fixtures::C1),
        ("unique", fixtures::C2),
        ("conjunction", fixtures::C4_UNREGISTERED),
        ("before_equals", fixtures::C5),
    ] {
        let ast = parse_constraint(text).expect("fixture constraint parses");
        g.bench_function(name, |b| {
            b.iter(|| eval_constraint(black_box(&h), range, &ast))
        });
    }
    g.finish();

    let a = parse_constraint(fixtures::C4_AIRPLANE).expect("parses");
    let b2 = parse_constraint(fixtures::C4_UNREGISTERED).expect("parses");
    c.bench_function("constr_implies", |b| {
        b.iter(|| constr_implies(black_box(&a), &b2))
    });
}

fn bench_events(c: &mut Criterion) {
    let (h0, log) = store_replay();
    let (t, body) = log.iter().next().expect("store log has events");
    c.bench_function("apply_event/store_e1", |b| {
        b.iter(|| apply_event(black_box(&h0), t, body))
    });
    c.bench_function("replay/store", |b| b.iter(|| replay(black_box(&h0), &log)));
}

fn bench_generate(c: &mut Criterion) {
    c.bench_function("generate_history", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            generate_history(&SmallUniverseSpec::seeded(seed))
        })
    });
}

criterion_group!(
    benches,
    bench_validate,
    bench_constraints,
    bench_events,
    bench_generate
);
criterion_main!(benches);
