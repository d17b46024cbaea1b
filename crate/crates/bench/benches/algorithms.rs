use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cutdual::certificate::verify_certificate;
use cutdual::dpa::approx_dpa_ssc;
use cutdual::generate::{
    gen_dpa_tight, gen_random_2ecs, gen_random_ssc, gen_ssc_tight, GeneratedInstance,
};
use cutdual::oracle::exact_ssc;
use cutdual::ssc::approx_ssc;
use cutdual::two_ecs::approx_2ecs;
use cutdual::{DefaultAdvisor, Instance, ScriptedAdvisor, SscInstance, TwoEcsInstance};

fn ssc(g: &GeneratedInstance) -> &SscInstance {
    match &g.instance {
        Instance::Ssc(s) => s,
        _ => unreachable!(),
    }
}

fn two_ecs(g: &GeneratedInstance) -> &TwoEcsInstance {
    match &g.instance {
        Instance::TwoEcs(t) => t,
        _ => unreachable!(),
    }
}

fn tight_families(c: &mut Criterion) {
    let mut group = c.benchmark_group("tight");
    for k in [10, 50] {
        let g = gen_dpa_tight(k).unwrap();
        let script = g.advice.clone().unwrap();
        group.bench_with_input(BenchmarkId::new("bidirected", k), &k, |b, _| {
            b.iter(|| approx_dpa_ssc(ssc(&g), &mut ScriptedAdvisor::new(script.clone())).unwrap())
        });
        let g = gen_ssc_tight(k).unwrap();
        let script = g.advice.clone().unwrap();
        group.bench_with_input(BenchmarkId::new("directed", k), &k, |b, _| {
            b.iter(|| approx_ssc(ssc(&g), &mut ScriptedAdvisor::new(script.clone())).unwrap())
        });
    }
    group.finish();
}

fn random_instances(c: &mut Criterion) {
    let mut group = c.benchmark_group("random");
    for n in [20, 80] {
        let g = gen_random_ssc(n, 1.0, 3, 7).unwrap();
        group.bench_with_input(BenchmarkId::new("ssc", n), &n, |b, _| {
            b.iter(|| approx_ssc(black_box(ssc(&g)), &mut DefaultAdvisor).unwrap())
        });
        let g = gen_random_2ecs(n, 1.0, 7).unwrap();
        group.bench_with_input(BenchmarkId::new("2ecs", n), &n, |b, _| {
            b.iter(|| approx_2ecs(black_box(two_ecs(&g)), &mut DefaultAdvisor).unwrap())
        });
    }
    group.finish();
}

fn checking(c: &mut Criterion) {
    let g = gen_ssc_tight(50).unwrap();
    let s = ssc(&g);
    let report = approx_ssc(s, &mut DefaultAdvisor).unwrap();
    c.bench_function("verify_certificate/directed-50", |b| {
        b.iter(|| verify_certificate(s, black_box(&report.certificate)).unwrap())
    });
    let small = gen_random_ssc(7, 1.5, 2, 3).unwrap();
    c.bench_function("exact_ssc/n7", |b| {
        b.iter(|| exact_ssc(black_box(ssc(&small)), 22).unwrap())
    });
}

criterion_group!(benches, tight_families, random_instances, checking);
criterion_main!(benches);
