use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use shogi_reach::codec::Codec;
use shogi_reach::estimator::classify;
use shogi_reach::search::{search_to_kk, HeuristicParams, ResourceLimits};
use shogi_reach::Variant;
use shogi_reach_bench::{median_nodes_per_ply, ranks, searchable};

fn unrank(c: &mut Criterion) {
    for v in Variant::ALL {
        let codec = Codec::get(v);
        let rs = ranks(v, 256, 1);
        let mut i = 0;
        c.bench_function(&format!("unrank/{v}"), |b| {
            b.iter(|| {
                i = (i + 1) % rs.len();
                black_box(codec.unrank(&rs[i]).unwrap())
            })
        });
    }
}

fn classify_samples(c: &mut Criterion) {
    let params = HeuristicParams::default();
    let limits = ResourceLimits::default();
    for v in Variant::ALL {
        let rs = ranks(v, 256, 2);
        let mut i = 0;
        c.bench_function(&format!("classify/{v}"), |b| {
            b.iter(|| {
                i = (i + 1) % rs.len();
                black_box(classify(v, &rs[i], &params, &limits).unwrap())
            })
        });
    }
}

fn search(c: &mut Criterion) {
    let params = HeuristicParams::default();
    let limits = ResourceLimits::default();
    for v in Variant::ALL {
        let ps = searchable(v, 64, 3);
        if let Some(r) = median_nodes_per_ply(&ps) {
            eprintln!("search/{v}: median expanded nodes per witness ply {r:.2}");
        }
        let mut i = 0;
        c.bench_function(&format!("search/{v}"), |b| {
            b.iter(|| {
                i = (i + 1) % ps.len();
                black_box(search_to_kk(&ps[i], &params, &limits).unwrap())
            })
        });
    }
}

criterion_group!(benches, unrank, classify_samples, search);
criterion_main!(benches);
