use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use pqc_core::models::{builtin_heisenberg, builtin_l0};
use pqc_core::par::set_parallel;
use pqc_core::pipeline::{verify_model, Suite};
use pqc_core::scalar::int;

fn full_verification(c: &mut Criterion) {
    let models = [builtin_heisenberg(1), builtin_l0(&int(3)), builtin_heisenberg(2)];
    let mut group = c.benchmark_group("verify-all");
    group.sample_size(10);
    for m in &models {
        for (mode, parallel) in [("parallel", true), ("sequential", false)] {
            group.bench_function(format!("{}/{mode}", m.name), |b| {
                set_parallel(parallel);
                b.iter(|| verify_model(black_box(m), Suite::All));
            });
        }
    }
    set_parallel(true);
    group.finish();
}

criterion_group!(benches, full_verification);
criterion_main!(benches);
