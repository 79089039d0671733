use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;
use numerans::automaton::UpWord;
use numerans::reals::convergence_table;
use numerans::NumerationSystem;

fn system(name: &str, parallel: bool) -> NumerationSystem {
    let mut s = NumerationSystem::builtin(name).unwrap();
    s.set_parallel(parallel);
    s
}

fn mode(parallel: bool) -> &'static str {
    if parallel {
        "parallel"
    } else {
        "sequential"
    }
}

fn convergence(c: &mut Criterion) {
    let mut group = c.benchmark_group("convergence_table/balanced");
    group.sample_size(10);
    for parallel in [false, true] {
        group.bench_with_input(BenchmarkId::new(mode(parallel), 600), &parallel, |b, &parallel| {
            b.iter(|| {
                let s = system("balanced", parallel);
                let w: UpWord = s.automaton().alphabet().parse_up_word("(ab)^w").unwrap();
                convergence_table(&s, &w, 600).unwrap()
            })
        });
    }
    group.finish();
}

fn batch_ranking(c: &mut Criterion) {
    let mut group = c.benchmark_group("value_of_all/dyck");
    group.sample_size(10);
    let ranks: Vec<BigUint> = (0..2_000u64).map(|i| BigUint::from(i) * 7_919_u32 * 1_000_003_u32).collect();
    let words = system("dyck", false).words_at(&ranks);
    for parallel in [false, true] {
        group.bench_with_input(BenchmarkId::new(mode(parallel), words.len()), &parallel, |b, &parallel| {
            b.iter(|| {
                let s = system("dyck", parallel);
                s.value_of_all(&words)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, convergence, batch_ranking);
criterion_main!(benches);
