use criterion::{black_box, criterion_group, criterion_main, Criterion};
use updsum_bench::{token_lists, topic_fixture};
use updsum_core::similarity::{jaro_winkler, jw_extended, lcs_norm};

fn kernels(c: &mut Criterion) {
    let fixture = topic_fixture(2, 10);
    let lists = token_lists(&fixture);
    let words: Vec<&str> = lists.iter().flatten().map(String::as_str).take(200).collect();

    c.bench_function("jaro_winkler/200x200", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for x in &words {
                for y in &words {
                    acc += jaro_winkler(black_box(x), black_box(y));
                }
            }
            acc
        })
    });

    c.bench_function("jw_extended/sentence_vs_query", |b| {
        b.iter(|| {
            lists
                .iter()
                .map(|s| jw_extended(black_box(s), &fixture.topic.query_tokens))
                .sum::<f64>()
        })
    });

    c.bench_function("lcs_norm/all_pairs", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for x in &lists {
                for y in &lists {
                    acc += lcs_norm(black_box(x), black_box(y));
                }
            }
            acc
        })
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
