use std::hint::black_box;

use arglearn::dectree::{learn_tree, TreeParams};
use arglearn::experiment::{run_on_table, Preprocessor};
use arglearn::hero::learn_hero;
use arglearn::{learn_pruned, presumption_of_innocence, Learner, Method, SearchConfig};
use arglearn_bench::{boston, boston_cases, boston_config};
use criterion::{criterion_group, criterion_main, Criterion};

fn legal_example(c: &mut Criterion) {
    let model = presumption_of_innocence();
    let config = SearchConfig::new(3, 2);
    c.bench_function("pruned_search/presumption", |b| {
        b.iter(|| learn_pruned(black_box(&model), &config).unwrap())
    });
    c.bench_function("hero/presumption", |b| {
        b.iter(|| learn_hero(black_box(model.cases()), "guilty").unwrap())
    });
}

fn boston_learners(c: &mut Criterion) {
    let mut group = c.benchmark_group("boston");
    group.sample_size(10);
    let cases = boston_cases(Method::EqualWidth);
    for premises in [2, 4] {
        let config = SearchConfig::new(premises, 1);
        group.bench_function(format!("pruned_search/premises_{premises}"), |b| {
            b.iter(|| learn_pruned(black_box(&cases), &config).unwrap())
        });
    }
    group.bench_function("hero/equal_width", |b| {
        b.iter(|| learn_hero(black_box(cases.cases()), "MEDV").unwrap())
    });

    let table = boston();
    let config = boston_config(Learner::Dectree, Method::EqualWidth);
    let data = Preprocessor::fit(&table, &config)
        .unwrap()
        .tree_data(&table)
        .unwrap();
    group.bench_function("dectree/depth_10", |b| {
        b.iter(|| learn_tree(black_box(&data), &TreeParams::default()).unwrap())
    });
    group.bench_function("pipeline/pruned_search", |b| {
        let config = boston_config(Learner::PrunedSearch, Method::EqualWidth);
        b.iter(|| run_on_table(&config, black_box(&table)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, legal_example, boston_learners);
criterion_main!(benches);
