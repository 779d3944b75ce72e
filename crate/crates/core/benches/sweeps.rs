use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use klmult::{Execution, ExtEngine, MultiplicityQuery, Series, Variant, Weight};

const P: i64 = 7;
const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn a2_box(engine: &ExtEngine, bound: i64) -> Vec<Weight> {
    engine
        .root_system()
        .dominant_box(bound)
        .into_iter()
        .filter(|m| engine.group().is_p_regular(m, P))
        .collect()
}

// Each iteration starts from a cold engine so the KL columns are part of the cost.
fn weight_space(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_space_sweep_a2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let e = ExtEngine::new(Series::A, 2).unwrap().with_execution(exec);
                let mus = a2_box(&e, 20);
                e.weight_space_sweep(&mus, P).unwrap()
            })
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiplicity_tables_a2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let e = ExtEngine::new(Series::A, 2).unwrap().with_execution(exec);
                let weights = a2_box(&e, 13);
                let queries: Vec<MultiplicityQuery> = weights
                    .iter()
                    .flat_map(|l| weights.iter().map(move |m| (l.clone(), m.clone())))
                    .filter(|(l, m)| l.coords().iter().sum::<i64>() + m.coords().iter().sum::<i64>() <= 14)
                    .map(|(lambda, mu)| MultiplicityQuery {
                        variant: Variant::RedNabla,
                        lambda,
                        mu,
                        n: 1,
                        p: P,
                        omega: None,
                    })
                    .collect();
                e.multiplicity_tables(&queries).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, weight_space, tables);
criterion_main!(benches);
