use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::SeedableRng;
use tfg_core::fullgroup::{ball_growth, involution_from_slice};
use tfg_core::random::{random_element, random_table};
use tfg_core::{Element, PathLanguage, Space, SpaceSpec};

fn spaces() -> Vec<(&'static str, Space)> {
    vec![
        ("dyadic", Space::new(SpaceSpec::odometer(&[2])).unwrap()),
        ("fibonacci", Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "a")])).unwrap()),
        ("thue-morse", Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "ba")])).unwrap()),
    ]
}

fn compose(c: &mut Criterion) {
    let mut group = c.benchmark_group("compose");
    for (name, space) in spaces() {
        let mut rng = StdRng::seed_from_u64(7);
        let pairs: Vec<(Element, Element)> = (0..16)
            .map(|_| (random_element(&space, &mut rng, 3).unwrap(), random_element(&space, &mut rng, 3).unwrap()))
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(name), &pairs, |b, pairs| {
            b.iter(|| {
                for (g, h) in pairs {
                    black_box(g.compose(h).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn canonicalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("clopen_union");
    for (name, space) in spaces() {
        let sets: Vec<_> = match name {
            "dyadic" => (0..8).map(|r| space.residue_set(4, &[r, r + 8]).unwrap()).collect(),
            _ => {
                let words = space.language(4).unwrap();
                words
                    .iter()
                    .enumerate()
                    .map(|(i, w)| space.cylinder(i as i64 % 3 - 1, std::slice::from_ref(w)).unwrap())
                    .collect()
            }
        };
        group.bench_function(name, |b| b.iter(|| black_box(space.union_all(&sets).unwrap())));
    }
    group.finish();
}

fn growth(c: &mut Criterion) {
    let space = Space::new(SpaceSpec::odometer(&[2])).unwrap();
    let phi = Element::shift(&space, 1);
    let swap = involution_from_slice(&space, &space.residue_set(2, &[0]).unwrap(), 1).unwrap();
    c.bench_function("ball_growth/dyadic_radius_5", |b| {
        b.iter(|| black_box(ball_growth(&[phi.clone(), swap.clone()], 5, 100_000).unwrap()))
    });
}

fn thompson(c: &mut Criterion) {
    let mut group = c.benchmark_group("thompson_compose");
    for (name, lang) in
        [("free_2_1", PathLanguage::free(2, 1)), ("golden_mean", PathLanguage::graph(vec![(0, 0), (0, 1), (1, 0)]))]
    {
        let mut rng = StdRng::seed_from_u64(11);
        let tables: Vec<_> = (0..16).map(|_| random_table(&lang, &mut rng, 6, 6).unwrap().canonicalize()).collect();
        group.bench_function(name, |b| {
            b.iter(|| {
                for pair in tables.windows(2) {
                    black_box(pair[0].compose(&pair[1]).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, compose, canonicalize, growth, thompson);
criterion_main!(benches);
