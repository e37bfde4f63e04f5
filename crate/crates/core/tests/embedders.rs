mod common;

use common::normal_points;
use stress_gauge::embed::{
    classical_mds, embed, random_embedding, smacof_mds, tsne, EmbedderConfig, SmacofInit, Technique,
};
use stress_gauge::metrics::{normalized_stress, raw_stress};
use stress_gauge::model::{pairwise_distances, CondensedDistances, DataMatrix, DistanceMetric, EmbeddingMatrix};
use stress_gauge::rng::Rng;

fn cfg(technique: Technique, seed: u64) -> EmbedderConfig {
    EmbedderConfig {
        technique,
        seed,
        ..EmbedderConfig::default()
    }
}

fn euclid<M: AsRef<stress_gauge::model::Points>>(m: &M) -> CondensedDistances {
    pairwise_distances(m, DistanceMetric::Euclidean).unwrap()
}

/// Three Gaussian clusters of 50 points in 5-D, well separated.
fn blobs(seed: u64) -> DataMatrix {
    let mut rng = Rng::new(seed);
    let mut v = Vec::with_capacity(150 * 5);
    for c in 0..3 {
        for _ in 0..50 {
            for d in 0..5 {
                let centre = if d == c { 10.0 } else { 0.0 };
                v.push(centre + rng.normal());
            }
        }
    }
    DataMatrix::new(v, 150, 5).unwrap()
}

fn knn(d: &CondensedDistances, i: usize, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..d.n_points()).filter(|&j| j != i).collect();
    idx.sort_by(|&a, &b| d.get(i, a).total_cmp(&d.get(i, b)).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

fn knn_overlap(high: &CondensedDistances, low: &CondensedDistances, k: usize) -> f64 {
    let n = high.n_points();
    let mut shared = 0;
    for i in 0..n {
        let a = knn(high, i, k);
        let b = knn(low, i, k);
        shared += a.iter().filter(|j| b.contains(j)).count();
    }
    shared as f64 / (n * k) as f64
}

#[test]
fn classical_mds_recovers_collinear_points() {
    let d = CondensedDistances::new(vec![1.0, 2.0, 1.0], 3).unwrap();
    let r = classical_mds(&d, 2).unwrap();
    assert!(raw_stress(&d, &euclid(&r.embedding)).unwrap() < 1e-9);
}

#[test]
fn classical_mds_recovers_unit_square() {
    let s = 2f64.sqrt();
    let d = CondensedDistances::new(vec![1.0, s, 1.0, 1.0, s, 1.0], 4).unwrap();
    let r = classical_mds(&d, 2).unwrap();
    for (a, b) in d.as_slice().iter().zip(euclid(&r.embedding).as_slice()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn classical_mds_keeps_duplicates_together() {
    let x = DataMatrix::from_rows(&[[0.0, 1.0, 2.0], [3.0, 1.0, 0.0], [0.0, 1.0, 2.0], [1.0, 1.0, 1.0]]).unwrap();
    let e = embed(&x, DistanceMetric::Euclidean, &cfg(Technique::ClassicalMds, 0)).unwrap().embedding;
    for c in 0..2 {
        assert!((e.row(0)[c] - e.row(2)[c]).abs() < 1e-9);
    }
}

#[test]
fn smacof_stress_never_increases() {
    for seed in 0..5 {
        let mut rng = Rng::new(seed);
        let x = DataMatrix::new(normal_points(&mut rng, 30, 6), 30, 6).unwrap();
        for init in [SmacofInit::ClassicalMds, SmacofInit::Random] {
            let c = EmbedderConfig {
                smacof_init: init,
                ..cfg(Technique::SmacofMds, seed)
            };
            let r = smacof_mds(&euclid(&x), &c).unwrap();
            for w in r.stress_trace.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "{w:?}");
            }
        }
    }
}

#[test]
fn smacof_realizes_planar_input() {
    let mut rng = Rng::new(3);
    let planar = DataMatrix::new(normal_points(&mut rng, 25, 2), 25, 2).unwrap();
    let d = euclid(&planar);
    let r = smacof_mds(&d, &cfg(Technique::SmacofMds, 9)).unwrap();
    assert!(normalized_stress(&d, &euclid(&r.embedding)).unwrap() < 1e-6);
}

#[test]
fn embedders_are_deterministic_per_seed() {
    let x = blobs(1);
    for t in [Technique::ClassicalMds, Technique::SmacofMds, Technique::Tsne, Technique::Random] {
        let c = EmbedderConfig {
            tsne_iters: 300,
            ..cfg(t, 42)
        };
        let a = embed(&x, DistanceMetric::Euclidean, &c).unwrap().embedding;
        let b = embed(&x, DistanceMetric::Euclidean, &c).unwrap().embedding;
        let bits = |e: &EmbeddingMatrix| e.points().as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b), "{t}");
    }
}

#[test]
fn random_embedding_in_unit_square() {
    let a = random_embedding(200, &cfg(Technique::Random, 1)).unwrap();
    assert!(a.points().as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
    let b = random_embedding(200, &cfg(Technique::Random, 2)).unwrap();
    assert_ne!(a, b);
}

#[test]
fn tsne_preserves_neighbourhoods_better_than_random() {
    let x = blobs(7);
    let high = euclid(&x);
    let t = tsne(&x, &cfg(Technique::Tsne, 7)).unwrap();
    let r = random_embedding(150, &cfg(Technique::Random, 7)).unwrap();
    let ot = knn_overlap(&high, &euclid(&t.embedding), 10);
    let or = knn_overlap(&high, &euclid(&r), 10);
    assert!(ot >= 2.0 * or, "t-SNE overlap {ot} vs random {or}");
}

#[test]
fn tsne_kl_decreases_late_in_most_runs() {
    let x = blobs(11);
    let aff = stress_gauge::embed::Affinities::compute(&x, 30.0).unwrap();
    let runs = 20;
    let mut decreasing = 0;
    for seed in 0..runs {
        let r = stress_gauge::embed::tsne_with_affinities(&aff, &cfg(Technique::Tsne, seed)).unwrap();
        let &(last_it, last) = r.kl_trace.last().unwrap();
        let (_, earlier) = r.kl_trace.iter().find(|(it, _)| *it + 100 >= last_it).copied().unwrap();
        assert!(r.kl_trace.iter().all(|(_, v)| v.is_finite()));
        if last < earlier {
            decreasing += 1;
        }
    }
    assert!(decreasing as f64 >= 0.95 * runs as f64, "{decreasing}/{runs}");
}

#[test]
fn tsne_clamps_large_perplexity() {
    let mut rng = Rng::new(5);
    let x = DataMatrix::new(normal_points(&mut rng, 20, 3), 20, 3).unwrap();
    let out = embed(&x, DistanceMetric::Euclidean, &cfg(Technique::Tsne, 0)).unwrap();
    assert!(out.warnings.iter().any(|w| w.contains("perplexity")), "{:?}", out.warnings);
    assert!(tsne(&DataMatrix::new(normal_points(&mut rng, 5, 2), 5, 2).unwrap(), &cfg(Technique::Tsne, 0)).is_err());
}
