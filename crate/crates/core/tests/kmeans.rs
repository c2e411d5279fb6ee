use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vmo_core::partition::{kmeans_objective, kmeans_pp, kmeans_pp_traced, PartitionError};
use vmo_core::Layout;

/// Optimal k-means cost by enumerating every assignment of points to at
/// most `m` labelled clusters.
fn brute_force_opt(x: &Layout, m: usize) -> f64 {
    let k = x.len();
    let d = x.dim();
    let total = m.pow(k as u32);
    let mut best = f64::INFINITY;
    let mut labels = vec![0usize; k];
    for code in 0..total {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = c % m;
            c /= m;
        }
        let mut cost = 0.0;
        for j in 0..m {
            let members: Vec<&[f64]> = (0..k).filter(|&i| labels[i] == j).map(|i| x.point(i)).collect();
            if members.is_empty() {
                continue;
            }
            let n = members.len() as f64;
            for a in 0..d {
                let mean = members.iter().map(|p| p[a]).sum::<f64>() / n;
                cost += members.iter().map(|p| (p[a] - mean).powi(2)).sum::<f64>();
            }
        }
        best = best.min(cost);
    }
    best
}

fn line(xs: &[f64]) -> Layout {
    Layout::new(4, xs.iter().flat_map(|&x| [x, 0.0, 0.0, 0.0]).collect())
}

#[test]
fn objective_examples() {
    assert_eq!(kmeans_objective(&line(&[0.0, 10.0]), &line(&[0.0, 10.0])), 0.0);
    assert_eq!(kmeans_objective(&line(&[0.0, 2.0]), &line(&[1.0])), 2.0);
}

#[test]
fn one_cluster_is_the_centroid() {
    let x = line(&[0.0, 1.0, 5.0]);
    let c = kmeans_pp(&x, 1, 5, 0).unwrap();
    assert!((c.centers().point(0)[0] - 2.0).abs() < 1e-15);
    assert_eq!(c.assignment(), &[0, 0, 0]);
}

#[test]
fn separated_clusters_reach_the_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pts = Vec::new();
    for centre in [0.0, 100.0] {
        for _ in 0..5 {
            pts.push([
                centre + rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                0.0,
                0.0,
            ]);
        }
    }
    let x = Layout::from_points(4, &pts);
    let opt = brute_force_opt(&x, 2);
    for seed in 0..10 {
        let c = kmeans_pp(&x, 2, 20, seed).unwrap();
        assert!((kmeans_objective(&x, c.centers()) - opt).abs() < 1e-9 * opt.max(1.0));
        let a = c.assignment();
        assert!(a[..5].iter().all(|&v| v == a[0]) && a[5..].iter().all(|&v| v == a[5]));
        assert_ne!(a[0], a[5]);
    }
}

#[test]
fn as_many_clusters_as_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = Layout::new(3, (0..21).map(|_| rng.random_range(0.0..1.0)).collect());
    let c = kmeans_pp(&x, 7, 3, 1).unwrap();
    assert_eq!(kmeans_objective(&x, c.centers()), 0.0);
}

#[test]
fn lloyd_never_increases_the_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..50 {
        let k = rng.random_range(5..80);
        let x = Layout::new(4, (0..4 * k).map(|_| rng.random_range(0.0..1.0)).collect());
        let m = rng.random_range(1..=5);
        let (_, trace) = kmeans_pp_traced(&x, m, 15, case).unwrap();
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "case {case}: {trace:?}");
        }
    }
}

#[test]
fn seeding_expectation_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let x = Layout::new(3, (0..36).map(|_| rng.random_range(0.0..1.0)).collect());
    for m in [2usize, 3] {
        let opt = brute_force_opt(&x, m);
        let mean = (0..200)
            .map(|s| kmeans_pp_traced(&x, m, 0, s).unwrap().1[0])
            .sum::<f64>()
            / 200.0;
        let bound = 8.0 * ((m as f64).ln() + 2.0) * opt;
        assert!(mean <= bound, "m={m}: mean {mean} bound {bound}");
    }
}

#[test]
fn rejects_bad_cluster_counts() {
    let x = line(&[0.0, 0.0, 1.0]);
    assert_eq!(kmeans_pp(&x, 0, 1, 0).unwrap_err(), PartitionError::NoClusters);
    assert_eq!(
        kmeans_pp(&x, 3, 1, 0).unwrap_err(),
        PartitionError::TooManyClusters { m: 3, distinct: 2 }
    );
}

#[test]
fn same_seed_same_clustering() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = Layout::new(4, (0..400).map(|_| rng.random_range(0.0..1.0)).collect());
    assert_eq!(kmeans_pp(&x, 4, 10, 5).unwrap(), kmeans_pp(&x, 4, 10, 5).unwrap());
}
