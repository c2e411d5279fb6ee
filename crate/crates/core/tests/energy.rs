use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vmo_core::layout::{energy, finegrain_points, gradient_exact, multilevel_layout, LayoutError};
use vmo_core::{Hypergraph, Layout, LayoutParams, SparseMatrix};

/// Random connected hypergraph: a random spanning tree of pairs plus a few
/// larger hyperedges, with non-unit weights and costs.
fn random_connected(rng: &mut ChaCha8Rng, k: usize) -> Hypergraph {
    let mut edges: Vec<Vec<usize>> = (1..k).map(|v| vec![rng.random_range(0..v), v]).collect();
    for _ in 0..rng.random_range(0..k) {
        let size = rng.random_range(1..=4.min(k));
        let mut e: Vec<usize> = (0..size).map(|_| rng.random_range(0..k)).collect();
        e.sort_unstable();
        e.dedup();
        edges.push(e);
    }
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..2.0)).collect();
    let costs = (0..edges.len()).map(|_| rng.random_range(0.5..2.0)).collect();
    Hypergraph::new(weights, edges, costs).unwrap()
}

/// Uniform points in `[0, 2]^d`, redrawn until no two are closer than 0.1.
fn random_points(rng: &mut ChaCha8Rng, k: usize, d: usize) -> Layout {
    loop {
        let coords: Vec<f64> = (0..k * d).map(|_| rng.random_range(0.0..2.0)).collect();
        let x = Layout::new(d, coords);
        let close = (0..k).any(|i| {
            (0..i).any(|j| {
                let r2: f64 = x.point(i).iter().zip(x.point(j)).map(|(a, b)| (a - b) * (a - b)).sum();
                r2 < 0.01
            })
        });
        if !close {
            return x;
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn central_differences(g: &Hypergraph, x: &Layout, h: f64) -> Vec<f64> {
    let mut fd = vec![0.0; x.coords().len()];
    for (idx, slot) in fd.iter_mut().enumerate() {
        let (mut plus, mut minus) = (x.coords().to_vec(), x.coords().to_vec());
        plus[idx] += h;
        minus[idx] -= h;
        let fp = energy(g, &Layout::new(x.dim(), plus)).unwrap();
        let fm = energy(g, &Layout::new(x.dim(), minus)).unwrap();
        *slot = (fp - fm) / (2.0 * h);
    }
    fd
}

#[test]
fn two_vertex_energy_and_gradient() {
    let g = Hypergraph::unweighted(2, vec![vec![0, 1]]).unwrap();
    let x = Layout::from_points(4, &[[0.0; 4], [2.0, 0.0, 0.0, 0.0]]);
    // rubber: 1/2 (1 + 1), charges: 1/2 (1/4 + 1/4)
    assert!((energy(&g, &x).unwrap() - 1.25).abs() < 1e-15);
    let y = gradient_exact(&g, &x).unwrap();
    assert!((y[0] + 0.75).abs() < 1e-15);
    assert!((y[4] - 0.75).abs() < 1e-15);
    assert!(y[1..4].iter().all(|v| *v == 0.0));
}

#[test]
fn single_vertex_has_zero_energy() {
    let g = Hypergraph::unweighted(1, vec![]).unwrap();
    assert_eq!(energy(&g, &Layout::zeros(4, 1)).unwrap(), 0.0);
}

#[test]
fn coincident_points_are_rejected() {
    let g = Hypergraph::unweighted(2, vec![vec![0, 1]]).unwrap();
    let x = Layout::zeros(3, 2);
    assert!(matches!(energy(&g, &x), Err(LayoutError::CoincidentPoints(..))));
    assert!(gradient_exact(&g, &x).is_err());
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..50 {
        let k = rng.random_range(2..=20);
        let d = [3, 4, 5][case % 3];
        let g = random_connected(&mut rng, k);
        let x = random_points(&mut rng, k, d);
        let y = gradient_exact(&g, &x).unwrap();
        let fd = central_differences(&g, &x, 1e-4);
        let diff: Vec<f64> = y.iter().zip(&fd).map(|(a, b)| a - b).collect();
        let rel = norm(&diff) / norm(&y);
        assert!(rel < 1e-5, "case {case}: k={k} d={d} relative error {rel:e}");
    }
}

#[test]
fn gradient_sums_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let k = rng.random_range(2..=20);
        let g = random_connected(&mut rng, k);
        let x = random_points(&mut rng, k, 4);
        let y = gradient_exact(&g, &x).unwrap();
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for m in 0..4 {
            let s: f64 = (0..k).map(|n| y[n * 4 + m]).sum();
            assert!(s.abs() <= 1e-12 * scale * k as f64, "{s:e}");
        }
    }
}

/// Random orthogonal matrix from Gram-Schmidt on a random square matrix.
fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        for u in &q {
            let p: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= p * b);
        }
        let n = norm(&v);
        if n > 1e-3 {
            q.push(v.into_iter().map(|a| a / n).collect());
        }
    }
    q
}

#[test]
fn energy_is_invariant_under_rigid_motions() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let d = rng.random_range(3..=5);
        let k = rng.random_range(2..=15);
        let g = random_connected(&mut rng, k);
        let x = random_points(&mut rng, k, d);
        let f = energy(&g, &x).unwrap();
        let q = random_orthogonal(&mut rng, d);
        let t: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
        let moved: Vec<Vec<f64>> = x
            .points()
            .map(|p| {
                (0..d)
                    .map(|r| q[r].iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + t[r])
                    .collect()
            })
            .collect();
        let fm = energy(&g, &Layout::from_points(d, &moved)).unwrap();
        assert!((fm - f).abs() < 1e-9 * f, "{f} vs {fm}");
    }
}

#[test]
fn scaling_splits_the_two_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 3..=5 {
        let k = 12;
        let g = random_connected(&mut rng, k);
        let charges_only = Hypergraph::new(g.weights().to_vec(), vec![], vec![]).unwrap();
        let x = random_points(&mut rng, k, d);
        let repulsion = energy(&charges_only, &x).unwrap();
        let rubber = energy(&g, &x).unwrap() - repulsion;
        let theta: f64 = 2.0;
        let predicted = theta * theta * rubber + theta.powi(-(d as i32 - 2)) * repulsion;
        let direct = energy(&g, &x.scaled(theta)).unwrap();
        assert!((predicted - direct).abs() < 1e-12 * direct);
    }
}

#[test]
fn finegrain_points_are_midpoints() {
    let m = SparseMatrix::from_triplets(1, 1, vec![(0, 0, 1.0)]).unwrap();
    let x = Layout::from_points(4, &[[0.0; 4], [2.0, 0.0, 0.0, 0.0]]);
    assert_eq!(finegrain_points(&x, &m).point(0), &[1.0, 0.0, 0.0, 0.0]);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut t = Vec::new();
    for _ in 0..40 {
        t.push((rng.random_range(0..8), rng.random_range(0..6), 1.0));
    }
    let m = SparseMatrix::from_triplets(8, 6, t).unwrap();
    let x = random_points(&mut rng, 14, 3);
    let fg = finegrain_points(&x, &m);
    assert_eq!(fg.len(), m.nnz());
    for (k, &(i, j, _)) in m.entries().iter().enumerate() {
        for a in 0..3 {
            let mid = 0.5 * (x.point(i)[a] + x.point(8 + j)[a]);
            assert!((fg.point(k)[a] - mid).abs() < 1e-15);
        }
    }
}

#[test]
fn path_layout_is_elongated() {
    let g = Hypergraph::unweighted(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
    let x = multilevel_layout(&g, &LayoutParams::default()).unwrap();
    assert!(x.is_finite() && x.all_distinct());
    let dist = |a: &[f64], b: &[f64]| norm(&a.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>());
    let mid: Vec<f64> = x.point(0).iter().zip(x.point(2)).map(|(a, b)| 0.5 * (a + b)).collect();
    assert!(dist(x.point(1), &mid) < dist(x.point(0), x.point(2)));
}

#[test]
fn k2_equilibrium_and_disconnected_input() {
    let g = Hypergraph::unweighted(2, vec![vec![0, 1]]).unwrap();
    let x = multilevel_layout(&g, &LayoutParams::default()).unwrap();
    let r = norm(
        &x.point(0)
            .iter()
            .zip(x.point(1))
            .map(|(a, b)| a - b)
            .collect::<Vec<_>>(),
    );
    assert!((r - 2f64.sqrt()).abs() < 0.05, "{r}");

    let two = Hypergraph::unweighted(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
    assert!(matches!(
        multilevel_layout(&two, &LayoutParams::default()),
        Err(LayoutError::Disconnected(_))
    ));
}

#[test]
fn layout_is_deterministic_and_stays_in_u() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_connected(&mut rng, 200);
    let params = LayoutParams {
        seed: 17,
        ..LayoutParams::default()
    };
    let a = multilevel_layout(&g, &params).unwrap();
    let b = multilevel_layout(&g, &params).unwrap();
    assert_eq!(a, b);
    assert!(a.is_finite() && a.all_distinct());
}
