mod common;

use common::*;
use hyperlap::*;
use proptest::prelude::*;

#[test]
fn null_vectors_and_row_sums() {
    let mut rng = rng(1);
    for _ in 0..100 {
        let n = rand::Rng::random_range(&mut rng, 3..=50);
        let h = random_hypergraph(&mut rng, n, 15);
        let d = compute_degrees(&h);
        let ones = vec![1.0; n];
        let l = unnormalized_laplacian(&h, &d).unwrap();
        let lrw = random_walk_laplacian(&h, &d).unwrap();
        let lsym = symmetric_laplacian(&h, &d).unwrap();
        let srw = propagation_matrix(&h, &d, PropagationKind::RandomWalk).unwrap();
        let ssym = propagation_matrix(&h, &d, PropagationKind::Symmetric).unwrap();
        let sqrt_d: Vec<f64> = d.vertex_degrees.iter().map(|x| x.sqrt()).collect();

        assert!(max_abs(&l.values().mul_vec(&ones).unwrap()) <= 1e-10);
        assert!(max_abs(&lrw.values().mul_vec(&ones).unwrap()) <= 1e-10);
        assert!(max_abs(&lsym.values().mul_vec(&sqrt_d).unwrap()) <= 1e-10);
        assert!(srw.values().row_sums().iter().all(|r| (r - 1.0).abs() <= 1e-10));
        assert!(srw.values().as_slice().iter().all(|&x| x >= 0.0));
        assert!(l.values().asymmetry() <= 1e-12);
        assert!(lsym.values().asymmetry() <= 1e-12);
        let complement = Matrix::identity(n).add_scaled(lsym.values(), -1.0).unwrap();
        assert!(ssym.values().max_abs_diff(&complement).unwrap() <= 1e-12);
    }
}

#[test]
fn degrees_match_incidence_sums() {
    let mut rng = rng(2);
    for _ in 0..30 {
        let h = random_hypergraph(&mut rng, 25, 10);
        let d = compute_degrees(&h);
        let inc = h.incidence();
        for v in 0..h.n_vertices() {
            let want: f64 = (0..h.n_edges()).map(|e| h.edge_weights()[e] * inc[(v, e)]).sum();
            assert!((d.vertex_degrees[v] - want).abs() < 1e-14);
            assert!(d.vertex_degrees[v] > 0.0);
        }
        for e in 0..h.n_edges() {
            let want: f64 = (0..h.n_vertices()).map(|v| inc[(v, e)]).sum();
            assert_eq!(d.edge_degrees[e], want);
        }
    }
}

#[test]
fn laplacians_are_positive_semidefinite() {
    let mut rng = rng(3);
    for _ in 0..40 {
        let n = rand::Rng::random_range(&mut rng, 3..=30);
        let h = random_hypergraph(&mut rng, n, 12);
        let d = compute_degrees(&h);
        for op in [unnormalized_laplacian(&h, &d).unwrap(), symmetric_laplacian(&h, &d).unwrap()] {
            let eig = to_na(op.values()).symmetric_eigenvalues();
            assert!(eig.min() >= -1e-10, "{} min eigenvalue {}", op.kind(), eig.min());
        }
    }
}

/// Eigenpairs of the pencil `L u = λ D_v u`, computed from `L` alone via the
/// symmetric matrix `D_v^{-1/2} L D_v^{-1/2}`.
fn pencil_eigenpairs(l: &Matrix, degrees: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let inv: Vec<f64> = degrees.iter().map(|x| 1.0 / x.sqrt()).collect();
    let eig = to_na(&l.scale_rows_cols(&inv, &inv)).symmetric_eigen();
    let n = degrees.len();
    let vectors = (0..n)
        .map(|k| (0..n).map(|i| eig.eigenvectors[(i, k)] * inv[i]).collect())
        .collect();
    (eig.eigenvalues.iter().copied().collect(), vectors)
}

#[test]
fn walk_and_symmetric_spectra_agree() {
    let mut rng = rng(4);
    for _ in 0..20 {
        let n = rand::Rng::random_range(&mut rng, 3..=20);
        let h = random_hypergraph(&mut rng, n, 8);
        let d = compute_degrees(&h);
        let l = unnormalized_laplacian(&h, &d).unwrap();
        let lrw = random_walk_laplacian(&h, &d).unwrap();
        let lsym = symmetric_laplacian(&h, &d).unwrap();

        // n independent eigenvectors of L_rw, each checked against L_rw itself
        let (lambdas, vectors) = pencil_eigenpairs(l.values(), &d.vertex_degrees);
        for (lambda, u) in lambdas.iter().zip(&vectors) {
            let lrw_u = lrw.values().mul_vec(u).unwrap();
            let l_u = l.values().mul_vec(u).unwrap();
            for i in 0..n {
                assert!((lrw_u[i] - lambda * u[i]).abs() <= 1e-8);
                assert!((l_u[i] - lambda * d.vertex_degrees[i] * u[i]).abs() <= 1e-8);
            }
        }
        let sym_vals = sorted(to_na(lsym.values()).symmetric_eigenvalues().iter().copied().collect());
        for (a, b) in sorted(lambdas).iter().zip(&sym_vals) {
            assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
            assert!(*a >= -1e-10);
        }

        // similarity L_sym = D^{1/2} L_rw D^{-1/2}
        let sq: Vec<f64> = d.vertex_degrees.iter().map(|x| x.sqrt()).collect();
        let inv: Vec<f64> = sq.iter().map(|x| 1.0 / x).collect();
        let similar = lrw.values().scale_rows_cols(&sq, &inv);
        assert!(similar.max_abs_diff(lsym.values()).unwrap() <= 1e-10);
    }
}

#[test]
fn propagation_spectra_bounded() {
    let mut rng = rng(5);
    for _ in 0..20 {
        let n = rand::Rng::random_range(&mut rng, 3..=25);
        let h = random_hypergraph(&mut rng, n, 10);
        let d = compute_degrees(&h);
        let srw = propagation_matrix(&h, &d, PropagationKind::RandomWalk).unwrap();
        let ssym = propagation_matrix(&h, &d, PropagationKind::Symmetric).unwrap();
        // ρ(S_rw) is bounded by its infinity norm
        let inf_norm = (0..n).map(|i| srw.values().row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
        assert!(inf_norm <= 1.0 + 1e-10);
        let eig = to_na(ssym.values()).symmetric_eigenvalues();
        assert!(eig.min() >= -1.0 - 1e-10 && eig.max() <= 1.0 + 1e-10);
    }
}

#[test]
fn quadratic_form_matches_matrix_on_seeded_instances() {
    let mut rng = rng(6);
    for _ in 0..100 {
        let n = rand::Rng::random_range(&mut rng, 3..=50);
        let h = random_hypergraph(&mut rng, n, 15);
        let d = compute_degrees(&h);
        let l = unnormalized_laplacian(&h, &d).unwrap();
        for _ in 0..10 {
            let f = random_vector(&mut rng, n);
            let lf = l.values().mul_vec(&f).unwrap();
            let matrix_form: f64 = f.iter().zip(&lf).map(|(a, b)| a * b).sum();
            let oracle = quadratic_form_oracle(&h, &d, &f).unwrap();
            assert!((matrix_form - oracle).abs() <= 1e-8 * oracle.abs().max(1e-300) + 1e-14);
        }
    }
}

proptest! {
    #[test]
    fn quadratic_form_identity(seed in any::<u64>(), n in 3usize..40) {
        let mut rng = rng(seed);
        let h = random_hypergraph(&mut rng, n, 12);
        let d = compute_degrees(&h);
        let l = unnormalized_laplacian(&h, &d).unwrap();
        let f = random_vector(&mut rng, n);
        let lf = l.values().mul_vec(&f).unwrap();
        let matrix_form: f64 = f.iter().zip(&lf).map(|(a, b)| a * b).sum();
        let oracle = quadratic_form_oracle(&h, &d, &f).unwrap();
        prop_assert!(oracle >= 0.0);
        prop_assert!((matrix_form - oracle).abs() <= 1e-8 * oracle.max(1e-12));
    }

    #[test]
    fn coordinate_list_round_trips(seed in any::<u64>(), n in 3usize..20) {
        let mut rng = rng(seed);
        let h = random_hypergraph(&mut rng, n, 6);
        let back = Hypergraph::from_coordinate_list(&h.to_coordinate_list(), Some(h.edge_weights().to_vec())).unwrap();
        prop_assert_eq!(back, h);
    }
}
