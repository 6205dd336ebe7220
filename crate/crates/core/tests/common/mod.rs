#![allow(dead_code)]

use hyperlap::{Hypergraph, LabelMatrix, Matrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random hypergraph with `n` vertices, up to `max_edges` hyperedges and
/// weights in (0, 2]. Uncovered vertices are appended to random edges.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, max_edges: usize) -> Hypergraph {
    let m = rng.random_range(1..=max_edges);
    let mut edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let size = rng.random_range(2..=n.min(8));
            let mut members: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.random_range(i..n);
                members.swap(i, j);
            }
            members.truncate(size);
            members
        })
        .collect();
    let mut covered = vec![false; n];
    for &v in edges.iter().flatten() {
        covered[v] = true;
    }
    for v in (0..n).filter(|&v| !covered[v]) {
        let e = rng.random_range(0..m);
        edges[e].push(v);
    }
    let weights = (0..m).map(|_| 2.0 * (1.0 - rng.random::<f64>())).collect();
    Hypergraph::from_edges(n, edges, weights).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Initial labels with roughly half the rows labeled (at least one).
pub fn random_labels(rng: &mut ChaCha8Rng, n: usize, c: usize) -> LabelMatrix {
    let mut y = Matrix::zeros(n, c);
    let forced = rng.random_range(0..n);
    for i in 0..n {
        if i == forced || rng.random_bool(0.5) {
            for j in 0..c {
                y[(i, j)] = if rng.random_bool(0.4) { 1.0 } else { -1.0 };
            }
        }
    }
    LabelMatrix::initial(y).unwrap()
}

pub fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}
