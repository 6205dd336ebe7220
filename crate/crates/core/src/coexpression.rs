//! Pairwise co-expression graph used as the baseline: `|Pearson|`
//! similarity, a strict threshold, and the graph Laplacian `D - A`.

use alloc::format;

use crate::builder::{zscore_rows, ExpressionMatrix};
use crate::error::{Error, Result};
use crate::hypergraph::{OperatorKind, OperatorMatrix};
use crate::matrix::Matrix;

/// Symmetric `n × n` similarities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    values: Matrix,
}

impl SimilarityMatrix {
    pub fn values(&self) -> &Matrix {
        &self.values
    }
}

/// Symmetric 0/1 adjacency with an empty diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    values: Matrix,
    threshold: f64,
}

impl AdjacencyMatrix {
    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn n_vertices(&self) -> usize {
        self.values.rows()
    }

    /// `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n_vertices();
        (0..n).flat_map(move |i| ((i + 1)..n).filter(move |&j| self.values[(i, j)] == 1.0).map(move |j| (i, j)))
    }

    pub fn degrees(&self) -> alloc::vec::Vec<f64> {
        self.values.row_sums()
    }
}

/// `s(i, j) = |corr(g_i, g_j)|`, computed as the dot product of z-scored rows
/// over `m`. Rows with no variance get similarity 0 with everything,
/// themselves included.
pub fn coexpression_similarity(x: &ExpressionMatrix) -> SimilarityMatrix {
    let z = zscore_rows(x);
    let z = z.values();
    let (n, m) = (z.rows(), z.cols() as f64);
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let dot: f64 = z.row(i).iter().zip(z.row(j)).map(|(a, b)| a * b).sum();
            let v = (dot / m).abs().min(1.0);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    SimilarityMatrix { values: s }
}

/// `A(i, j) = 1` iff `s(i, j) > threshold` and `i != j`.
pub fn threshold_adjacency(s: &SimilarityMatrix, threshold: f64) -> Result<AdjacencyMatrix> {
    if !(0.0..1.0).contains(&threshold) {
        return Err(Error::param("threshold", format!("must lie in [0, 1), got {threshold}")));
    }
    let n = s.values.rows();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j && s.values[(i, j)] > threshold {
                a[(i, j)] = 1.0;
            }
        }
    }
    Ok(AdjacencyMatrix { values: a, threshold })
}

/// `L = D - A`. Isolated vertices give zero rows.
pub fn graph_laplacian(a: &AdjacencyMatrix) -> OperatorMatrix {
    let degrees = a.degrees();
    let mut l = a.values.map(|x| -x);
    for (i, d) in degrees.into_iter().enumerate() {
        l[(i, i)] += d;
    }
    OperatorMatrix::new(OperatorKind::Unnormalized, l).expect("adjacency is square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::{solve_unnormalized, LabelMatrix};
    use alloc::string::String;
    use alloc::vec;
    use alloc::vec::Vec;

    fn expr(rows: &[&[f64]]) -> ExpressionMatrix {
        let ids: Vec<String> = (0..rows.len()).map(|i| format!("g{i}")).collect();
        ExpressionMatrix::new(Matrix::from_rows(rows).unwrap(), ids).unwrap()
    }

    fn adjacency(rows: &[&[f64]]) -> AdjacencyMatrix {
        AdjacencyMatrix {
            values: Matrix::from_rows(rows).unwrap(),
            threshold: 0.5,
        }
    }

    #[test]
    fn pearson_examples() {
        let s = coexpression_similarity(&expr(&[
            &[1.0, 2.0, 3.0],
            &[2.0, 4.0, 6.0],
            &[3.0, 2.0, 1.0],
            &[1.0, 0.0, 1.0],
            &[7.0, 7.0, 7.0],
        ]));
        let v = s.values();
        assert!((v[(0, 1)] - 1.0).abs() < 1e-12);
        assert!((v[(0, 2)] - 1.0).abs() < 1e-12);
        assert!(v[(0, 3)].abs() < 1e-12);
        assert_eq!(v[(4, 4)], 0.0);
        assert_eq!(v[(0, 4)], 0.0);
        assert!((v[(0, 0)] - 1.0).abs() < 1e-12);
        assert_eq!(v.asymmetry(), 0.0);
        assert!(v.as_slice().iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn threshold_is_strict_and_loop_free() {
        let s = SimilarityMatrix {
            values: Matrix::from_rows(&[[1.0, 0.6, 0.5], [0.6, 1.0, 0.2], [0.5, 0.2, 1.0]]).unwrap(),
        };
        let a = threshold_adjacency(&s, 0.5).unwrap();
        assert_eq!(a.values()[(0, 1)], 1.0);
        assert_eq!(a.values()[(0, 2)], 0.0);
        assert!((0..3).all(|i| a.values()[(i, i)] == 0.0));
        assert_eq!(a.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(threshold_adjacency(&s, 1.0).is_err());
        assert!(threshold_adjacency(&s, -0.1).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let l = graph_laplacian(&adjacency(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(l.values(), &Matrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap());
        let l = graph_laplacian(&adjacency(&[&[0.0, 0.0], &[0.0, 0.0]]));
        assert_eq!(l.values().max_abs(), 0.0);
        let l = graph_laplacian(&adjacency(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]));
        let want = Matrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]).unwrap();
        assert_eq!(l.values(), &want);
        assert!(l.values().row_sums().iter().all(|&r| r == 0.0));
    }

    #[test]
    fn isolated_vertex_baseline_is_well_posed() {
        let a = adjacency(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let l = graph_laplacian(&a);
        let y = LabelMatrix::initial(Matrix::column(&[1.0, 0.0, 0.0])).unwrap();
        let f = solve_unnormalized(&l, &y, 1.0).unwrap();
        let v = f.values();
        assert!(v[(1, 0)] > 0.0);
        assert_eq!(v[(2, 0)], 0.0);
        let residual = l.values().matmul(v).unwrap().add_scaled(&v.add_scaled(y.values(), -1.0).unwrap(), 1.0).unwrap();
        assert!(residual.max_abs() < 1e-12);
    }
}
