//! Hyperedges from expression data: z-scored profiles clustered by k-means,
//! one hyperedge per cluster.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::matrix::Matrix;

/// Genes × experiments expression values.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionMatrix {
    values: Matrix,
    gene_ids: Vec<String>,
}

impl ExpressionMatrix {
    /// Requires one unique id per row, at least two experiments and finite
    /// values throughout.
    pub fn new(values: Matrix, gene_ids: Vec<String>) -> Result<Self> {
        if values.rows() == 0 {
            return Err(Error::EmptyInput);
        }
        if gene_ids.len() != values.rows() {
            return Err(Error::DimensionMismatch {
                what: "gene id count",
                expected: values.rows(),
                found: gene_ids.len(),
            });
        }
        if values.cols() < 2 {
            return Err(Error::param("expression", format!("need at least 2 experiments, found {}", values.cols())));
        }
        for i in 0..values.rows() {
            if let Some(j) = values.row(i).iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFiniteValue { row: i, column: j });
            }
        }
        let mut seen = BTreeSet::new();
        for id in &gene_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(Self { values, gene_ids })
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn gene_ids(&self) -> &[String] {
        &self.gene_ids
    }

    pub fn n_genes(&self) -> usize {
        self.values.rows()
    }

    pub fn n_experiments(&self) -> usize {
        self.values.cols()
    }
}

/// Spread below this (relative to the row's magnitude) counts as constant.
const CONSTANT_ROW_EPS: f64 = 1e-12;

/// Per-row z-score with the population standard deviation. Constant rows
/// become all zeros.
pub fn zscore_rows(x: &ExpressionMatrix) -> ExpressionMatrix {
    let m = x.n_experiments() as f64;
    let mut out = x.values.clone();
    for i in 0..out.rows() {
        let row = out.row_mut(i);
        let mean = row.iter().sum::<f64>() / m;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
        let sd = libm::sqrt(var);
        if sd <= CONSTANT_ROW_EPS * mean.abs().max(1.0) {
            row.fill(0.0);
        } else {
            for v in row.iter_mut() {
                *v = (*v - mean) / sd;
            }
        }
    }
    ExpressionMatrix {
        values: out,
        gene_ids: x.gene_ids.clone(),
    }
}

/// `max(2, round(√(n/2)))`, rounding halves away from zero.
pub fn cluster_count(n: usize) -> Result<usize> {
    if n < 4 {
        return Err(Error::param("n", format!("need at least 4 genes to form 2 hyperedges, found {n}")));
    }
    let k = libm::round(libm::sqrt(n as f64 / 2.0)) as usize;
    Ok(k.max(2))
}

/// Hard k-means result after singleton repair.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    /// Cluster index per point, in `[0, k)`.
    pub labels: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    /// The `k` that was asked for; larger than `k` when clusters were merged away.
    pub requested_k: usize,
    /// Singleton clusters dissolved into their nearest neighbour cluster.
    pub singleton_merges: usize,
    pub iterations: usize,
    /// Within-cluster sum of squared distances after each Lloyd update.
    pub objective_history: Vec<f64>,
}

impl ClusterAssignment {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}

pub const KMEANS_MAX_ITERATIONS: usize = 100;
pub const KMEANS_RELATIVE_SHIFT: f64 = 1e-6;

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index and squared distance of the closest centroid; ties go to the lowest index.
fn nearest(point: &[f64], centroids: &Matrix) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for c in 0..centroids.rows() {
        let d = sq_dist(point, centroids.row(c));
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// D²-weighted seeding.
fn seed_centroids(points: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let n = points.rows();
    let mut centroids = Matrix::zeros(k, points.cols());
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    centroids.row_mut(0).copy_from_slice(points.row(first));
    let mut dist: Vec<f64> = (0..n).map(|i| sq_dist(points.row(i), points.row(first))).collect();
    for c in 1..k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in dist.iter().enumerate() {
                acc += d;
                if d > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // roundoff can leave `target` just past the final sum
            pick.unwrap_or_else(|| dist.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        centroids.row_mut(c).copy_from_slice(points.row(pick));
        for (i, d) in dist.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(i), points.row(pick)));
        }
    }
    centroids
}

fn objective(points: &Matrix, centroids: &Matrix, labels: &[usize]) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(points.row(i), centroids.row(l)))
        .sum()
}

/// Lloyd k-means on the rows of `x` with D²-weighted seeding from `seed`.
///
/// Empty clusters are reseeded at the point farthest from its centroid.
/// After the iteration stops, each singleton cluster hands its member to the
/// nearest other centroid and is dropped, so every returned cluster has at
/// least two members and `k` may shrink.
pub fn kmeans(x: &ExpressionMatrix, k: usize, seed: u64) -> Result<ClusterAssignment> {
    let points = x.values();
    let n = points.rows();
    if k < 2 || 2 * k > n {
        return Err(Error::param("k", format!("must satisfy 2 <= k <= n/2 for n = {n}, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(points, k, &mut rng);
    let mut labels = vec![usize::MAX; n];
    let mut history = Vec::new();
    let mut iterations = 0;

    for _ in 0..KMEANS_MAX_ITERATIONS {
        iterations += 1;
        let mut changed = false;
        for i in 0..n {
            let (c, _) = nearest(points.row(i), &centroids);
            if labels[i] != c {
                labels[i] = c;
                changed = true;
            }
        }

        let mut next = Matrix::zeros(k, points.cols());
        let mut sizes = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            sizes[l] += 1;
            for (acc, v) in next.row_mut(l).iter_mut().zip(points.row(i)) {
                *acc += v;
            }
        }
        for c in 0..k {
            if sizes[c] > 0 {
                let inv = 1.0 / sizes[c] as f64;
                next.row_mut(c).iter_mut().for_each(|v| *v *= inv);
            }
        }
        let mut reseeded = false;
        let mut taken = vec![false; n];
        for c in 0..k {
            if sizes[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| !taken[i] && sizes[labels[i]] > 1)
                .map(|i| (i, sq_dist(points.row(i), next.row(labels[i]))))
                .fold(None, |best: Option<(usize, f64)>, cand| match best {
                    Some(b) if b.1 >= cand.1 => Some(b),
                    _ => Some(cand),
                });
            if let Some((i, _)) = far {
                taken[i] = true;
                next.row_mut(c).copy_from_slice(points.row(i));
                reseeded = true;
            }
        }

        history.push(objective(points, &next, &labels));

        let shift: f64 = (0..k).map(|c| sq_dist(centroids.row(c), next.row(c))).sum();
        let scale: f64 = (0..k).map(|c| centroids.row(c).iter().map(|v| v * v).sum::<f64>()).sum();
        centroids = next;
        let settled = libm::sqrt(shift) <= KMEANS_RELATIVE_SHIFT * libm::sqrt(scale).max(f64::MIN_POSITIVE);
        if !reseeded && (!changed || settled) {
            break;
        }
    }

    let (labels, k_final, merges) = repair_singletons(points, &centroids, labels, k);
    if k_final < 2 {
        return Err(Error::DegenerateClustering { clusters: k_final });
    }
    Ok(ClusterAssignment {
        labels,
        k: k_final,
        seed,
        requested_k: k,
        singleton_merges: merges,
        iterations,
        objective_history: history,
    })
}

fn repair_singletons(points: &Matrix, centroids: &Matrix, mut labels: Vec<usize>, k: usize) -> (Vec<usize>, usize, usize) {
    let mut sizes = vec![0usize; k];
    for &l in &labels {
        sizes[l] += 1;
    }
    let mut merges = 0;
    while let Some(c) = (0..k).find(|&c| sizes[c] == 1) {
        let member = labels.iter().position(|&l| l == c).unwrap();
        let target = (0..k)
            .filter(|&o| o != c && sizes[o] > 0)
            .map(|o| (o, sq_dist(points.row(member), centroids.row(o))))
            .fold(None, |best: Option<(usize, f64)>, cand| match best {
                Some(b) if b.1 <= cand.1 => Some(b),
                _ => Some(cand),
            });
        let Some((target, _)) = target else { break };
        labels[member] = target;
        sizes[c] = 0;
        sizes[target] += 1;
        merges += 1;
    }
    let mut remap = vec![usize::MAX; k];
    let mut next = 0;
    for c in 0..k {
        if sizes[c] > 0 {
            remap[c] = next;
            next += 1;
        }
    }
    for l in labels.iter_mut() {
        *l = remap[*l];
    }
    (labels, next, merges)
}

/// One unit-weight hyperedge per cluster.
pub fn incidence_from_clusters(a: &ClusterAssignment) -> Result<Hypergraph> {
    if let Some(&bad) = a.labels.iter().find(|&&l| l >= a.k) {
        return Err(Error::param("labels", format!("cluster index {bad} outside [0, {})", a.k)));
    }
    Hypergraph::unweighted(a.labels.len(), a.members())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn expr(rows: &[&[f64]]) -> ExpressionMatrix {
        let m = Matrix::from_rows(rows).unwrap();
        let ids = (0..rows.len()).map(|i| format!("g{i}")).collect();
        ExpressionMatrix::new(m, ids).unwrap()
    }

    #[test]
    fn zscore_examples() {
        let z = zscore_rows(&expr(&[&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0], &[0.1, 0.1, 0.1]]));
        let r = libm::sqrt(1.5);
        let row = z.values().row(0);
        assert!((row[0] + r).abs() < 1e-12 && row[1].abs() < 1e-12 && (row[2] - r).abs() < 1e-12);
        assert_eq!(z.values().row(1), &[0.0, 0.0, 0.0]);
        assert_eq!(z.values().row(2), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn expression_validation() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let dup = ExpressionMatrix::new(m.clone(), vec!["a".to_string(), "a".to_string()]);
        assert_eq!(dup, Err(Error::DuplicateId("a".into())));
        let one_col = Matrix::from_rows(&[[1.0], [2.0]]).unwrap();
        assert!(ExpressionMatrix::new(one_col, vec!["a".into(), "b".into()]).is_err());
        let nan = Matrix::from_rows(&[[1.0, f64::NAN]]).unwrap();
        assert_eq!(
            ExpressionMatrix::new(nan, vec!["a".into()]),
            Err(Error::NonFiniteValue { row: 0, column: 1 })
        );
    }

    #[test]
    fn cluster_count_rule() {
        assert_eq!(cluster_count(4062).unwrap(), 45);
        assert_eq!(cluster_count(8).unwrap(), 2);
        assert_eq!(cluster_count(200).unwrap(), 10);
        assert_eq!(cluster_count(4).unwrap(), 2);
        assert_eq!(cluster_count(300).unwrap(), 12);
        assert!(cluster_count(3).is_err());
    }

    #[test]
    fn kmeans_separates_two_groups() {
        let mut rows = Vec::new();
        for i in 0..10 {
            let t = i as f64 * 0.1;
            rows.push(vec![t, -t]);
            rows.push(vec![100.0 + t, 100.0 - t]);
        }
        let x = ExpressionMatrix::new(
            Matrix::from_rows(&rows).unwrap(),
            (0..20).map(|i| format!("p{i}")).collect(),
        )
        .unwrap();
        let a = kmeans(&x, 2, 11).unwrap();
        assert_eq!(a.k, 2);
        for i in (0..20).step_by(2) {
            assert_eq!(a.labels[i], a.labels[0]);
            assert_eq!(a.labels[i + 1], a.labels[1]);
        }
        assert_ne!(a.labels[0], a.labels[1]);
    }

    #[test]
    fn kmeans_recovers_planted_pairs() {
        let pairs = 6;
        let mut rows = Vec::new();
        for p in 0..pairs {
            let base = p as f64 * 1000.0;
            rows.push(vec![base, base * 0.5]);
            rows.push(vec![base + 0.01, base * 0.5 - 0.01]);
        }
        let x = ExpressionMatrix::new(
            Matrix::from_rows(&rows).unwrap(),
            (0..2 * pairs).map(|i| format!("p{i}")).collect(),
        )
        .unwrap();
        for seed in 0..5 {
            let a = kmeans(&x, pairs, seed).unwrap();
            assert_eq!(a.k, pairs);
            for p in 0..pairs {
                assert_eq!(a.labels[2 * p], a.labels[2 * p + 1]);
            }
            assert_eq!(a.cluster_sizes(), vec![2; pairs]);
        }
    }

    #[test]
    fn kmeans_rejects_bad_k() {
        let x = expr(&[&[0.0, 1.0], &[1.0, 0.0], &[2.0, 2.0], &[3.0, 1.0]]);
        assert!(kmeans(&x, 1, 0).is_err());
        assert!(kmeans(&x, 3, 0).is_err());
        assert!(kmeans(&x, 2, 0).is_ok());
    }

    #[test]
    fn kmeans_on_identical_points_degenerates() {
        let x = expr(&[&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0]]);
        // every point ties with every centroid, so one cluster takes everything
        assert_eq!(kmeans(&x, 2, 3), Err(Error::DegenerateClustering { clusters: 1 }));
    }

    #[test]
    fn singleton_repair_merges_into_nearest() {
        let points = Matrix::from_rows(&[[0.0], [0.1], [5.0], [9.0], [9.1]]).unwrap();
        let centroids = Matrix::from_rows(&[[0.05], [5.0], [9.05]]).unwrap();
        let (labels, k, merges) = repair_singletons(&points, &centroids, vec![0, 0, 1, 2, 2], 3);
        assert_eq!(merges, 1);
        assert_eq!(k, 2);
        // 5.0 is closer to 9.05 than to 0.05
        assert_eq!(labels, vec![0, 0, 1, 1, 1]);
    }

    #[test]
    fn incidence_from_labels() {
        let a = ClusterAssignment {
            labels: vec![0, 0, 1, 1],
            k: 2,
            seed: 0,
            requested_k: 2,
            singleton_merges: 0,
            iterations: 1,
            objective_history: vec![],
        };
        let h = incidence_from_clusters(&a).unwrap();
        let want = Matrix::from_rows(&[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(h.incidence(), &want);
        assert_eq!(h.edge_weights(), &[1.0, 1.0]);
    }
}
