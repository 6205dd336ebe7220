//! Multi-label k-fold cross-validation of the four propagation methods.
//!
//! The hypergraph and the co-expression graph are built once from the
//! expression data (no labels involved) and shared by every fold; only the
//! initial label matrix changes between folds. Accuracy is scored per class
//! on held-out genes, averaged over folds, then over classes.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::builder::{cluster_count, incidence_from_clusters, kmeans, zscore_rows, ExpressionMatrix};
use crate::coexpression::{coexpression_similarity, graph_laplacian, threshold_adjacency};
use crate::error::{Error, Result};
use crate::hypergraph::{compute_degrees, propagation_matrix, unnormalized_laplacian, OperatorMatrix, PropagationKind};
use crate::propagation::{
    build_initial_labels, predict, propagate_iterative, solve_unnormalized, Predictions, PropagationConfig,
};

/// Genes × classes binary annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationMatrix {
    values: Vec<bool>,
    n_genes: usize,
    class_ids: Vec<String>,
    gene_ids: Vec<String>,
}

impl AnnotationMatrix {
    /// `values` is row-major, `n_genes × class_ids.len()`.
    pub fn new(values: Vec<bool>, n_genes: usize, class_ids: Vec<String>, gene_ids: Vec<String>) -> Result<Self> {
        if class_ids.is_empty() || n_genes == 0 {
            return Err(Error::EmptyInput);
        }
        if gene_ids.len() != n_genes {
            return Err(Error::DimensionMismatch {
                what: "gene id count",
                expected: n_genes,
                found: gene_ids.len(),
            });
        }
        if values.len() != n_genes * class_ids.len() {
            return Err(Error::DimensionMismatch {
                what: "annotation cell count",
                expected: n_genes * class_ids.len(),
                found: values.len(),
            });
        }
        for ids in [&gene_ids, &class_ids] {
            let mut seen = BTreeSet::new();
            if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
                return Err(Error::DuplicateId(dup.clone()));
            }
        }
        Ok(Self {
            values,
            n_genes,
            class_ids,
            gene_ids,
        })
    }

    #[inline]
    pub fn get(&self, gene: usize, class: usize) -> bool {
        self.values[gene * self.class_ids.len() + class]
    }

    pub fn n_genes(&self) -> usize {
        self.n_genes
    }

    pub fn n_classes(&self) -> usize {
        self.class_ids.len()
    }

    pub fn class_ids(&self) -> &[String] {
        &self.class_ids
    }

    pub fn gene_ids(&self) -> &[String] {
        &self.gene_ids
    }

    pub fn column(&self, class: usize) -> Vec<bool> {
        (0..self.n_genes).map(|i| self.get(i, class)).collect()
    }

    pub fn positives(&self, class: usize) -> usize {
        (0..self.n_genes).filter(|&i| self.get(i, class)).count()
    }

    /// Keeps only the listed classes, in the given order.
    pub fn select_classes(&self, classes: &[usize]) -> Self {
        let mut values = Vec::with_capacity(self.n_genes * classes.len());
        for i in 0..self.n_genes {
            values.extend(classes.iter().map(|&j| self.get(i, j)));
        }
        Self {
            values,
            n_genes: self.n_genes,
            class_ids: classes.iter().map(|&j| self.class_ids[j].clone()).collect(),
            gene_ids: self.gene_ids.clone(),
        }
    }
}

/// Fraction of positions where a `±1` prediction matches a 0/1 truth:
/// `(TP + TN) / (TP + TN + FP + FN)`.
pub fn accuracy(predicted: &[i8], truth: &[bool]) -> Result<f64> {
    if predicted.is_empty() {
        return Err(Error::EmptyInput);
    }
    if predicted.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            what: "truth length",
            expected: predicted.len(),
            found: truth.len(),
        });
    }
    let hits = predicted.iter().zip(truth).filter(|(&p, &t)| (p > 0) == t).count();
    Ok(hits as f64 / predicted.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldPlan {
    pub k_folds: usize,
    /// Fold index per gene.
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn train_mask(&self, fold: usize) -> Vec<bool> {
        self.assignments.iter().map(|&f| f != fold).collect()
    }

    pub fn test_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len()).filter(|&i| self.assignments[i] == fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k_folds];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.assignments.len() != n {
            return Err(Error::DimensionMismatch {
                what: "fold assignment count",
                expected: n,
                found: self.assignments.len(),
            });
        }
        if self.k_folds < 2 {
            return Err(Error::param("folds", "need at least 2 folds"));
        }
        let sizes = self.assignments.iter().try_fold(vec![0usize; self.k_folds], |mut acc, &f| {
            *acc.get_mut(f)? += 1;
            Some(acc)
        });
        match sizes {
            Some(s) if s.iter().all(|&c| c > 0) => Ok(()),
            _ => Err(Error::param("folds", "every fold index must be in range and every fold non-empty")),
        }
    }
}

/// Seeded shuffle dealt round-robin into `k` folds whose sizes differ by at most one.
pub fn kfold_split(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::param("folds", format!("need at least 2 folds, got {k}")));
    }
    if k > n {
        return Err(Error::param("folds", format!("{k} folds cannot be drawn from {n} genes")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignments = vec![0; n];
    for (pos, &gene) in order.iter().enumerate() {
        assignments[gene] = pos % k;
    }
    Ok(FoldPlan {
        k_folds: k,
        assignments,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Method {
    /// Un-normalized Laplacian of the thresholded co-expression graph.
    Graph,
    HypergraphUnnormalized,
    HypergraphRandomWalk,
    HypergraphSymmetric,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Graph,
        Method::HypergraphUnnormalized,
        Method::HypergraphRandomWalk,
        Method::HypergraphSymmetric,
    ];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Method::Graph => "graph",
            Method::HypergraphUnnormalized => "hypergraph-unnormalized",
            Method::HypergraphRandomWalk => "hypergraph-random-walk",
            Method::HypergraphSymmetric => "hypergraph-symmetric",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Method::Graph => "Graph (un-normalized)",
            Method::HypergraphUnnormalized => "Hypergraph (un-normalized)",
            Method::HypergraphRandomWalk => "Hypergraph (random walk)",
            Method::HypergraphSymmetric => "Hypergraph (normalized)",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn uses_hypergraph(self) -> bool {
        self != Method::Graph
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentConfig {
    pub propagation: PropagationConfig,
    /// Similarity threshold for the co-expression graph.
    pub threshold: f64,
    pub cluster_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            propagation: PropagationConfig::default(),
            threshold: 0.5,
            cluster_seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassAccuracy {
    pub class_id: String,
    /// Held-out accuracy per fold, in fold order.
    pub fold_accuracy: Vec<f64>,
    pub mean_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MethodResult {
    pub method: Method,
    pub classes: Vec<ClassAccuracy>,
    /// Mean of the per-class means; `None` when every class was excluded.
    pub average_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExcludedClass {
    pub class_id: String,
    pub positives: usize,
    pub negatives: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceRecord {
    pub method: Method,
    pub fold: usize,
    pub iterations: usize,
    pub converged: bool,
    pub last_change: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AgreementRecord {
    pub first: Method,
    pub second: Method,
    /// Fraction of held-out (gene, class) cells predicted identically.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HypergraphSummary {
    pub requested_clusters: usize,
    pub clusters: usize,
    pub singleton_merges: usize,
    pub kmeans_iterations: usize,
    pub cluster_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraphSummary {
    pub edges: usize,
    pub isolated_vertices: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReportMetadata {
    pub n_genes: usize,
    pub n_experiments: usize,
    pub n_classes: usize,
    pub config: ExperimentConfig,
    pub k_folds: usize,
    pub fold_seed: u64,
    pub fold_sizes: Vec<usize>,
    pub hypergraph: Option<HypergraphSummary>,
    pub graph: Option<GraphSummary>,
    pub convergence: Vec<ConvergenceRecord>,
    pub agreement: Vec<AgreementRecord>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentReport {
    pub results: Vec<MethodResult>,
    pub excluded_classes: Vec<ExcludedClass>,
    pub metadata: ReportMetadata,
}

impl ExperimentReport {
    pub fn result(&self, method: Method) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }

    pub fn average(&self, method: Method) -> Option<f64> {
        self.result(method).and_then(|r| r.average_accuracy)
    }

    /// Largest deviation between stored averages and a recomputation from the
    /// per-fold values.
    pub fn consistency_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in &self.results {
            let mut class_sum = 0.0;
            for c in &r.classes {
                let mean = c.fold_accuracy.iter().sum::<f64>() / c.fold_accuracy.len() as f64;
                worst = worst.max((mean - c.mean_accuracy).abs());
                class_sum += c.mean_accuracy;
            }
            if let Some(avg) = r.average_accuracy {
                worst = worst.max((class_sum / r.classes.len() as f64 - avg).abs());
            }
        }
        worst
    }
}

struct Operators {
    graph: Option<OperatorMatrix>,
    unnormalized: Option<OperatorMatrix>,
    walk: Option<OperatorMatrix>,
    symmetric: Option<OperatorMatrix>,
}

fn solve_method(
    method: Method,
    ops: &Operators,
    y: &crate::propagation::LabelMatrix,
    cfg: &PropagationConfig,
    fold: usize,
    convergence: &mut Vec<ConvergenceRecord>,
) -> Result<Predictions> {
    let missing = || Error::param("method", "operator was not built");
    let f = match method {
        Method::Graph => solve_unnormalized(ops.graph.as_ref().ok_or_else(missing)?, y, cfg.gamma)?,
        Method::HypergraphUnnormalized => {
            solve_unnormalized(ops.unnormalized.as_ref().ok_or_else(missing)?, y, cfg.gamma)?
        }
        Method::HypergraphRandomWalk | Method::HypergraphSymmetric => {
            let s = if method == Method::HypergraphRandomWalk { &ops.walk } else { &ops.symmetric };
            let out = propagate_iterative(s.as_ref().ok_or_else(missing)?, y, cfg)?;
            convergence.push(ConvergenceRecord {
                method,
                fold,
                iterations: out.iterations,
                converged: out.converged,
                last_change: out.last_change,
            });
            out.labels
        }
    };
    Ok(predict(&f))
}

/// Cross-validates each requested method.
///
/// Classes whose annotations are all positive or all negative are excluded
/// and listed in the report. An empty method set yields a report holding
/// metadata only.
pub fn run_experiment(
    x: &ExpressionMatrix,
    ann: &AnnotationMatrix,
    methods: &[Method],
    cfg: &ExperimentConfig,
    folds: &FoldPlan,
) -> Result<ExperimentReport> {
    cfg.propagation.validate()?;
    let n = x.n_genes();
    if ann.n_genes() != n {
        return Err(Error::DimensionMismatch {
            what: "annotation rows",
            expected: n,
            found: ann.n_genes(),
        });
    }
    folds.validate(n)?;

    let methods: Vec<Method> = methods.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();

    let mut included = Vec::new();
    let mut excluded_classes = Vec::new();
    for j in 0..ann.n_classes() {
        let positives = ann.positives(j);
        if positives == 0 || positives == n {
            excluded_classes.push(ExcludedClass {
                class_id: ann.class_ids()[j].clone(),
                positives,
                negatives: n - positives,
            });
        } else {
            included.push(j);
        }
    }
    let scored = ann.select_classes(&included);

    let mut metadata = ReportMetadata {
        n_genes: n,
        n_experiments: x.n_experiments(),
        n_classes: ann.n_classes(),
        config: *cfg,
        k_folds: folds.k_folds,
        fold_seed: folds.seed,
        fold_sizes: folds.fold_sizes(),
        hypergraph: None,
        graph: None,
        convergence: Vec::new(),
        agreement: Vec::new(),
    };

    if methods.is_empty() {
        return Ok(ExperimentReport {
            results: Vec::new(),
            excluded_classes,
            metadata,
        });
    }
    if methods.contains(&Method::Graph) {
        check_threshold(cfg.threshold)?;
    }

    let mut ops = Operators {
        graph: None,
        unnormalized: None,
        walk: None,
        symmetric: None,
    };
    if methods.iter().any(|m| m.uses_hypergraph()) {
        let z = zscore_rows(x);
        let assignment = kmeans(&z, cluster_count(n)?, cfg.cluster_seed)?;
        let h = incidence_from_clusters(&assignment)?;
        let d = compute_degrees(&h);
        metadata.hypergraph = Some(HypergraphSummary {
            requested_clusters: assignment.requested_k,
            clusters: assignment.k,
            singleton_merges: assignment.singleton_merges,
            kmeans_iterations: assignment.iterations,
            cluster_sizes: assignment.cluster_sizes(),
        });
        for &m in &methods {
            match m {
                Method::HypergraphUnnormalized => ops.unnormalized = Some(unnormalized_laplacian(&h, &d)?),
                Method::HypergraphRandomWalk => {
                    ops.walk = Some(propagation_matrix(&h, &d, PropagationKind::RandomWalk)?)
                }
                Method::HypergraphSymmetric => {
                    ops.symmetric = Some(propagation_matrix(&h, &d, PropagationKind::Symmetric)?)
                }
                Method::Graph => {}
            }
        }
    }
    if methods.contains(&Method::Graph) {
        let a = threshold_adjacency(&coexpression_similarity(x), cfg.threshold)?;
        let degrees = a.degrees();
        metadata.graph = Some(GraphSummary {
            edges: a.edges().count(),
            isolated_vertices: degrees.iter().filter(|&&d| d == 0.0).count(),
        });
        ops.graph = Some(graph_laplacian(&a));
    }

    let c = scored.n_classes();
    // fold_q[method][class][fold]
    let mut fold_q = vec![vec![vec![0.0; folds.k_folds]; c]; methods.len()];
    let mut agree = vec![vec![0usize; methods.len()]; methods.len()];
    let mut cells = 0usize;

    if c > 0 {
        for fold in 0..folds.k_folds {
            let y = build_initial_labels(&scored, &folds.train_mask(fold))?;
            let test = folds.test_rows(fold);
            let mut preds = Vec::with_capacity(methods.len());
            for &m in &methods {
                preds.push(solve_method(m, &ops, &y, &cfg.propagation, fold, &mut metadata.convergence)?);
            }
            for (mi, p) in preds.iter().enumerate() {
                for j in 0..c {
                    let predicted: Vec<i8> = test.iter().map(|&i| p.get(i, j)).collect();
                    let truth: Vec<bool> = test.iter().map(|&i| scored.get(i, j)).collect();
                    fold_q[mi][j][fold] = accuracy(&predicted, &truth)?;
                }
            }
            for a in 0..methods.len() {
                for b in (a + 1)..methods.len() {
                    agree[a][b] += test
                        .iter()
                        .flat_map(|&i| (0..c).map(move |j| (i, j)))
                        .filter(|&(i, j)| preds[a].get(i, j) == preds[b].get(i, j))
                        .count();
                }
            }
            cells += test.len() * c;
        }
    }

    let results = methods
        .iter()
        .zip(fold_q)
        .map(|(&method, per_class)| {
            let classes: Vec<ClassAccuracy> = per_class
                .into_iter()
                .enumerate()
                .map(|(j, fold_accuracy)| ClassAccuracy {
                    class_id: scored.class_ids()[j].clone(),
                    mean_accuracy: fold_accuracy.iter().sum::<f64>() / fold_accuracy.len() as f64,
                    fold_accuracy,
                })
                .collect();
            let average_accuracy = if classes.is_empty() {
                None
            } else {
                Some(classes.iter().map(|c| c.mean_accuracy).sum::<f64>() / classes.len() as f64)
            };
            MethodResult {
                method,
                classes,
                average_accuracy,
            }
        })
        .collect();

    if cells > 0 {
        for a in 0..methods.len() {
            for b in (a + 1)..methods.len() {
                metadata.agreement.push(AgreementRecord {
                    first: methods[a],
                    second: methods[b],
                    rate: agree[a][b] as f64 / cells as f64,
                });
            }
        }
    }

    Ok(ExperimentReport {
        results,
        excluded_classes,
        metadata,
    })
}

fn check_threshold(threshold: f64) -> Result<()> {
    if (0.0..1.0).contains(&threshold) {
        Ok(())
    } else {
        Err(Error::param("threshold", format!("must lie in [0, 1), got {threshold}")))
    }
}
