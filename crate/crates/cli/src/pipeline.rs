//! The `run` and `build` commands, independent of argument parsing.

use std::path::PathBuf;

use anyhow::{Context, Result};
use hyperlap::{
    cluster_count, coexpression_similarity, incidence_from_clusters, kfold_split, kmeans, run_experiment,
    threshold_adjacency, zscore_rows, ClusterAssignment, ExperimentConfig, ExperimentReport, ExpressionMatrix,
    Method,
};

use crate::io::{align_annotations, load_annotations, load_expression, render_adjacency, render_assignments};
use crate::report::{render_csv, render_json, write_atomically};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub expression: PathBuf,
    pub annotations: PathBuf,
    pub methods: Vec<Method>,
    pub experiment: ExperimentConfig,
    pub k_folds: usize,
    pub fold_seed: u64,
    pub out: PathBuf,
    pub write_adjacency: bool,
}

impl RunConfig {
    pub fn new(expression: impl Into<PathBuf>, annotations: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            expression: expression.into(),
            annotations: annotations.into(),
            methods: Method::ALL.to_vec(),
            experiment: ExperimentConfig { cluster_seed: crate::DEFAULT_CLUSTER_SEED, ..Default::default() },
            k_folds: crate::DEFAULT_FOLDS,
            fold_seed: crate::DEFAULT_FOLD_SEED,
            out: out.into(),
            write_adjacency: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: ExperimentReport,
    pub written: Vec<PathBuf>,
}

fn cluster(x: &ExpressionMatrix, seed: u64) -> Result<ClusterAssignment> {
    let z = zscore_rows(x);
    let k = cluster_count(z.n_genes()).context("choosing the number of clusters")?;
    kmeans(&z, k, seed).context("clustering genes into hyperedges")
}

/// Loads both tables, cross-validates the selected methods and writes
/// `report.json`, `report.csv`, `assignments.tsv` when a hypergraph method
/// ran, and `adjacency.tsv` on request. Nothing is written unless every
/// step succeeds.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.experiment.propagation.validate().context("invalid propagation settings")?;
    let x = load_expression(&cfg.expression)?;
    let raw = load_annotations(&cfg.annotations)?;
    let ann = align_annotations(&raw, x.gene_ids(), &cfg.annotations)?;
    let folds = kfold_split(x.n_genes(), cfg.k_folds, cfg.fold_seed).context("invalid --folds")?;
    let report = run_experiment(&x, &ann, &cfg.methods, &cfg.experiment, &folds).context("running the experiment")?;

    let mut files = vec![("report.json", render_json(&report)), ("report.csv", render_csv(&report))];
    if cfg.methods.iter().any(|m| m.uses_hypergraph()) {
        let a = cluster(&x, cfg.experiment.cluster_seed)?;
        files.push(("assignments.tsv", render_assignments(x.gene_ids(), &a.labels)));
    }
    if cfg.write_adjacency {
        let adj = threshold_adjacency(&coexpression_similarity(&x), cfg.experiment.threshold).context("invalid --threshold")?;
        files.push(("adjacency.tsv", render_adjacency(x.gene_ids(), adj.edges())));
    }
    let written =
        write_atomically(&cfg.out, &files).with_context(|| format!("writing reports to {}", cfg.out.display()))?;
    Ok(RunOutcome { report, written })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildConfig {
    pub expression: PathBuf,
    pub cluster_seed: u64,
    pub threshold: f64,
    pub out: PathBuf,
}

/// Writes the hypergraph (`assignments.tsv`, `hypergraph.coo`) and the
/// co-expression graph (`adjacency.tsv`) built from an expression table.
pub fn build_artifacts(cfg: &BuildConfig) -> Result<Vec<PathBuf>> {
    let x = load_expression(&cfg.expression)?;
    let a = cluster(&x, cfg.cluster_seed)?;
    let h = incidence_from_clusters(&a).context("building the incidence matrix")?;
    let adj = threshold_adjacency(&coexpression_similarity(&x), cfg.threshold).context("invalid --threshold")?;
    let files = [
        ("assignments.tsv", render_assignments(x.gene_ids(), &a.labels)),
        ("hypergraph.coo", h.to_coordinate_list()),
        ("adjacency.tsv", render_adjacency(x.gene_ids(), adj.edges())),
    ];
    write_atomically(&cfg.out, &files).with_context(|| format!("writing artifacts to {}", cfg.out.display()))
}
