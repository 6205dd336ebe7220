//! Hypergraph Laplacian semi-supervised learning.
//!
//! This crate builds hypergraphs from gene-expression data (z-scored rows,
//! k-means clusters as hyperedges), constructs the un-normalized, random-walk
//! and symmetric-normalized hypergraph Laplacians, and propagates multi-label
//! annotations over them. A pairwise co-expression graph baseline and a
//! k-fold cross-validation harness are included for comparison.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the command
//! line and synthetic data generation live in `hyperlap-cli`.
//!
//! ```text
//! expression ──zscore──► k-means ──► incidence H ──► L, L_rw, L_sym, S_rw, S_sym
//!      │                                                     │
//!      └──|pearson|──► threshold ──► A ──► D - A              ▼
//!                                          │          propagate / solve
//!                                          └────────────────► sign(F) ──► Q
//! ```

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod builder;
pub mod coexpression;
pub mod error;
pub mod evaluation;
pub mod hypergraph;
pub mod matrix;
pub mod propagation;

pub use builder::{cluster_count, incidence_from_clusters, kmeans, zscore_rows, ClusterAssignment, ExpressionMatrix};
pub use coexpression::{
    coexpression_similarity, graph_laplacian, threshold_adjacency, AdjacencyMatrix, SimilarityMatrix,
};
pub use error::{Error, Result};
pub use evaluation::{
    accuracy, kfold_split, run_experiment, AnnotationMatrix, ExperimentConfig, ExperimentReport, FoldPlan, Method,
};
pub use hypergraph::{
    compute_degrees, propagation_matrix, quadratic_form_oracle, random_walk_laplacian, symmetric_laplacian,
    unnormalized_laplacian, DegreeVectors, Hypergraph, OperatorKind, OperatorMatrix, PropagationKind,
};
pub use matrix::{Cholesky, Matrix};
pub use propagation::{
    build_initial_labels, predict, propagate_closed_form, propagate_iterative, solve_sym_regularized,
    solve_unnormalized, IterativeOutcome, LabelMatrix, LabelRole, Predictions, PropagationConfig,
};
