//! File formats, synthetic data and the experiment driver behind the
//! `hyperlap` binary.

pub mod inspect;
pub mod io;
pub mod pipeline;
pub mod report;
pub mod synthetic;

pub use io::{align_annotations, load_annotations, load_expression, LoadError};
pub use pipeline::{build_artifacts, run, BuildConfig, RunConfig, RunOutcome};
pub use report::{render_csv, render_json, write_atomically, SCHEMA_VERSION};
pub use synthetic::{generate_synthetic, SyntheticData, SyntheticError, SyntheticSpec};

/// Seed used for k-means when none is given.
pub const DEFAULT_CLUSTER_SEED: u64 = 42;
/// Seed used for the fold split when none is given.
pub const DEFAULT_FOLD_SEED: u64 = 7;
/// Seed used by `generate` when none is given.
pub const DEFAULT_SYNTHETIC_SEED: u64 = 2013;
pub const DEFAULT_FOLDS: usize = 3;
