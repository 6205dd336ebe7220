//! Planted-module expression data with module-aligned classes.

use hyperlap::{AnnotationMatrix, ExpressionMatrix, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub n_genes: usize,
    pub n_experiments: usize,
    pub n_modules: usize,
    pub n_classes: usize,
    /// Standard deviation of the per-gene noise.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_genes: 300,
            n_experiments: 20,
            n_modules: 12,
            n_classes: 6,
            noise: 0.3,
            seed: crate::DEFAULT_SYNTHETIC_SEED,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SyntheticError {
    #[error("--modules must be at least 2, got {0}")]
    TooFewModules(usize),
    #[error("--genes must be at least twice --modules ({modules}), got {genes}")]
    TooFewGenes { genes: usize, modules: usize },
    #[error("--experiments must be at least 2, got {0}")]
    TooFewExperiments(usize),
    #[error("--classes must lie in 1..={modules}, got {classes}")]
    BadClassCount { classes: usize, modules: usize },
    #[error("--noise must be finite and non-negative, got {0}")]
    BadNoise(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub expression: ExpressionMatrix,
    pub annotations: AnnotationMatrix,
    /// Module index of each gene.
    pub modules: Vec<usize>,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), SyntheticError> {
        if self.n_modules < 2 {
            return Err(SyntheticError::TooFewModules(self.n_modules));
        }
        if self.n_genes < 2 * self.n_modules {
            return Err(SyntheticError::TooFewGenes { genes: self.n_genes, modules: self.n_modules });
        }
        if self.n_experiments < 2 {
            return Err(SyntheticError::TooFewExperiments(self.n_experiments));
        }
        if self.n_classes == 0 || self.n_classes > self.n_modules {
            return Err(SyntheticError::BadClassCount { classes: self.n_classes, modules: self.n_modules });
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(SyntheticError::BadNoise(self.noise));
        }
        Ok(())
    }
}

/// Genes are split into contiguous, near-equal modules. Each module draws
/// a standard normal mean profile and each gene adds `noise · N(0, 1)` per
/// experiment. Class `j` is the union of modules `m` with `m % n_classes == j`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticData, SyntheticError> {
    spec.validate()?;
    let (n, m, k) = (spec.n_genes, spec.n_experiments, spec.n_modules);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let profiles: Vec<Vec<f64>> =
        (0..k).map(|_| (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect();
    let modules: Vec<usize> = (0..n).map(|g| g * k / n).collect();
    let rows: Vec<Vec<f64>> = modules
        .iter()
        .map(|&p| {
            profiles[p]
                .iter()
                .map(|&mu| mu + spec.noise * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();

    let width = n.to_string().len();
    let gene_ids: Vec<String> = (0..n).map(|g| format!("G{g:0width$}")).collect();
    let class_ids: Vec<String> = (0..spec.n_classes).map(|c| format!("C{c:02}")).collect();
    let annotations: Vec<bool> = modules
        .iter()
        .flat_map(|&p| (0..spec.n_classes).map(move |c| p % spec.n_classes == c))
        .collect();

    let values = Matrix::from_rows(&rows).expect("rows have equal length");
    let expression = ExpressionMatrix::new(values, gene_ids.clone()).expect("generated data is valid");
    let annotations =
        AnnotationMatrix::new(annotations, n, class_ids, gene_ids).expect("generated annotations are valid");
    Ok(SyntheticData { expression, annotations, modules })
}
