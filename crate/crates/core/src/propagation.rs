//! Label propagation over hypergraph operators.
//!
//! Three solvers share the same label matrices:
//!
//! * the iteration `F ← α S F + (1 - α) Y` for `S_rw` or `S_sym`,
//! * its limit `(1 - α)(I - α S)⁻¹ Y`,
//! * the regularized solutions `γ (L + γ I)⁻¹ Y` and `γ (L_sym + γ I)⁻¹ Y`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::evaluation::AnnotationMatrix;
use crate::hypergraph::{OperatorKind, OperatorMatrix};
use crate::matrix::{Cholesky, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelRole {
    /// Entries in `{+1, -1, 0}`; unlabeled rows are all zero.
    Initial,
    Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatrix {
    values: Matrix,
    role: LabelRole,
}

impl LabelMatrix {
    /// Validates an initial label matrix: every row is either all zero
    /// (unlabeled) or entirely `±1` (labeled).
    pub fn initial(values: Matrix) -> Result<Self> {
        if values.cols() == 0 {
            return Err(Error::param("labels", "at least one class column is required"));
        }
        for i in 0..values.rows() {
            let row = values.row(i);
            let labeled = row.iter().all(|&x| x == 1.0 || x == -1.0);
            let unlabeled = row.iter().all(|&x| x == 0.0);
            if !labeled && !unlabeled {
                return Err(Error::param(
                    "labels",
                    format!("row {i} must be all 0 or all ±1, found {row:?}"),
                ));
            }
        }
        Ok(Self {
            values,
            role: LabelRole::Initial,
        })
    }

    pub fn estimate(values: Matrix) -> Self {
        Self {
            values,
            role: LabelRole::Estimate,
        }
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn into_values(self) -> Matrix {
        self.values
    }

    pub fn role(&self) -> LabelRole {
        self.role
    }

    pub fn n_rows(&self) -> usize {
        self.values.rows()
    }

    pub fn n_classes(&self) -> usize {
        self.values.cols()
    }

    /// Rows that carry a label.
    pub fn labeled_rows(&self) -> Vec<usize> {
        (0..self.n_rows())
            .filter(|&i| self.values.row(i).iter().any(|&x| x != 0.0))
            .collect()
    }
}

/// Parameters shared by the propagation methods.
///
/// Fields are public so that the low-level solvers can be driven at the
/// boundary `α = 0`; [`PropagationConfig::validate`] enforces the strict
/// ranges that end-to-end runs require.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PropagationConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            alpha: 0.85,
            gamma: 1.0,
            tolerance: 1e-6,
            max_iterations: 1000,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param(
                "alpha",
                format!("must lie strictly between 0 and 1 for the iteration to converge, got {}", self.alpha),
            ));
        }
        check_gamma(self.gamma)?;
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::param("tolerance", format!("must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations", "must be positive"));
        }
        Ok(())
    }

    /// The `α` that makes the iterative and regularized views coincide.
    pub fn bridged_alpha(gamma: f64) -> f64 {
        1.0 / (1.0 + gamma)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::param("gamma", format!("must be positive, got {gamma}")))
    }
}

fn check_step_alpha(alpha: f64) -> Result<()> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must lie in [0, 1), got {alpha}")))
    }
}

fn check_rows(op: &OperatorMatrix, y: &LabelMatrix) -> Result<()> {
    if op.dim() != y.n_rows() {
        return Err(Error::DimensionMismatch {
            what: "label rows",
            expected: op.dim(),
            found: y.n_rows(),
        });
    }
    Ok(())
}

/// Maps training rows to `+1`/`-1` by annotation and leaves the rest at zero.
pub fn build_initial_labels(annotations: &AnnotationMatrix, train_mask: &[bool]) -> Result<LabelMatrix> {
    let (n, c) = (annotations.n_genes(), annotations.n_classes());
    if train_mask.len() != n {
        return Err(Error::DimensionMismatch {
            what: "training mask length",
            expected: n,
            found: train_mask.len(),
        });
    }
    if !train_mask.iter().any(|&t| t) {
        return Err(Error::EmptyTrainingSet);
    }
    let mut y = Matrix::zeros(n, c);
    for (i, _) in train_mask.iter().enumerate().filter(|(_, &t)| t) {
        for j in 0..c {
            y[(i, j)] = if annotations.get(i, j) { 1.0 } else { -1.0 };
        }
    }
    LabelMatrix::initial(y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeOutcome {
    pub labels: LabelMatrix,
    /// Number of update steps evaluated.
    pub iterations: usize,
    pub converged: bool,
    /// Max-abs change of the last evaluated step.
    pub last_change: f64,
}

/// Runs `F ← α S F + (1 - α) Y` from `F = Y`.
///
/// Returns the first iterate whose next update moves no entry by
/// `tolerance` or more, so the returned `F` is itself a fixed point to within
/// `tolerance`. When `max_iterations` is exhausted the last iterate is
/// returned with `converged = false`.
pub fn propagate_iterative(s: &OperatorMatrix, y: &LabelMatrix, cfg: &PropagationConfig) -> Result<IterativeOutcome> {
    s.expect_kind(
        &[OperatorKind::RandomWalkPropagation, OperatorKind::SymmetricPropagation],
        "S_rw or S_sym",
    )?;
    check_rows(s, y)?;
    check_step_alpha(cfg.alpha)?;
    let alpha = cfg.alpha;
    let seed = y.values().scale(1.0 - alpha);
    let mut f = y.values().clone();
    let mut last_change = f64::INFINITY;
    for step in 1..=cfg.max_iterations {
        let next = s.values().matmul(&f)?.scale(alpha).add_scaled(&seed, 1.0)?;
        last_change = next.max_abs_diff(&f)?;
        if last_change < cfg.tolerance {
            return Ok(IterativeOutcome {
                labels: LabelMatrix::estimate(f),
                iterations: step,
                converged: true,
                last_change,
            });
        }
        f = next;
    }
    Ok(IterativeOutcome {
        labels: LabelMatrix::estimate(f),
        iterations: cfg.max_iterations,
        converged: false,
        last_change,
    })
}

/// `(1 - α)(I - α S)⁻¹ Y` by a single multi-column solve.
///
/// `I - α S_sym` is symmetric positive definite and is factored directly.
/// `S_rw` is similar to `S_sym` through `D_v^{1/2}`, so
/// `(I - α S_rw)⁻¹ = D_v^{-1/2} (I - α S_sym)⁻¹ D_v^{1/2}` reuses the same
/// factorization; this needs the vertex degrees recorded on the operator.
pub fn propagate_closed_form(s: &OperatorMatrix, y: &LabelMatrix, alpha: f64) -> Result<LabelMatrix> {
    s.expect_kind(
        &[OperatorKind::RandomWalkPropagation, OperatorKind::SymmetricPropagation],
        "S_rw or S_sym",
    )?;
    check_rows(s, y)?;
    check_step_alpha(alpha)?;
    let rhs = y.values().scale(1.0 - alpha);
    match s.kind() {
        OperatorKind::SymmetricPropagation => {
            let system = s.values().scale(-alpha).shift_diagonal(1.0);
            Ok(LabelMatrix::estimate(Cholesky::new(&system)?.solve(&rhs)?))
        }
        _ => {
            let degrees = s.vertex_degrees().ok_or_else(|| {
                Error::param("s", "S_rw closed form needs the vertex degrees it was built from")
            })?;
            let sqrt_d: Vec<f64> = degrees.iter().map(|&d| libm::sqrt(d)).collect();
            let inv_sqrt_d: Vec<f64> = sqrt_d.iter().map(|&r| 1.0 / r).collect();
            let s_sym = s.values().scale_rows_cols(&sqrt_d, &inv_sqrt_d);
            let system = s_sym.scale(-alpha).shift_diagonal(1.0);
            let ones = alloc::vec![1.0; rhs.cols()];
            let g = Cholesky::new(&system)?.solve(&rhs.scale_rows_cols(&sqrt_d, &ones))?;
            Ok(LabelMatrix::estimate(g.scale_rows_cols(&inv_sqrt_d, &ones)))
        }
    }
}

/// `γ (L + γ I)⁻¹ Y`, the minimizer of `tr(Fᵀ L F) + γ ‖F - Y‖²`.
pub fn solve_unnormalized(l: &OperatorMatrix, y: &LabelMatrix, gamma: f64) -> Result<LabelMatrix> {
    l.expect_kind(&[OperatorKind::Unnormalized], "L")?;
    regularized(l, y, gamma)
}

/// `γ (L_sym + γ I)⁻¹ Y`; identical to the closed-form propagation with
/// `α = 1 / (1 + γ)`.
pub fn solve_sym_regularized(lsym: &OperatorMatrix, y: &LabelMatrix, gamma: f64) -> Result<LabelMatrix> {
    lsym.expect_kind(&[OperatorKind::SymmetricNormalized], "L_sym")?;
    regularized(lsym, y, gamma)
}

fn regularized(l: &OperatorMatrix, y: &LabelMatrix, gamma: f64) -> Result<LabelMatrix> {
    check_gamma(gamma)?;
    check_rows(l, y)?;
    let system = l.values().shift_diagonal(gamma);
    let f = Cholesky::new(&system)?.solve(&y.values().scale(gamma))?;
    Ok(LabelMatrix::estimate(f))
}

/// Sign predictions in `{+1, -1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predictions {
    rows: usize,
    cols: usize,
    signs: Vec<i8>,
}

impl Predictions {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.cols + j]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// `sign(F)`, with an exact zero predicted as non-membership (`-1`).
pub fn predict(f: &LabelMatrix) -> Predictions {
    let v = f.values();
    Predictions {
        rows: v.rows(),
        cols: v.cols(),
        signs: v.as_slice().iter().map(|&x| if x > 0.0 { 1 } else { -1 }).collect(),
    }
}
