//! Dense linear maps and the linear spaces cut out by permutation constraints.
//!
//! Two independent routes compute the dimension of each constrained space:
//!
//! 1. Exact integer trace formulas over the acting group: the commutant
//!    (equivariant) space has dimension `avg_g tr(P(g))^2`, and the
//!    invariant-symmetric space for a pair of actions has dimension
//!    `avg_{g1} tr(P(g1)) * avg_{g2} tr(P(g2))`. Traces of permutation
//!    matrices are fixed-point counts, so these sums never touch floats.
//! 2. A brute-force null-space route: each matrix constraint `A L B = L`
//!    is vectorized to `(B^T (x) A - I) vec(L) = 0`, the constraint blocks
//!    are stacked, and the null-space dimension is read off a singular
//!    value decomposition.
//!
//! Group-averaged projectors onto the same spaces round out the module;
//! they are idempotent and their images satisfy the defining constraints
//! to machine precision.

use crate::perm::{perm_matrix, PermAction, ProductAction, ProductMode};
use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

/// Singular values below `1e-8 * max(largest, 1.0)` count as zero. The
/// constraint matrices have entries in `{-1, 0, 1}` and order-one spectral
/// gaps, so the threshold is far from both sides.
pub const SINGULAR_VALUE_TOLERANCE_FACTOR: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum LinearError {
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("expected a {expected_rows}x{expected_cols} matrix, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("constraint list is empty")]
    EmptyConstraints,
    #[error("constraints must be square and share shapes: all left factors {0}x{0}, all right factors {1}x{1}")]
    InconsistentConstraints(usize, usize),
    #[error("trace sum {sum} is not divisible by the group volume {volume}; the action is broken")]
    NonIntegerDimension { sum: usize, volume: usize },
    #[error("input and output actions must share one group")]
    GroupMismatch,
}

/// A dense real matrix with finite entries, acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    inner: DMatrix<f64>,
}

impl LinearMap {
    pub fn from_matrix(inner: DMatrix<f64>) -> Result<Self, LinearError> {
        if inner.iter().any(|v| !v.is_finite()) {
            return Err(LinearError::NonFiniteEntry);
        }
        Ok(Self { inner })
    }

    /// Builds the matrix entry-wise from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    /// Builds from row-major data; errors if the length or entries are off.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self, LinearError> {
        if data.len() != rows * cols {
            return Err(LinearError::ShapeMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: data.len() / cols.max(1),
                cols,
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, data))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    fn trusted(inner: DMatrix<f64>) -> Self {
        debug_assert!(inner.iter().all(|v| v.is_finite()));
        Self { inner }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.inner[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols(), "input length must match the column count");
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.inner[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Largest absolute entry-wise difference; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &LinearMap) -> f64 {
        assert_eq!((self.rows(), self.cols()), (other.rows(), other.cols()));
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Dimension report for one constrained linear space: the trace-formula
/// count next to the null-space count, with the singular values that
/// produced the latter (descending).
#[derive(Debug, Clone, Serialize)]
pub struct EquiSpaceReport {
    pub formula_dim: usize,
    pub nullspace_dim: usize,
    pub singular_values: Vec<f64>,
}

impl EquiSpaceReport {
    pub fn is_match(&self) -> bool {
        self.formula_dim == self.nullspace_dim
    }
}

fn exact_quotient(sum: usize, volume: usize) -> Result<usize, LinearError> {
    if !sum.is_multiple_of(volume) {
        return Err(LinearError::NonIntegerDimension { sum, volume });
    }
    Ok(sum / volume)
}

/// Dimension of the space of square matrices commuting with every
/// permutation of the action: `avg_g tr(P(g))^2`, computed exactly.
pub fn equi_dim(a: &PermAction) -> Result<usize, LinearError> {
    let sum: usize = a
        .group()
        .elements()
        .map(|g| a.perm(g).fixed_points().pow(2))
        .sum();
    exact_quotient(sum, a.order())
}

/// Dimension of the space of maps `L` with `P_out(g2) L P_in(g1) = L` for
/// all pairs: the product of the two average fixed-point counts.
pub fn is_dim(a_in: &PermAction, a_out: &PermAction) -> Result<usize, LinearError> {
    let sum_in: usize = a_in.group().elements().map(|g| a_in.perm(g).fixed_points()).sum();
    let sum_out: usize = a_out
        .group()
        .elements()
        .map(|g| a_out.perm(g).fixed_points())
        .sum();
    exact_quotient(sum_in * sum_out, a_in.order() * a_out.order())
}

/// Dimension of the two-channel constrained space: the two commutant
/// dimensions plus both cross invariant-symmetric dimensions.
pub fn multi_equi_dim(a1: &PermAction, a2: &PermAction) -> Result<usize, LinearError> {
    Ok(equi_dim(a1)? + equi_dim(a2)? + is_dim(a1, a2)? + is_dim(a2, a1)?)
}

/// Null-space dimension of the stacked constraints `A L B = L`.
///
/// Each pair contributes the block `B^T (x) A - I` acting on the
/// column-major vectorization of `L`; the blocks are stacked and the
/// dimension is `rows*cols - rank`, with rank read from the singular
/// values under [`SINGULAR_VALUE_TOLERANCE_FACTOR`]. Returns the null-space
/// dimension and the singular values in descending order.
pub fn nullspace_oracle(
    constraints: &[(LinearMap, LinearMap)],
) -> Result<(usize, Vec<f64>), LinearError> {
    let (first_a, first_b) = constraints.first().ok_or(LinearError::EmptyConstraints)?;
    let r = first_a.rows();
    let c = first_b.rows();
    for (a, b) in constraints {
        let square = a.rows() == a.cols() && b.rows() == b.cols();
        if !square || a.rows() != r || b.rows() != c {
            return Err(LinearError::InconsistentConstraints(r, c));
        }
    }

    let n = r * c;
    let eye = DMatrix::<f64>::identity(n, n);
    let mut stacked = DMatrix::<f64>::zeros(constraints.len() * n, n);
    for (k, (a, b)) in constraints.iter().enumerate() {
        let block = b.matrix().transpose().kronecker(a.matrix()) - &eye;
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&block);
    }

    let svd = stacked.svd(false, false);
    let singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let largest = singular_values.first().copied().unwrap_or(0.0);
    let cutoff = SINGULAR_VALUE_TOLERANCE_FACTOR * largest.max(1.0);
    let rank = singular_values.iter().filter(|&&s| s > cutoff).count();
    Ok((n - rank, singular_values))
}

/// Formula-versus-oracle report for the commutant of one action.
pub fn equi_space_report(a: &PermAction) -> Result<EquiSpaceReport, LinearError> {
    let constraints: Vec<_> = a
        .group()
        .elements()
        .map(|g| (perm_matrix(a, a.group().inverse(g)), perm_matrix(a, g)))
        .collect();
    let (nullspace_dim, singular_values) = nullspace_oracle(&constraints)?;
    Ok(EquiSpaceReport {
        formula_dim: equi_dim(a)?,
        nullspace_dim,
        singular_values,
    })
}

/// Formula-versus-oracle report for the invariant-symmetric space of a pair.
pub fn is_space_report(
    a_in: &PermAction,
    a_out: &PermAction,
) -> Result<EquiSpaceReport, LinearError> {
    let mut constraints = Vec::with_capacity(a_in.order() * a_out.order());
    for g_out in a_out.group().elements() {
        for g_in in a_in.group().elements() {
            constraints.push((perm_matrix(a_out, g_out), perm_matrix(a_in, g_in)));
        }
    }
    let (nullspace_dim, singular_values) = nullspace_oracle(&constraints)?;
    Ok(EquiSpaceReport {
        formula_dim: is_dim(a_in, a_out)?,
        nullspace_dim,
        singular_values,
    })
}

/// Formula-versus-oracle report for the two-channel space: the oracle runs
/// on the block-diagonal action of the product group, which carries the
/// same constraint system without materializing any Kronecker-sum
/// projector.
pub fn multi_space_report(
    a1: &PermAction,
    a2: &PermAction,
) -> Result<EquiSpaceReport, LinearError> {
    let block = ProductAction::new(a1.clone(), a2.clone(), ProductMode::BlockDiagonal)
        .expect("block-diagonal products exist for any pair of actions");
    let combined = block.action();
    let mut report = equi_space_report(combined)?;
    report.formula_dim = multi_equi_dim(a1, a2)?;
    Ok(report)
}

/// Projects onto maps commuting with the action: averages `P(g)^-1 L P(g)`
/// over the group. Idempotent, and the image commutes with every `P(g)`.
pub fn project_equivariant(l: &LinearMap, a: &PermAction) -> Result<LinearMap, LinearError> {
    project_equivariant_between(l, a, a)
}

/// Rectangular generalization of [`project_equivariant`]: input and output
/// carry different actions of the same group.
pub fn project_equivariant_between(
    l: &LinearMap,
    a_in: &PermAction,
    a_out: &PermAction,
) -> Result<LinearMap, LinearError> {
    if a_in.group() != a_out.group() {
        return Err(LinearError::GroupMismatch);
    }
    if l.rows() != a_out.dim() || l.cols() != a_in.dim() {
        return Err(LinearError::ShapeMismatch {
            expected_rows: a_out.dim(),
            expected_cols: a_in.dim(),
            rows: l.rows(),
            cols: l.cols(),
        });
    }
    let group = a_in.group();
    let mut acc = DMatrix::<f64>::zeros(l.rows(), l.cols());
    for g in group.elements() {
        let back = perm_matrix(a_out, group.inverse(g));
        let fwd = perm_matrix(a_in, g);
        acc += back.matrix() * l.matrix() * fwd.matrix();
    }
    acc /= group.order() as f64;
    Ok(LinearMap::trusted(acc))
}

/// Projects onto maps fixed by the two-sided constraint
/// `P_out(g2) L P_in(g1) = L`: averages `P_out(g2) L P_in(g1)` over both
/// groups. Idempotent; the image absorbs every pair.
pub fn project_invariant_symmetric(
    l: &LinearMap,
    a_in: &PermAction,
    a_out: &PermAction,
) -> Result<LinearMap, LinearError> {
    if l.rows() != a_out.dim() || l.cols() != a_in.dim() {
        return Err(LinearError::ShapeMismatch {
            expected_rows: a_out.dim(),
            expected_cols: a_in.dim(),
            rows: l.rows(),
            cols: l.cols(),
        });
    }
    let mut acc = DMatrix::<f64>::zeros(l.rows(), l.cols());
    for g_out in a_out.group().elements() {
        let left = perm_matrix(a_out, g_out);
        for g_in in a_in.group().elements() {
            let right = perm_matrix(a_in, g_in);
            acc += left.matrix() * l.matrix() * right.matrix();
        }
    }
    acc /= (a_in.order() * a_out.order()) as f64;
    Ok(LinearMap::trusted(acc))
}

/// Assembles the projected two-channel block matrix
/// `[[eq(l1), is(l21)], [is(l12), eq(l2)]]` mapping the concatenation
/// `[x1, x2]` to `[y1, y2]`. Diagonal blocks commute with their channel's
/// action; off-diagonal blocks absorb the cross pairs, so the whole block
/// matrix commutes with the block-diagonal action of the product group.
pub fn build_multi_linear(
    l1: &LinearMap,
    l2: &LinearMap,
    l12: &LinearMap,
    l21: &LinearMap,
    a1: &PermAction,
    a2: &PermAction,
) -> Result<LinearMap, LinearError> {
    let (d1, d2) = (a1.dim(), a2.dim());
    let check = |l: &LinearMap, rows: usize, cols: usize| -> Result<(), LinearError> {
        if l.rows() != rows || l.cols() != cols {
            return Err(LinearError::ShapeMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: l.rows(),
                cols: l.cols(),
            });
        }
        Ok(())
    };
    check(l1, d1, d1)?;
    check(l2, d2, d2)?;
    check(l12, d2, d1)?;
    check(l21, d1, d2)?;

    let e1 = project_equivariant(l1, a1)?;
    let e2 = project_equivariant(l2, a2)?;
    // l21 feeds channel 1 from channel 2: invariant to a2, symmetric to a1.
    let is21 = project_invariant_symmetric(l21, a2, a1)?;
    let is12 = project_invariant_symmetric(l12, a1, a2)?;

    let mut block = DMatrix::<f64>::zeros(d1 + d2, d1 + d2);
    block.view_mut((0, 0), (d1, d1)).copy_from(e1.matrix());
    block.view_mut((0, d1), (d1, d2)).copy_from(is21.matrix());
    block.view_mut((d1, 0), (d2, d1)).copy_from(is12.matrix());
    block.view_mut((d1, d1), (d2, d2)).copy_from(e2.matrix());
    Ok(LinearMap::trusted(block))
}
