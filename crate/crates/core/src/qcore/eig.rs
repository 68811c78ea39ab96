use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::matrix::{hermitian_deviation, max_abs, ComplexMatrix, C64};
use crate::{math, Error, Result, ATOL, SUPPORT_CUTOFF};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

pub(crate) fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let dev = hermitian_deviation(a);
    if dev > ATOL * max_abs(a).max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Validated entry point: rejects matrices that are not Hermitian within `ATOL`.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    check_hermitian(a)?;
    Ok(eigh(a))
}

/// Eigendecomposition of the Hermitian part of `a`; callers guarantee hermiticity.
pub(crate) fn eigh(a: &ComplexMatrix) -> HermitianEig {
    let n = a.nrows();
    if n == 0 {
        return HermitianEig {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let se = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].total_cmp(&se.eigenvalues[i]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    HermitianEig { values, vectors }
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(D) V^H`
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (c, &v) in self.values.iter().enumerate() {
            let s = C64::new(f(v), 0.0);
            for r in 0..self.dim() {
                scaled[(r, c)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|v| v)
    }

    /// Columns whose eigenvalue satisfies `keep`.
    pub fn columns_where(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| keep(self.values[i])).collect();
        DMatrix::from_fn(self.dim(), idx.len(), |r, c| self.vectors[(r, idx[c])])
    }

    pub fn projector_where(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        self.map(|v| if keep(v) { 1.0 } else { 0.0 })
    }
}

pub(crate) fn support_threshold(e: &HermitianEig) -> f64 {
    SUPPORT_CUTOFF * e.max().max(1.0)
}

/// Orthonormal basis of the support of a PSD matrix.
pub(crate) fn support_basis(a: &ComplexMatrix) -> ComplexMatrix {
    let e = eigh(a);
    let cut = support_threshold(&e);
    e.columns_where(|v| v > cut)
}

/// Sum of the absolute values of the negative eigenvalues.
pub(crate) fn negative_part_trace(a: &ComplexMatrix) -> f64 {
    eigh(a).values.iter().filter(|&&v| v < 0.0).map(|v| -v).sum()
}

pub(crate) fn psd_sqrt(a: &ComplexMatrix) -> ComplexMatrix {
    eigh(a).map(|v| if v > 0.0 { math::sqrt(v) } else { 0.0 })
}

/// Pseudo-inverse square root with eigenvalue cutoff.
pub(crate) fn pinv_sqrt(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    eigh(a).map(|v| if v > cutoff { 1.0 / math::sqrt(v) } else { 0.0 })
}

/// Base-2 logarithm on the support, zero on the kernel.
pub(crate) fn log2_on_support(a: &ComplexMatrix) -> ComplexMatrix {
    let e = eigh(a);
    let cut = support_threshold(&e);
    e.map(|v| if v > cut { math::log2(v) } else { 0.0 })
}
