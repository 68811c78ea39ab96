use alloc::string::ToString;
use nalgebra::DMatrix;

use super::eig::{check_hermitian, eigh};
use super::layout::Layout;
use super::matrix::{kron, max_abs, outer, ComplexMatrix, ComplexVector, C64};
use super::ops;
use crate::{math, Error, Result, ATOL};

fn check_dim(m: &ComplexMatrix, layout: &Layout) -> Result<()> {
    let d = layout.total_dim();
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.nrows(),
        });
    }
    Ok(())
}

/// Hermitian, PSD, unit-trace operator on a register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    layout: Layout,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, layout: Layout) -> Result<Self> {
        check_dim(&matrix, &layout)?;
        check_hermitian(&matrix)?;
        let tr = matrix.trace().re;
        if math::abs(tr - 1.0) > ATOL {
            return Err(Error::NotNormalized(tr));
        }
        let min = eigh(&matrix).min();
        if min < -ATOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix, layout })
    }

    /// Skips validation; the matrix is symmetrized.
    pub(crate) fn from_parts(matrix: ComplexMatrix, layout: Layout) -> Self {
        let matrix = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        Self { matrix, layout }
    }

    pub fn maximally_mixed(layout: Layout) -> Self {
        let d = layout.total_dim();
        let m = DMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
        Self { matrix: m, layout }
    }

    /// `|k><k|` in the computational basis.
    pub fn basis_state(layout: Layout, k: usize) -> Result<Self> {
        let d = layout.total_dim();
        if k >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k,
            });
        }
        let mut m = DMatrix::zeros(d, d);
        m[(k, k)] = C64::new(1.0, 0.0);
        Ok(Self { matrix: m, layout })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let (m, l) = ops::partial_trace(&self.matrix, &self.layout, keep)?;
        Ok(Self::from_parts(m, l))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self {
            matrix: kron(&self.matrix, &other.matrix),
            layout,
        })
    }

    pub fn permute(&self, order: &[&str]) -> Result<Self> {
        let (m, l) = ops::permute(&self.matrix, &self.layout, order)?;
        Ok(Self { matrix: m, layout: l })
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.clone(),
            layout: self.layout.relabel(from, to)?,
        })
    }

    /// Labels of a two-register layout.
    pub(crate) fn bipartite_labels(&self) -> Result<(&str, &str)> {
        let regs = self.layout.registers();
        if regs.len() != 2 {
            return Err(Error::Invalid(alloc::format!(
                "expected a bipartite layout, found {} registers",
                regs.len()
            )));
        }
        Ok((regs[0].label.as_str(), regs[1].label.as_str()))
    }
}

/// Unit vector on a register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
    layout: Layout,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector, layout: Layout) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm_squared();
        if math::abs(norm - 1.0) > ATOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, layout })
    }

    /// `sum_k sqrt(p_k) |k>|k>` on registers `a` and `b` of dimension `p.len()`.
    pub fn schmidt(coefficients: &[f64], a: &str, b: &str) -> Result<Self> {
        let d = coefficients.len();
        if coefficients.iter().any(|&p| p < 0.0) {
            return Err(Error::Invalid("Schmidt coefficients must be non-negative".to_string()));
        }
        let layout = Layout::new([(a, d), (b, d)])?;
        let mut v = ComplexVector::zeros(d * d);
        for (k, &p) in coefficients.iter().enumerate() {
            v[k * d + k] = C64::new(math::sqrt(p), 0.0);
        }
        Self::new(v, layout)
    }

    pub fn maximally_entangled(d: usize, a: &str, b: &str) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter {
                name: "d",
                value: d as f64,
                expected: "d >= 2",
            });
        }
        Self::schmidt(&alloc::vec![1.0 / d as f64; d], a, b)
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(outer(&self.amplitudes), self.layout.clone())
    }
}

/// Hermitian idempotent operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_hermitian(&matrix)?;
        let dev = max_abs(&(&matrix * &matrix - &matrix));
        if dev > ATOL {
            return Err(Error::NotProjector(dev));
        }
        Ok(Self { matrix })
    }

    /// Projector onto the span of orthonormal columns.
    pub fn from_orthonormal(columns: &ComplexMatrix) -> Self {
        Self {
            matrix: columns * columns.adjoint(),
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let matrix = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        math::round(self.matrix.trace().re).max(0.0) as usize
    }

    /// Orthonormal basis of the range.
    pub fn range_basis(&self) -> ComplexMatrix {
        eigh(&self.matrix).columns_where(|v| v > 0.5)
    }

    /// `Tr[P rho]`
    pub fn expectation(&self, rho: &ComplexMatrix) -> f64 {
        super::matrix::trace_product(&self.matrix, rho).re
    }
}

