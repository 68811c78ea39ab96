use crate::divergences::TestOperator;
use crate::qcore::{eigh, kron, trace_product, ComplexMatrix, Projector, C64};
use crate::{math, Error, Result, ATOL};

/// Projective realization of a two-outcome test on system (x) qubit ancilla,
/// ancilla least significant.
#[derive(Clone, Debug, PartialEq)]
pub struct DilatedProjector {
    pub projector: Projector,
    pub ancilla_dim: usize,
    pub source: TestOperator,
}

impl DilatedProjector {
    pub fn system_dim(&self) -> usize {
        self.projector.dim() / self.ancilla_dim
    }

    /// `Tr[Pi (rho (x) |0><0|)]`
    pub fn acceptance(&self, rho: &ComplexMatrix) -> f64 {
        trace_product(self.projector.matrix(), &with_ancilla_zero(rho)).re
    }

    /// `<0|Pi|0>` on the system, which reproduces the source test.
    pub fn compressed(&self) -> ComplexMatrix {
        compress(self.projector.matrix(), self.ancilla_dim)
    }
}

pub(crate) fn ancilla_zero(dim: usize) -> ComplexMatrix {
    let mut z = ComplexMatrix::zeros(dim, dim);
    z[(0, 0)] = C64::new(1.0, 0.0);
    z
}

/// `rho (x) |0><0|` for a qubit ancilla.
pub(crate) fn with_ancilla_zero(rho: &ComplexMatrix) -> ComplexMatrix {
    kron(rho, &ancilla_zero(2))
}

pub(crate) fn compress(op: &ComplexMatrix, ancilla_dim: usize) -> ComplexMatrix {
    let d = op.nrows() / ancilla_dim;
    ComplexMatrix::from_fn(d, d, |r, c| op[(r * ancilla_dim, c * ancilla_dim)])
}

/// Builds `Pi = U^H (I (x) |1><1|) U` with
/// `U = [[sqrt(I-M), -sqrt(M)], [sqrt(M), sqrt(I-M)]]` in ancilla blocks, so
/// `Tr[Pi (rho (x) |0><0|)] = Tr[M rho]`.
pub fn neumark_dilate(test: &TestOperator) -> Result<DilatedProjector> {
    let m = &test.matrix;
    crate::qcore::check_hermitian(m)?;
    let e = eigh(m);
    if e.min() < -ATOL {
        return Err(Error::NotPositive(e.min()));
    }
    if e.max() > 1.0 + ATOL {
        return Err(Error::NotContraction(e.max()));
    }
    let b = e.map(|v| math::sqrt(v.clamp(0.0, 1.0)));
    let a = e.map(|v| math::sqrt((1.0 - v).clamp(0.0, 1.0)));
    let d = m.nrows();
    let mut u = ComplexMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            u[(2 * r, 2 * c)] = a[(r, c)];
            u[(2 * r, 2 * c + 1)] = -b[(r, c)];
            u[(2 * r + 1, 2 * c)] = b[(r, c)];
            u[(2 * r + 1, 2 * c + 1)] = a[(r, c)];
        }
    }
    let mut one = ComplexMatrix::zeros(2, 2);
    one[(1, 1)] = C64::new(1.0, 0.0);
    let flag = kron(&ComplexMatrix::identity(d, d), &one);
    let pi = u.adjoint() * flag * &u;
    Ok(DilatedProjector {
        projector: Projector::from_matrix_unchecked(pi),
        ancilla_dim: 2,
        source: test.clone(),
    })
}
