//! Joint block decomposition of two projectors and the union-of-projectors
//! construction built on it.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::error::check_open_unit;
use crate::qcore::{eigh, outer, trace_product, ComplexMatrix, ComplexVector, Projector, C64};
use crate::{math, Error, Result};

/// Singular values at or below this split a principal pair into two
/// one-dimensional blocks.
const ORTHOGONAL_CUTOFF: f64 = 1e-12;
/// A principal pair whose orthogonal residual is at or below this is a single
/// aligned block.
const ALIGNED_RESIDUAL: f64 = 1e-10;
/// Largest number of projectors `union_many` accepts.
pub const MAX_UNION: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockLabel {
    /// Restricted projectors overlap less than `1 - delta^2`.
    Far,
    Near,
}

/// A joint invariant subspace of dimension one or two.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanBlock {
    pub block_projector: Projector,
    /// First projector restricted to the block (rank 0 or 1).
    pub p1_restricted: Projector,
    pub p2_restricted: Projector,
    /// `Tr[p1_restricted p2_restricted]`
    pub overlap: f64,
    pub label: BlockLabel,
}

impl JordanBlock {
    pub fn rank(&self) -> usize {
        self.block_projector.rank()
    }

    /// Contribution to the union: the whole block when Far, the first
    /// restriction when Near. A block outside both ranges contributes nothing.
    pub fn union_part(&self) -> ComplexMatrix {
        match self.label {
            BlockLabel::Near => self.p1_restricted.matrix().clone(),
            BlockLabel::Far if self.p1_restricted.rank() + self.p2_restricted.rank() == 0 => {
                DMatrix::zeros(self.block_projector.dim(), self.block_projector.dim())
            }
            BlockLabel::Far => self.block_projector.matrix().clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanDecomposition {
    pub blocks: Vec<JordanBlock>,
    pub delta: f64,
}

impl JordanDecomposition {
    pub fn far_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.label == BlockLabel::Far).count()
    }

    pub fn near_count(&self) -> usize {
        self.blocks.len() - self.far_count()
    }
}

fn check_pair(p1: &Projector, p2: &Projector, delta: f64) -> Result<()> {
    check_open_unit("delta", delta)?;
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.dim(),
            found: p2.dim(),
        });
    }
    Ok(())
}

fn range_basis(p: &ComplexMatrix) -> ComplexMatrix {
    eigh(p).columns_where(|v| v > 0.5)
}

fn column(m: &ComplexMatrix, c: usize) -> ComplexVector {
    m.column(c).into_owned()
}

fn rank_one(v: &ComplexVector) -> Projector {
    Projector::from_matrix_unchecked(outer(v))
}

fn zero(d: usize) -> Projector {
    Projector::from_matrix_unchecked(DMatrix::zeros(d, d))
}

fn label_for(overlap: f64, delta: f64) -> BlockLabel {
    if overlap < 1.0 - delta * delta {
        BlockLabel::Far
    } else {
        BlockLabel::Near
    }
}

fn block(
    block_projector: ComplexMatrix,
    p1_restricted: Projector,
    p2_restricted: Projector,
    delta: f64,
) -> JordanBlock {
    let overlap = trace_product(p1_restricted.matrix(), p2_restricted.matrix())
        .re
        .clamp(0.0, 1.0);
    JordanBlock {
        block_projector: Projector::from_matrix_unchecked(block_projector),
        p1_restricted,
        p2_restricted,
        overlap,
        label: label_for(overlap, delta),
    }
}

/// One-dimensional blocks for the orthonormal columns of `basis`, with the
/// first (or second) restriction equal to the block itself.
fn single_blocks(basis: &ComplexMatrix, in_first: bool, delta: f64, out: &mut Vec<JordanBlock>) {
    let d = basis.nrows();
    for c in 0..basis.ncols() {
        let p = rank_one(&column(basis, c));
        let (r1, r2) = if in_first {
            (p.clone(), zero(d))
        } else {
            (zero(d), p.clone())
        };
        out.push(block(p.into_matrix(), r1, r2, delta));
    }
}

/// Splits the space into blocks of dimension one or two that are invariant
/// under both projectors.
///
/// Principal vectors come from the SVD of `Q1^H Q2` for orthonormal range
/// bases. Each pair with a nonzero singular value spans one block; range
/// directions left over on either side and the common kernel become
/// one-dimensional blocks.
pub fn jordan_decompose(p1: &Projector, p2: &Projector, delta: f64) -> Result<JordanDecomposition> {
    check_pair(p1, p2, delta)?;
    let d = p1.dim();
    let q1 = range_basis(p1.matrix());
    let q2 = range_basis(p2.matrix());
    let mut blocks = Vec::new();
    let mut used1 = DMatrix::<C64>::zeros(d, d);
    let mut used2 = DMatrix::<C64>::zeros(d, d);

    if q1.ncols() > 0 && q2.ncols() > 0 {
        let cross = q1.adjoint() * &q2;
        let svd = cross.svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::Solver("SVD did not return singular vectors")),
        };
        let principal1 = &q1 * u;
        let principal2 = &q2 * v_t.adjoint();
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s <= ORTHOGONAL_CUTOFF {
                continue;
            }
            let a = column(&principal1, i);
            let b = column(&principal2, i);
            let r1 = rank_one(&a);
            let r2 = rank_one(&b);
            used1 += r1.matrix();
            used2 += r2.matrix();
            let residual = &b - &a * a.dotc(&b);
            let rnorm = residual.norm();
            let span = if rnorm <= ALIGNED_RESIDUAL {
                outer(&a)
            } else {
                let e2 = residual / C64::new(rnorm, 0.0);
                outer(&a) + outer(&e2)
            };
            blocks.push(block(span, r1, r2, delta));
        }
    }

    // Range directions not paired above are orthogonal to the other range.
    let rest1 = range_basis(&(p1.matrix() - &used1));
    let rest2 = range_basis(&(p2.matrix() - &used2));
    single_blocks(&rest1, true, delta, &mut blocks);
    single_blocks(&rest2, false, delta, &mut blocks);

    let mut covered = DMatrix::<C64>::zeros(d, d);
    for b in &blocks {
        covered += b.block_projector.matrix();
    }
    let kernel = range_basis(&(ComplexMatrix::identity(d, d) - covered));
    for c in 0..kernel.ncols() {
        let p = outer(&column(&kernel, c));
        blocks.push(block(p, zero(d), zero(d), delta));
    }
    Ok(JordanDecomposition { blocks, delta })
}

/// Projector that captures each input up to a loss of `delta` while staying
/// below `(2/delta^2)(p1 + p2)`.
pub fn union_pair(p1: &Projector, p2: &Projector, delta: f64) -> Result<Projector> {
    let dec = jordan_decompose(p1, p2, delta)?;
    Ok(union_from(&dec, p1.dim()))
}

pub fn union_from(dec: &JordanDecomposition, dim: usize) -> Projector {
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for b in &dec.blocks {
        out += b.union_part();
    }
    Projector::from_matrix_unchecked(out)
}

/// Number of pairwise merge rounds `union_many` performs for `s` projectors.
pub fn union_rounds(s: usize) -> usize {
    let mut rounds = 0;
    let mut n = s;
    while n > 1 {
        n = n.div_ceil(2);
        rounds += 1;
    }
    rounds
}

/// Union of up to 64 projectors by pairwise merging in a binary tree; an odd
/// element is carried into the next round unchanged. The same `delta` is used
/// in every round.
pub fn union_many(projectors: &[Projector], delta: f64) -> Result<Projector> {
    check_open_unit("delta", delta)?;
    let first = projectors
        .first()
        .ok_or_else(|| Error::Invalid("need at least one projector".into()))?;
    if projectors.len() > MAX_UNION {
        return Err(Error::Parameter {
            name: "s",
            value: projectors.len() as f64,
            expected: "at most 64 projectors",
        });
    }
    if let Some(bad) = projectors.iter().find(|p| p.dim() != first.dim()) {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            found: bad.dim(),
        });
    }
    let mut level: Vec<Projector> = projectors.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            match pair {
                [a, b] => next.push(union_pair(a, b, delta)?),
                [a] => next.push(a.clone()),
                _ => unreachable!(),
            }
        }
        level = next;
    }
    Ok(level.pop().expect("non-empty level"))
}

/// Exponent in the operator bound of `union_many`: `log2(2s)`.
pub fn union_log_factor(s: usize) -> f64 {
    math::log2(2.0 * s as f64)
}
