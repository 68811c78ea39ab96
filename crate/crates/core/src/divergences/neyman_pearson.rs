use crate::error::check_open_unit;
use crate::qcore::{eigh, support_basis, trace_product, ComplexMatrix, DensityMatrix, C64};
use crate::{math, Result};

use super::entropy::check_same_dim;

/// A two-outcome test `0 <= M <= I` with its errors against the pair it was built for.
#[derive(Clone, Debug, PartialEq)]
pub struct TestOperator {
    pub matrix: ComplexMatrix,
    /// `1 - Tr[M rho]` for the null state.
    pub type1_error: f64,
    /// `Tr[M sigma]` for the alternative (the worst one, for composite alternatives).
    pub type2_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisTest {
    /// `D_H^eps(rho||sigma)` in bits.
    pub value: f64,
    pub test: TestOperator,
    /// The `t` at which the test is the Neyman-Pearson test of `rho - t sigma`.
    pub threshold: f64,
    pub iterations: usize,
}

/// `Tr[rho P]` where `P` projects onto the strictly positive part of `rho - t sigma`.
fn accepted(rho: &ComplexMatrix, sigma: &ComplexMatrix, t: f64) -> f64 {
    let e = eigh(&(rho - sigma * C64::new(t, 0.0)));
    let mut acc = 0.0;
    for (k, &v) in e.values.iter().enumerate() {
        if v <= 0.0 {
            break;
        }
        let col = e.vectors.column(k);
        acc += (col.adjoint() * rho * col)[(0, 0)].re;
    }
    acc
}

/// Fills the eigenbasis of `rho - t sigma` in decreasing eigenvalue order
/// until `Tr[M rho]` reaches `target`; the last vector is taken fractionally.
fn greedy_test(rho: &ComplexMatrix, sigma: &ComplexMatrix, t: f64, target: f64) -> ComplexMatrix {
    let e = eigh(&(rho - sigma * C64::new(t, 0.0)));
    let mut weights = alloc::vec![0.0; e.dim()];
    let mut cum = 0.0;
    for (k, w) in weights.iter_mut().enumerate() {
        if cum >= target {
            break;
        }
        let col = e.vectors.column(k);
        let r = (col.adjoint() * rho * col)[(0, 0)].re.max(0.0);
        if cum + r <= target {
            *w = 1.0;
            cum += r;
        } else {
            *w = (target - cum) / r;
            cum = target;
        }
    }
    let mut scaled = e.vectors.clone();
    for (c, &w) in weights.iter().enumerate() {
        for r in 0..e.dim() {
            scaled[(r, c)] *= C64::new(w, 0.0);
        }
    }
    scaled * e.vectors.adjoint()
}

pub(crate) fn hypothesis_test_mat(rho: &ComplexMatrix, sigma: &ComplexMatrix, eps: f64) -> HypothesisTest {
    let target = 1.0 - eps;
    let finish = |m: ComplexMatrix, threshold: f64, iterations: usize| {
        let type2 = trace_product(&m, sigma).re.max(0.0);
        let type1 = 1.0 - trace_product(&m, rho).re;
        let value = if type2 > 0.0 { -math::log2(type2) } else { f64::INFINITY };
        HypothesisTest {
            value,
            test: TestOperator {
                matrix: m,
                type1_error: type1,
                type2_bound: type2,
            },
            threshold,
            iterations,
        }
    };

    // Weight of rho on ker(sigma) is free; if it suffices, Type 2 is zero.
    let d = rho.nrows();
    let supp = support_basis(sigma);
    let ker_proj = ComplexMatrix::identity(d, d) - &supp * supp.adjoint();
    let ker_weight = trace_product(&ker_proj, rho).re;
    if ker_weight >= target {
        let m = &ker_proj * C64::new(target / ker_weight, 0.0);
        return finish(m, f64::INFINITY, 0);
    }

    let mut iterations = 0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while accepted(rho, sigma, hi) >= target {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if hi > 1e300 {
            break;
        }
    }
    while hi - lo > 1e-15 * hi && iterations < 2000 {
        let mid = 0.5 * (lo + hi);
        if accepted(rho, sigma, mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let t = 0.5 * (lo + hi);
    finish(greedy_test(rho, sigma, t, target), t, iterations)
}

/// `D_H^eps(rho||sigma) = max { -log Tr[M sigma] : 0 <= M <= I, Tr[M rho] >= 1 - eps }`
/// via bisection on the Neyman-Pearson threshold.
pub fn hypothesis_test_divergence(rho: &DensityMatrix, sigma: &DensityMatrix, eps: f64) -> Result<HypothesisTest> {
    check_open_unit("eps", eps)?;
    check_same_dim(rho, sigma)?;
    Ok(hypothesis_test_mat(rho.matrix(), sigma.matrix(), eps))
}
