use crate::qcore::{eigh, log2_on_support, psd_sqrt, support_basis, trace_product, ComplexMatrix, DensityMatrix, C64};
use crate::{math, Error, Result, ATOL};

pub(crate) fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Weight of `rho` outside the support of `sigma`.
pub(crate) fn weight_outside_support(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let w = support_basis(sigma);
    let inside = (w.adjoint() * rho * &w).trace().re;
    rho.trace().re - inside
}

pub(crate) fn relative_entropy_mat(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    if weight_outside_support(rho, sigma) > ATOL {
        return f64::INFINITY;
    }
    let x = log2_on_support(rho) - log2_on_support(sigma);
    trace_product(rho, &x).re
}

/// `D(rho||sigma) = Tr rho (log rho - log sigma)` in bits; `+inf` on support violation.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    Ok(relative_entropy_mat(rho.matrix(), sigma.matrix()))
}

pub(crate) fn relative_entropy_variance_mat(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    if weight_outside_support(rho, sigma) > ATOL {
        return f64::INFINITY;
    }
    let x = log2_on_support(rho) - log2_on_support(sigma);
    let d = trace_product(rho, &x).re;
    let x2 = &x * &x;
    trace_product(rho, &x2).re - d * d
}

/// `V(rho||sigma) = Tr rho (log rho - log sigma)^2 - D^2`.
pub fn relative_entropy_variance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    Ok(relative_entropy_variance_mat(rho.matrix(), sigma.matrix()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DmaxResult {
    pub value: f64,
    pub iterations: usize,
}

/// Bisection for the least `k` with `rho <= 2^k sigma`, carried out on the
/// support of `sigma`.
pub(crate) fn d_max_mat(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> DmaxResult {
    if weight_outside_support(rho, sigma) > ATOL {
        return DmaxResult {
            value: f64::INFINITY,
            iterations: 0,
        };
    }
    let w = support_basis(sigma);
    let r = w.adjoint() * rho * &w;
    let s = w.adjoint() * sigma * &w;
    let feasible = |k: f64| eigh(&(&s * C64::new(math::exp2(k), 0.0) - &r)).min() >= 0.0;
    let mut iterations = 0;
    let mut hi = 0.0;
    let mut lo;
    // Normalized states always have D_max >= 0, but sigma may be subnormalized.
    if feasible(hi) {
        lo = -1.0;
        while feasible(lo) && lo > -1000.0 {
            hi = lo;
            lo *= 2.0;
            iterations += 1;
        }
    } else {
        lo = hi;
        hi = 1.0;
        while !feasible(hi) {
            lo = hi;
            hi *= 2.0;
            iterations += 1;
            if hi > 1000.0 {
                return DmaxResult {
                    value: f64::INFINITY,
                    iterations,
                };
            }
        }
    }
    while hi - lo > 1e-13 * math::abs(hi).max(1.0) && iterations < 400 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    DmaxResult { value: hi, iterations }
}

/// `D_max(rho||sigma) = log min{ l : rho <= l sigma }`; `+inf` on support violation.
pub fn d_max(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DmaxResult> {
    check_same_dim(rho, sigma)?;
    Ok(d_max_mat(rho.matrix(), sigma.matrix()))
}

/// Product of the two marginals of a bipartite state.
pub(crate) fn marginal_product(rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
    let (a, b) = rho_ab.bipartite_labels()?;
    let ra = rho_ab.partial_trace(&[a])?;
    let rb = rho_ab.partial_trace(&[b])?;
    ra.tensor(&rb)
}

/// `I_max(A:B) = D_max(rho_AB || rho_A (x) rho_B)`.
pub fn i_max(rho_ab: &DensityMatrix) -> Result<DmaxResult> {
    let prod = marginal_product(rho_ab)?;
    Ok(d_max_mat(rho_ab.matrix(), prod.matrix()))
}

/// `I(A:B) = D(rho_AB || rho_A (x) rho_B)`.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    let prod = marginal_product(rho_ab)?;
    Ok(relative_entropy_mat(rho_ab.matrix(), prod.matrix()))
}

pub(crate) fn fidelity_mat(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let s = psd_sqrt(rho);
    let inner = &s * sigma * &s;
    eigh(&inner)
        .values
        .iter()
        .map(|&v| if v > 0.0 { math::sqrt(v) } else { 0.0 })
        .sum()
}

/// Root fidelity `|| sqrt(rho) sqrt(sigma) ||_1`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    Ok(fidelity_mat(rho.matrix(), sigma.matrix()))
}

/// `sqrt(1 - F^2)` with the root fidelity.
pub fn purified_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho, sigma)?.min(1.0);
    Ok(math::sqrt(1.0 - f * f))
}

/// `(1/2) || rho - sigma ||_1`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5 * eigh(&diff).values.iter().map(|&v| math::abs(v)).sum::<f64>())
}
