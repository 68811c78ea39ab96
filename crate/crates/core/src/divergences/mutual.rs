use alloc::vec::Vec;

use super::neyman_pearson::TestOperator;
use super::saddle::{self, Alternatives, Problem};
use crate::error::check_open_unit;
use crate::qcore::{kron, trace_product, ComplexMatrix, DensityMatrix, C64};
use crate::{math, Error, Result};

/// Finite set of states whose convex hull is the feasible set.
#[derive(Clone, Debug, PartialEq)]
pub struct StateEnsemble {
    states: Vec<DensityMatrix>,
}

impl StateEnsemble {
    pub fn new(states: Vec<DensityMatrix>) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::Invalid("ensemble must contain at least one state".into()))?;
        let d = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn mixture(&self, weights: &[f64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for (s, &w) in self.states.iter().zip(weights) {
            out += s.matrix() * C64::new(w, 0.0);
        }
        out
    }
}

/// Optimal test of a minimax divergence with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddleSolution {
    /// The divergence in bits, `-log` of the worst-case Type 2 error of `test`.
    pub value: f64,
    pub test: TestOperator,
    /// Near-optimal alternative on the minimized register.
    pub dual_state: ComplexMatrix,
    /// Mixture weights behind `dual_state` (empty when the full state space is searched).
    pub dual_weights: Vec<f64>,
    /// Worst-case Type 2 error of `test` minus a certified lower bound on the optimum.
    pub gap: f64,
    pub iterations: usize,
}

fn to_solution(rho: &ComplexMatrix, out: saddle::Outcome, dual_state: ComplexMatrix) -> SaddleSolution {
    let type1 = 1.0 - trace_product(&out.m, rho).re;
    let value = if out.objective > 0.0 {
        -math::log2(out.objective)
    } else {
        f64::INFINITY
    };
    SaddleSolution {
        value,
        test: TestOperator {
            matrix: out.m,
            type1_error: type1,
            type2_bound: out.objective,
        },
        dual_state,
        dual_weights: out.weights,
        gap: (out.objective - out.lower_bound).max(0.0),
        iterations: out.newton_steps,
    }
}

fn bipartite_dims(rho_ab: &DensityMatrix) -> Result<(usize, usize)> {
    rho_ab.bipartite_labels()?;
    let dims = rho_ab.layout().dims();
    Ok((dims[0], dims[1]))
}

/// `min_{sigma in hull(vertices)} D_H^eps(rho || sigma)`, attained by a single
/// test against the whole hull.
pub fn d_h_hull(rho: &DensityMatrix, vertices: &[ComplexMatrix], eps: f64) -> Result<SaddleSolution> {
    check_open_unit("eps", eps)?;
    if vertices.is_empty() {
        return Err(Error::Invalid("need at least one alternative".into()));
    }
    for v in vertices {
        if v.nrows() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: v.nrows(),
            });
        }
    }
    d_h_hull_mat(rho.matrix(), vertices.to_vec(), eps)
}

pub(crate) fn d_h_hull_mat(rho: &ComplexMatrix, vertices: Vec<ComplexMatrix>, eps: f64) -> Result<SaddleSolution> {
    let problem = Problem {
        dim: rho.nrows(),
        nulls: alloc::vec![(rho.clone(), 1.0 - eps)],
        alternatives: Alternatives::Vertices(vertices),
    };
    let out = saddle::solve(&problem)?;
    let mut dual = ComplexMatrix::zeros(rho.nrows(), rho.nrows());
    if let Alternatives::Vertices(vs) = &problem.alternatives {
        for (v, &w) in vs.iter().zip(&out.weights) {
            dual += v * C64::new(w, 0.0);
        }
    }
    Ok(to_solution(rho, out, dual))
}

/// `I_H^eps(A:B) = min_{sigma_A} D_H^eps(rho_AB || sigma_A (x) rho_B)`; the
/// first register of the layout is minimized over.
pub fn i_h(rho_ab: &DensityMatrix, eps: f64) -> Result<SaddleSolution> {
    check_open_unit("eps", eps)?;
    let (da, _) = bipartite_dims(rho_ab)?;
    let (_, b) = rho_ab.bipartite_labels()?;
    let rho_b = rho_ab.partial_trace(&[b])?;
    let problem = Problem {
        dim: rho_ab.dim(),
        nulls: alloc::vec![(rho_ab.matrix().clone(), 1.0 - eps)],
        alternatives: Alternatives::FreeFirst {
            first_dim: da,
            second: rho_b.into_matrix(),
        },
    };
    let mut out = saddle::solve(&problem)?;
    let dual = out.dual_state.take().unwrap_or_else(|| ComplexMatrix::identity(da, da));
    Ok(to_solution(rho_ab.matrix(), out, dual))
}

/// `min_{tau_A in hull(s_a)} D_H^eps(rho_AB || tau_A (x) sigma_B)`.
pub fn i_h_tilde(
    rho_ab: &DensityMatrix,
    sigma_b: &DensityMatrix,
    s_a: &StateEnsemble,
    eps: f64,
) -> Result<SaddleSolution> {
    check_open_unit("eps", eps)?;
    let (da, db) = bipartite_dims(rho_ab)?;
    if s_a.dim() != da {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: s_a.dim(),
        });
    }
    if sigma_b.dim() != db {
        return Err(Error::DimensionMismatch {
            expected: db,
            found: sigma_b.dim(),
        });
    }
    let vertices = s_a
        .states()
        .iter()
        .map(|t| kron(t.matrix(), sigma_b.matrix()))
        .collect();
    let mut sol = d_h_hull_mat(rho_ab.matrix(), vertices, eps)?;
    sol.dual_state = s_a.mixture(&sol.dual_weights);
    Ok(sol)
}

/// `i_h_tilde` minimized further over the second-register state in `hull(s_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedSolution {
    pub best: SaddleSolution,
    /// Weights on `s_b` of the minimizing second-register state.
    pub second_weights: Vec<f64>,
    pub evaluations: usize,
}

/// `min_{sigma_B in hull(s_b), tau_A in hull(s_a)} D_H^eps(rho_AB || tau_A (x) sigma_B)`.
///
/// The inner minimization over `tau_A` is a saddle point; the outer one over
/// `sigma_B` is not jointly convex and is searched on a simplex grid refined
/// by pairwise mass transfers.
pub fn i_h_hat(
    rho_ab: &DensityMatrix,
    s_a: &StateEnsemble,
    s_b: &StateEnsemble,
    eps: f64,
) -> Result<NestedSolution> {
    check_open_unit("eps", eps)?;
    let (_, db) = bipartite_dims(rho_ab)?;
    if s_b.dim() != db {
        return Err(Error::DimensionMismatch {
            expected: db,
            found: s_b.dim(),
        });
    }
    let mut best: Option<(Vec<f64>, SaddleSolution)> = None;
    let mut evaluations = 0usize;
    let mut eval = |w: &[f64]| -> Result<f64> {
        evaluations += 1;
        let sigma = DensityMatrix::from_parts(s_b.mixture(w), s_b.states()[0].layout().clone());
        let sol = i_h_tilde(rho_ab, &sigma, s_a, eps)?;
        let v = sol.value;
        if best.as_ref().is_none_or(|(_, b)| v < b.value) {
            best = Some((w.to_vec(), sol));
        }
        Ok(v)
    };
    simplex_search(s_b.len(), &mut eval)?;
    let (second_weights, best) = best.ok_or(Error::Solver("no outer evaluation"))?;
    Ok(NestedSolution {
        best,
        second_weights,
        evaluations,
    })
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return alloc::vec![alloc::vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Minimizes `f` over the probability simplex: grid, then pairwise transfers
/// with a halving step.
pub(crate) fn simplex_search(
    k: usize,
    f: &mut dyn FnMut(&[f64]) -> Result<f64>,
) -> Result<(Vec<f64>, f64)> {
    if k == 1 {
        let v = f(&[1.0])?;
        return Ok((alloc::vec![1.0], v));
    }
    let g = match k {
        2 => 20,
        3 => 10,
        4 => 6,
        _ => 3,
    };
    let mut best_w = alloc::vec![0.0; k];
    let mut best_v = f64::INFINITY;
    for comp in compositions(g, k) {
        let w: Vec<f64> = comp.iter().map(|&c| c as f64 / g as f64).collect();
        let v = f(&w)?;
        if v < best_v {
            best_v = v;
            best_w = w;
        }
    }
    let mut step = 1.0 / g as f64;
    while step > 1e-5 {
        let mut improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j || best_w[j] <= 0.0 {
                    continue;
                }
                let moved = step.min(best_w[j]);
                let mut w = best_w.clone();
                w[i] += moved;
                w[j] -= moved;
                let v = f(&w)?;
                if v < best_v {
                    best_v = v;
                    best_w = w;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((best_w, best_v))
}
