//! Composite hypothesis testing between the convex hulls of i.i.d. powers of
//! two finite state sets, and a single test built from per-state tests by the
//! union of projectors.

mod net;

pub use net::{epsilon_net, net_size_bound, validate_net, EpsilonNet, NetValidation};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::coding::{compress, neumark_dilate};
use crate::divergences::saddle::{self, Alternatives, Problem};
use crate::divergences::{d_h_hull, StateEnsemble, TestOperator};
use crate::error::check_open_unit;
use crate::jordan::union_many;
use crate::qcore::{tensor_power, trace_product, ComplexMatrix, DensityMatrix, Layout};
use crate::{math, Error, Result, ATOL, TOL_OPT};

/// Largest `dim^n` accepted by the composite solvers.
pub const COMPOSITE_DIM_CAP: usize = 64;
/// Largest size of either state set.
pub const MAX_SET_SIZE: usize = 4;
/// Largest number of copies.
pub const MAX_COPIES: usize = 3;

/// Null set `S1`, alternative set `S2`, number of copies and Type 1 budget.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeInstance {
    s1: StateEnsemble,
    s2: StateEnsemble,
    n: usize,
    epsilon: f64,
}

impl CompositeInstance {
    pub fn new(s1: StateEnsemble, s2: StateEnsemble, n: usize, epsilon: f64) -> Result<Self> {
        check_open_unit("epsilon", epsilon)?;
        if n == 0 || n > MAX_COPIES {
            return Err(Error::Parameter {
                name: "n",
                value: n as f64,
                expected: "1 <= n <= 3",
            });
        }
        for (name, set) in [("|S1|", &s1), ("|S2|", &s2)] {
            if set.len() > MAX_SET_SIZE {
                return Err(Error::Parameter {
                    name,
                    value: set.len() as f64,
                    expected: "at most 4 states",
                });
            }
        }
        if s1.dim() != s2.dim() {
            return Err(Error::DimensionMismatch {
                expected: s1.dim(),
                found: s2.dim(),
            });
        }
        let total = s1.dim().checked_pow(n as u32).unwrap_or(usize::MAX);
        if total > COMPOSITE_DIM_CAP {
            return Err(Error::Capacity {
                dim: total,
                cap: COMPOSITE_DIM_CAP,
            });
        }
        Ok(Self { s1, s2, n, epsilon })
    }

    pub fn s1(&self) -> &StateEnsemble {
        &self.s1
    }

    pub fn s2(&self) -> &StateEnsemble {
        &self.s2
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Dimension of one copy.
    pub fn dim(&self) -> usize {
        self.s1.dim()
    }

    /// Dimension of `n` copies.
    pub fn total_dim(&self) -> usize {
        self.dim().pow(self.n as u32)
    }

    /// Same instance with another Type 1 budget.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.s1.clone(), self.s2.clone(), self.n, epsilon)
    }

    fn power_layout(&self) -> Result<Layout> {
        let regs: Vec<(String, usize)> = (0..self.n).map(|k| (format!("X{k}"), self.dim())).collect();
        Layout::new(regs)
    }

    /// `rho^{(x) n}` as a state on registers `X0 .. X{n-1}`.
    pub fn power(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        DensityMatrix::new(tensor_power(rho.matrix(), self.n), self.power_layout()?)
    }

    fn null_powers(&self) -> Vec<ComplexMatrix> {
        self.s1.states().iter().map(|r| tensor_power(r.matrix(), self.n)).collect()
    }

    fn alternative_powers(&self) -> Vec<ComplexMatrix> {
        self.s2.states().iter().map(|s| tensor_power(s.matrix(), self.n)).collect()
    }

    /// `1 - Tr[L rho^{(x) n}]` for every `S1` vertex.
    pub fn type1_errors(&self, test: &ComplexMatrix) -> Vec<f64> {
        self.null_powers().iter().map(|r| 1.0 - trace_product(test, r).re).collect()
    }

    /// `Tr[L sigma^{(x) n}]` for every `S2` vertex; the maximum over the hull
    /// is attained at one of them.
    pub fn type2_errors(&self, test: &ComplexMatrix) -> Vec<f64> {
        self.alternative_powers().iter().map(|s| trace_product(test, s).re).collect()
    }
}

/// `beta(n, eps)` with its optimal test.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeBeta {
    /// `-log max_{sigma_n} Tr[L sigma_n]` in bits.
    pub value: f64,
    pub test: TestOperator,
    /// `Tr[L sigma_n]` minus a certified lower bound on its optimum.
    pub gap: f64,
    pub type1: Vec<f64>,
    pub type2: Vec<f64>,
}

/// `max_L min_{sigma_n in S2^n} -log Tr[L sigma_n]` over `0 <= L <= I` with
/// `Tr[L rho^{(x) n}] >= 1 - eps` for every `rho` in `S1` (vertices suffice,
/// the constraint being linear).
pub fn beta_exact(inst: &CompositeInstance) -> Result<CompositeBeta> {
    let target = 1.0 - inst.epsilon;
    let problem = Problem {
        dim: inst.total_dim(),
        nulls: inst.null_powers().into_iter().map(|r| (r, target)).collect(),
        alternatives: Alternatives::Vertices(inst.alternative_powers()),
    };
    let out = saddle::solve(&problem)?;
    let type1 = inst.type1_errors(&out.m);
    let type2 = inst.type2_errors(&out.m);
    let worst = type2.iter().copied().fold(0.0, f64::max);
    Ok(CompositeBeta {
        value: if worst > 0.0 { -math::log2(worst) } else { f64::INFINITY },
        test: TestOperator {
            type1_error: type1.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            type2_bound: worst,
            matrix: out.m,
        },
        gap: (out.objective - out.lower_bound).max(0.0),
        type1,
        type2,
    })
}

/// `min_{sigma_n in S2^n} D_H^eps(rho^{(x) n} || sigma_n)` for a single null
/// state, with the test achieving it against the whole hull.
pub fn beta_bar(inst: &CompositeInstance, rho: &DensityMatrix, eps: f64) -> Result<(f64, TestOperator)> {
    let sol = d_h_hull(&inst.power(rho)?, &inst.alternative_powers(), eps)?;
    Ok((sol.value, sol.test))
}

/// Where the per-state tests of the universal test come from.
#[derive(Clone, Copy, Debug)]
pub enum NullSource<'a> {
    /// One test per `S1` vertex.
    Exact,
    /// One test per distinct net point nearest to an `S1` vertex.
    Net(&'a EpsilonNet),
}

/// A single test for all of `S1` built by merging per-state tests.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalTest {
    pub test: TestOperator,
    /// States `S1'` the per-state tests were built for.
    pub reduced_set: Vec<DensityMatrix>,
    /// Index into `reduced_set` for each `S1` vertex.
    pub assignment: Vec<usize>,
    /// `beta_bar(n, eps, rho')` for each `rho'` in `reduced_set`.
    pub beta_bar: Vec<f64>,
    pub delta: f64,
    /// Slack handed to every merge round, `delta / log2(2|S1'|)`.
    pub union_delta: f64,
    /// `4 log|S1'| log(log|S1'| / delta)`, zero for a single state.
    pub penalty: f64,
    pub type1: Vec<f64>,
    pub type2: Vec<f64>,
    /// `-log max_{sigma} Tr[L* sigma^{(x) n}]`.
    pub value: f64,
}

impl UniversalTest {
    /// Every `S1` vertex keeps `Tr[L* rho^{(x) n}] >= 1 - eps - 2 delta`.
    pub fn type1_bound_holds(&self, eps: f64) -> bool {
        self.type1.iter().all(|&e| e <= eps + 2.0 * self.delta + ATOL)
    }

    /// The Type 2 exponent is at least `min beta_bar - penalty`.
    pub fn type2_bound_holds(&self) -> bool {
        let floor = self.beta_bar.iter().copied().fold(f64::INFINITY, f64::min) - self.penalty;
        self.value >= floor - TOL_OPT * math::abs(floor).max(1.0)
    }

    pub fn holds(&self, eps: f64) -> bool {
        self.type1_bound_holds(eps) && self.type2_bound_holds()
    }
}

/// `4 log s log(log s / delta)`, taken as zero for `s = 1`.
pub fn universal_penalty(s: usize, delta: f64) -> f64 {
    if s <= 1 {
        return 0.0;
    }
    let l = math::log2(s as f64);
    4.0 * l * math::log2(l / delta)
}

/// Builds `L* = <0| Pi* |0>` where `Pi*` is the union of the Neumark
/// dilations of the optimal per-state tests against `S2^n`.
pub fn build_universal_test(inst: &CompositeInstance, delta: f64, source: NullSource<'_>) -> Result<UniversalTest> {
    check_open_unit("delta", delta)?;
    let (reduced_set, assignment) = match source {
        NullSource::Exact => (inst.s1.states().to_vec(), (0..inst.s1.len()).collect()),
        NullSource::Net(net) => {
            let mut reduced: Vec<DensityMatrix> = Vec::new();
            let mut picked: Vec<usize> = Vec::new();
            let mut assignment = Vec::new();
            for rho in inst.s1.states() {
                let (idx, _) = net.nearest(rho)?;
                let slot = match picked.iter().position(|&p| p == idx) {
                    Some(k) => k,
                    None => {
                        picked.push(idx);
                        reduced.push(net.points()[idx].clone());
                        picked.len() - 1
                    }
                };
                assignment.push(slot);
            }
            (reduced, assignment)
        }
    };
    let s = reduced_set.len();
    let union_delta = delta / math::log2(2.0 * s as f64);
    let mut beta_values = Vec::with_capacity(s);
    let mut projectors = Vec::with_capacity(s);
    for rho in &reduced_set {
        let (value, test) = beta_bar(inst, rho, inst.epsilon)?;
        beta_values.push(value);
        projectors.push(neumark_dilate(&test)?.projector);
    }
    let union = union_many(&projectors, union_delta)?;
    let lambda = compress(union.matrix(), 2);
    let type1 = inst.type1_errors(&lambda);
    let type2 = inst.type2_errors(&lambda);
    let worst = type2.iter().copied().fold(0.0, f64::max);
    Ok(UniversalTest {
        test: TestOperator {
            type1_error: type1.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            type2_bound: worst,
            matrix: lambda,
        },
        reduced_set,
        assignment,
        beta_bar: beta_values,
        delta,
        union_delta,
        penalty: universal_penalty(s, delta),
        type1,
        type2,
        value: if worst > 0.0 { -math::log2(worst) } else { f64::INFINITY },
    })
}
