//! Relative entropy, its variance, max-divergence and the one-shot
//! hypothesis-testing divergence with its mutual-information variants.

mod entropy;
mod mutual;
mod neyman_pearson;
pub(crate) mod saddle;

pub use entropy::{
    d_max, fidelity, i_max, mutual_information, purified_distance, relative_entropy,
    relative_entropy_variance, trace_distance, DmaxResult,
};
pub use mutual::{d_h_hull, i_h, i_h_hat, i_h_tilde, NestedSolution, SaddleSolution, StateEnsemble};
pub use neyman_pearson::{hypothesis_test_divergence, HypothesisTest, TestOperator};

pub(crate) use entropy::relative_entropy_variance_mat;
