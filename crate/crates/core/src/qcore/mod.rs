//! Dense complex matrices, register layouts, states, channels and sampling.

mod channel;
mod eig;
mod layout;
mod matrix;
mod ops;
pub mod random;
mod state;
pub mod text;

pub use channel::{pauli_channel_family, Channel};
pub use eig::{hermitian_eig, HermitianEig};
pub(crate) use eig::eigh;
pub use layout::{Layout, Register};
pub use matrix::{
    c64, from_row_major, hermitian_deviation, identity, kron, max_abs, outer, tensor_power,
    to_row_major, trace_product, zeros, ComplexMatrix, ComplexVector, C64,
};
pub use ops::{embed, partial_trace, permute};
pub use state::{DensityMatrix, Projector, PureState};

pub(crate) use eig::{
    check_hermitian, log2_on_support, negative_part_trace,
    pinv_sqrt, psd_sqrt, support_basis,
};
