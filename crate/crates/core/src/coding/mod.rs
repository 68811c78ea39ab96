//! Entanglement-assisted codes for compound channels: the position-based
//! protocol for an uninformed and an informed sender, simulated exactly, with
//! the rate expressions that certify them.

mod blocking;
mod decoder;
mod neumark;
mod rates;

pub use blocking::{informed_finite_blocking_bounds, BlockingCertificate};
pub use decoder::{
    build_informed_code, build_uninformed_code, hayashi_nagaoka_check, simulate_informed,
    simulate_uninformed, HnCertificate, MessageError, PositionCode, SimulationReport,
};
pub use neumark::{neumark_dilate, DilatedProjector};
pub(crate) use neumark::compress;
pub use rates::{
    achievable_rate_uninformed, converse_rate, pauli_compound_example, rate_informed,
    schmidt_sweep, PauliExampleReport,
};

use alloc::vec::Vec;

use crate::error::check_open_unit;
use crate::qcore::{Channel, DensityMatrix, PureState};
use crate::{math, Error, Result};

/// A finite set of channels with a common single-register input and output.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundChannel {
    channels: Vec<Channel>,
}

impl CompoundChannel {
    pub fn new(channels: Vec<Channel>) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::Invalid("compound channel needs at least one channel".into()))?;
        if first.input().len() != 1 || first.output().len() != 1 {
            return Err(Error::Invalid(
                "compound channels act on a single input and output register".into(),
            ));
        }
        for ch in &channels {
            if ch.input().dims() != first.input().dims() || ch.output().dims() != first.output().dims() {
                return Err(Error::Invalid("channels have different signatures".into()));
            }
            if ch.input().len() != 1 || ch.output().len() != 1 {
                return Err(Error::Invalid(
                    "compound channels act on a single input and output register".into(),
                ));
            }
        }
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.channels[0].input().total_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.channels[0].output().total_dim()
    }

    pub fn average(&self) -> Result<Channel> {
        Channel::average(&self.channels)
    }

    /// `N_i(psi_{AA'})` laid out as (output, reference).
    pub fn joint_output(&self, i: usize, psi: &PureState) -> Result<DensityMatrix> {
        let ch = self.channel(i)?;
        let rho = psi.density();
        let (a, _) = check_shared_state(psi, self.input_dim())?;
        ch.apply(&rho, &[a])
    }

    pub(crate) fn channel(&self, i: usize) -> Result<&Channel> {
        self.channels.get(i).ok_or(Error::Parameter {
            name: "channel index",
            value: i as f64,
            expected: "an index into the compound channel",
        })
    }
}

/// Labels of a shared state whose first register feeds the channel.
pub(crate) fn check_shared_state(psi: &PureState, input_dim: usize) -> Result<(&str, &str)> {
    let regs = psi.layout().registers();
    if regs.len() != 2 {
        return Err(Error::Invalid("shared state must have two registers".into()));
    }
    if regs[0].dim != input_dim {
        return Err(Error::DimensionMismatch {
            expected: input_dim,
            found: regs[0].dim,
        });
    }
    Ok((regs[0].label.as_str(), regs[1].label.as_str()))
}

/// Largest `ceil(R)` accepted; anything larger cannot fit under the dimension cap.
const MAX_RATE_EXPONENT: f64 = 12.0;

/// Rate, error targets and shared state of a code.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeParams {
    pub rate_bits: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub shared_state: PureState,
    /// `2^ceil(R)`, and 1 when `R <= 0`.
    pub num_messages: usize,
}

impl CodeParams {
    pub fn new(rate_bits: f64, epsilon: f64, eta: f64, shared_state: PureState) -> Result<Self> {
        check_open_unit("epsilon", epsilon)?;
        check_open_unit("eta", eta)?;
        if !rate_bits.is_finite() && rate_bits != f64::NEG_INFINITY {
            return Err(Error::Parameter {
                name: "rate_bits",
                value: rate_bits,
                expected: "a finite rate or -inf",
            });
        }
        let exponent = math::ceil(rate_bits);
        if exponent > MAX_RATE_EXPONENT {
            return Err(Error::Parameter {
                name: "rate_bits",
                value: rate_bits,
                expected: "at most 12 bits",
            });
        }
        let num_messages = if exponent <= 0.0 { 1 } else { 1usize << (exponent as u32) };
        Ok(Self {
            rate_bits,
            epsilon,
            eta,
            shared_state,
            num_messages,
        })
    }

    /// `epsilon + 3 eta`, the error every channel must meet.
    pub fn error_target(&self) -> f64 {
        self.epsilon + 3.0 * self.eta
    }
}

/// Union-lemma slack per merge round, `eta / (3 log2(2s))`.
pub fn union_delta(eta: f64, s: usize) -> f64 {
    eta / (3.0 * math::log2(2.0 * s as f64))
}
