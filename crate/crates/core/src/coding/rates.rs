use alloc::vec::Vec;

use super::decoder::informed_setup;
use super::CompoundChannel;
use crate::divergences::{i_h, i_h_hat};
use crate::error::check_open_unit;
use crate::qcore::random::{random_density_matrix, rng_from_seed};
use crate::qcore::{max_abs, pauli_channel_family, ComplexMatrix, Layout, PureState, C64};
use crate::{math, Error, Result};

/// `2 log(2s) log(eta / (6 log 2s)) + log(eps / 4s)`, the uninformed penalty.
pub(crate) fn uninformed_penalty(s: usize, eps: f64, eta: f64) -> f64 {
    let l = math::log2(2.0 * s as f64);
    2.0 * l * math::log2(eta / (6.0 * l)) + math::log2(eps / (4.0 * s as f64))
}

/// `log(2s) log(eta / (6 log 2s)) + log(eps / 4s^2)`, the informed penalty.
pub(crate) fn informed_penalty(s: usize, eps: f64, eta: f64) -> f64 {
    let l = math::log2(2.0 * s as f64);
    let s = s as f64;
    l * math::log2(eta / (6.0 * l)) + math::log2(eps / (4.0 * s * s))
}

/// `min_i I_H^eps(B:A')` of the channel outputs at `psi`.
pub fn converse_rate(cc: &CompoundChannel, psi: &PureState, eps: f64) -> Result<f64> {
    check_open_unit("epsilon", eps)?;
    let mut best = f64::INFINITY;
    for i in 0..cc.len() {
        let rho = cc.joint_output(i, psi)?;
        best = best.min(i_h(&rho, eps)?.value);
    }
    Ok(best)
}

/// Rate certified for the uninformed protocol at `psi` (no maximization over `psi`).
pub fn achievable_rate_uninformed(cc: &CompoundChannel, psi: &PureState, eps: f64, eta: f64) -> Result<f64> {
    check_open_unit("eta", eta)?;
    Ok(converse_rate(cc, psi, eps)? + uninformed_penalty(cc.len(), eps, eta))
}

/// Rate certified for the informed protocol with one shared state per
/// channel, using the doubly restricted divergence over the hulls of channel
/// outputs and of reference marginals.
pub fn rate_informed(cc: &CompoundChannel, states: &[PureState], eps: f64, eta: f64) -> Result<f64> {
    check_open_unit("epsilon", eps)?;
    check_open_unit("eta", eta)?;
    let setup = informed_setup(cc, states)?;
    let mut best = f64::INFINITY;
    for rho in &setup.joints {
        let v = i_h_hat(rho, &setup.outputs, &setup.reference_set, eps)?.best.value;
        best = best.min(v);
    }
    Ok(best + informed_penalty(cc.len(), eps, eta))
}

fn partitions(units: usize, parts: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if units == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for first in (0..=units.min(max_part)).rev() {
        if first * parts < units {
            break;
        }
        prefix.push(first);
        partitions(units - first, parts - 1, first, prefix, out);
        prefix.pop();
    }
}

/// Shared states for the rate sweep: the maximally entangled state followed by
/// every Schmidt-coefficient vector on a grid of the given step (sorted
/// descending, so each state appears once up to local relabeling).
pub fn schmidt_sweep(dim: usize, step: f64, a: &str, b: &str) -> Result<Vec<PureState>> {
    if dim == 0 {
        return Err(Error::EmptyRegister);
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Parameter {
            name: "step",
            value: step,
            expected: "0 < step <= 1",
        });
    }
    let units = math::round(1.0 / step) as usize;
    let mut grids = Vec::new();
    partitions(units, dim, units, &mut Vec::new(), &mut grids);
    let mut out = alloc::vec![PureState::maximally_entangled(dim, a, b)?];
    for g in grids {
        let p: Vec<f64> = g.iter().map(|&u| u as f64 / units as f64).collect();
        if p.iter().all(|&x| math::abs(x - 1.0 / dim as f64) < 1e-12) {
            continue;
        }
        out.push(PureState::schmidt(&p, a, b)?);
    }
    Ok(out)
}

/// The all-Pauli compound channel with a maximally entangled input.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliExampleReport {
    pub num_qubits: usize,
    pub epsilon: f64,
    /// `I_H^eps(B:A')` of each channel output.
    pub per_channel: Vec<f64>,
    pub min_i_h: f64,
    /// `2q + log(1-eps)`, the closed form as usually quoted.
    pub quoted_closed_form: f64,
    /// `2q - log(1-eps)`, the value of the divergence as defined.
    pub definition_closed_form: f64,
    /// Largest entry of `avg(rho) - I/d` over the random inputs.
    pub average_channel_deviation: f64,
    pub random_inputs: usize,
}

pub fn pauli_compound_example(num_qubits: usize, eps: f64, seed: u64) -> Result<PauliExampleReport> {
    check_open_unit("epsilon", eps)?;
    if num_qubits != 1 {
        return Err(Error::Parameter {
            name: "num_qubits",
            value: num_qubits as f64,
            expected: "exactly one qubit",
        });
    }
    let d = 1usize << num_qubits;
    let cc = CompoundChannel::new(pauli_channel_family(num_qubits)?)?;
    let psi = PureState::maximally_entangled(d, "A", "R")?;
    let mut per_channel = Vec::with_capacity(cc.len());
    for i in 0..cc.len() {
        per_channel.push(i_h(&cc.joint_output(i, &psi)?, eps)?.value);
    }
    let min_i_h = per_channel.iter().copied().fold(f64::INFINITY, f64::min);

    let avg = cc.average()?;
    let mut rng = rng_from_seed(seed);
    let layout = Layout::single("A", d)?;
    let mixed = ComplexMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
    let random_inputs = 5;
    let mut deviation: f64 = 0.0;
    for _ in 0..random_inputs {
        let rho = random_density_matrix(&mut rng, layout.clone());
        let out = avg.apply(&rho, &["A"])?;
        deviation = deviation.max(max_abs(&(out.matrix() - &mixed)));
    }
    let q = num_qubits as f64;
    Ok(PauliExampleReport {
        num_qubits,
        epsilon: eps,
        per_channel,
        min_i_h,
        quoted_closed_form: 2.0 * q + math::log2(1.0 - eps),
        definition_closed_form: 2.0 * q - math::log2(1.0 - eps),
        average_channel_deviation: deviation,
        random_inputs,
    })
}
