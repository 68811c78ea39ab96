use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::neumark::{ancilla_zero, neumark_dilate, with_ancilla_zero, DilatedProjector};
use super::rates::{informed_penalty, uninformed_penalty};
use super::{check_shared_state, union_delta, CodeParams, CompoundChannel};
use crate::divergences::{i_h, i_h_hat, i_h_tilde, StateEnsemble};
use crate::jordan::union_many;
use crate::qcore::{
    check_hermitian, eigh, embed, kron, pinv_sqrt, permute, trace_product, ComplexMatrix,
    DensityMatrix, Layout, Projector, PureState, C64,
};
use crate::{math, Error, Result, ATOL, DIM_CAP, SUPPORT_CUTOFF};

/// Outcome of checking
/// `I - (S+T)^{-1/2} S (S+T)^{-1/2} <= (1+c)(I-S) + (2+c+1/c) T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HnCertificate {
    pub c: f64,
    /// Smallest eigenvalue of right side minus left side.
    pub min_eigenvalue: f64,
}

impl HnCertificate {
    pub fn holds(&self) -> bool {
        self.min_eigenvalue >= -ATOL
    }
}

/// Checks the Hayashi-Nagaoka operator inequality for `0 <= S <= I`,
/// `T >= 0` and `c > 0`. The inverse square root is a pseudo-inverse on the
/// support of `S + T`.
pub fn hayashi_nagaoka_check(s: &ComplexMatrix, t: &ComplexMatrix, c: f64) -> Result<HnCertificate> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Parameter {
            name: "c",
            value: c,
            expected: "c > 0",
        });
    }
    check_hermitian(s)?;
    check_hermitian(t)?;
    if s.nrows() != t.nrows() {
        return Err(Error::DimensionMismatch {
            expected: s.nrows(),
            found: t.nrows(),
        });
    }
    let es = eigh(s);
    if es.min() < -ATOL {
        return Err(Error::NotPositive(es.min()));
    }
    if es.max() > 1.0 + ATOL {
        return Err(Error::NotContraction(es.max()));
    }
    let tmin = eigh(t).min();
    if tmin < -ATOL {
        return Err(Error::NotPositive(tmin));
    }
    let d = s.nrows();
    let id = ComplexMatrix::identity(d, d);
    let x = pinv_sqrt(&(s + t), SUPPORT_CUTOFF);
    let lhs = &id - &x * s * &x;
    let rhs = (&id - s) * C64::new(1.0 + c, 0.0) + t * C64::new(2.0 + c + 1.0 / c, 0.0);
    Ok(HnCertificate {
        c,
        min_eigenvalue: eigh(&(rhs - lhs)).min(),
    })
}

/// Exact error analysis of a position-based code.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    /// Channel indices that were simulated, matching the per-channel vectors.
    pub channels: Vec<usize>,
    /// `Pr{M' != 1 | M = 1}` for each simulated true channel.
    pub per_channel_error: Vec<f64>,
    /// `epsilon + 3 eta`
    pub bound: f64,
    pub rate_used: f64,
    /// Largest rate the achievability expression certifies for this code.
    pub rate_limit: f64,
    pub num_messages: usize,
    pub positions: usize,
    pub total_dim: usize,
    pub delta: f64,
    /// `1 - Tr[Pi* (rho_i (x) |0><0|)]` per simulated channel.
    pub union_type1: Vec<f64>,
    /// Weight the tests at every position other than the sent one put on the
    /// received state.
    pub confusion: Vec<f64>,
    /// Hayashi-Nagaoka upper bound on the error with `c = eta / (epsilon + eta)`.
    pub hn_bound: Vec<f64>,
    /// Largest eigenvalue of `sum_m Omega(m)`.
    pub decoder_max_eigenvalue: f64,
    /// Per-channel divergence behind each test (`I_H` or its restricted form).
    pub divergences: Vec<f64>,
}

impl SimulationReport {
    pub fn rate_satisfied(&self) -> bool {
        self.rate_used <= self.rate_limit
    }

    pub fn passes(&self) -> bool {
        self.per_channel_error.iter().all(|&e| e <= self.bound + ATOL)
    }
}

/// Error of one (channel, message) pair with the terms of the error chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MessageError {
    pub error: f64,
    pub union_type1: f64,
    pub confusion: f64,
    pub hn_bound: f64,
}

/// Shared-entanglement code with position-based decoding: one reference
/// register per position, `band` positions per message, and the union test
/// `Pi*` on (output, reference, ancilla).
#[derive(Clone, Debug)]
pub struct PositionCode {
    union: Projector,
    dilations: Vec<DilatedProjector>,
    joint_states: Vec<ComplexMatrix>,
    /// Reference marginal for each slot of a band.
    references: Vec<ComplexMatrix>,
    band: usize,
    num_messages: usize,
    out_dim: usize,
    ref_dim: usize,
    delta: f64,
    epsilon: f64,
    eta: f64,
    divergences: Vec<f64>,
    layout: Layout,
}

fn ref_label(k: usize) -> String {
    format!("R{k}")
}

fn code_layout(out_dim: usize, ref_dim: usize, positions: usize) -> Result<Layout> {
    let total = (0..positions)
        .try_fold(out_dim * 2, |acc: usize, _| acc.checked_mul(ref_dim))
        .filter(|&d| d <= DIM_CAP);
    let Some(_) = total else {
        let approx = (out_dim * 2) as f64 * math::pow(ref_dim as f64, positions as f64);
        return Err(Error::Capacity {
            dim: if approx > usize::MAX as f64 { usize::MAX } else { approx as usize },
            cap: DIM_CAP,
        });
    };
    let mut regs: Vec<(String, usize)> = alloc::vec![(String::from("B"), out_dim)];
    regs.extend((0..positions).map(|k| (ref_label(k), ref_dim)));
    regs.push((String::from("P"), 2));
    Layout::new(regs)
}

impl PositionCode {
    fn assemble(
        tests: Vec<crate::divergences::TestOperator>,
        joint_states: Vec<ComplexMatrix>,
        references: Vec<ComplexMatrix>,
        divergences: Vec<f64>,
        out_dim: usize,
        ref_dim: usize,
        epsilon: f64,
        eta: f64,
        num_messages: usize,
    ) -> Result<Self> {
        let s = joint_states.len();
        let band = references.len();
        let layout = code_layout(out_dim, ref_dim, band * num_messages)?;
        let dilations = tests.iter().map(neumark_dilate).collect::<Result<Vec<_>>>()?;
        let projectors: Vec<Projector> = dilations.iter().map(|d| d.projector.clone()).collect();
        let delta = union_delta(eta, s);
        let union = union_many(&projectors, delta)?;
        Ok(Self {
            union,
            dilations,
            joint_states,
            references,
            band,
            num_messages,
            out_dim,
            ref_dim,
            delta,
            epsilon,
            eta,
            divergences,
            layout,
        })
    }

    pub fn union(&self) -> &Projector {
        &self.union
    }

    pub fn dilations(&self) -> &[DilatedProjector] {
        &self.dilations
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn num_messages(&self) -> usize {
        self.num_messages
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn positions(&self) -> usize {
        self.band * self.num_messages
    }

    pub fn total_dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn divergences(&self) -> &[f64] {
        &self.divergences
    }

    /// `Lambda(k)`: the union test on the output, reference `k` and ancilla.
    pub fn position_test(&self, k: usize) -> Result<ComplexMatrix> {
        let label = ref_label(k);
        embed(self.union.matrix(), &["B", label.as_str(), "P"], &self.layout)
    }

    /// Position of the share sent for `message` over channel `channel`.
    fn sent_position(&self, channel: usize, message: usize) -> usize {
        let slot = if self.band == 1 { 0 } else { channel };
        message * self.band + slot
    }

    /// Received state with the ancilla in `|0>`, when `channel` carried the
    /// share at position `sent`.
    pub fn received_state(&self, channel: usize, message: usize) -> Result<ComplexMatrix> {
        self.check_indices(channel, message)?;
        let sent = self.sent_position(channel, message);
        let mut m = self.joint_states[channel].clone();
        let mut order: Vec<String> = alloc::vec![String::from("B"), ref_label(sent)];
        for k in (0..self.positions()).filter(|&k| k != sent) {
            m = kron(&m, &self.references[k % self.band]);
            order.push(ref_label(k));
        }
        m = kron(&m, &ancilla_zero(2));
        order.push(String::from("P"));
        let dims: Vec<(String, usize)> = order
            .iter()
            .map(|l| (l.clone(), if l == "B" { self.out_dim } else if l == "P" { 2 } else { self.ref_dim }))
            .collect();
        let built = Layout::new(dims)?;
        let labels = self.layout.labels();
        let (out, _) = permute(&m, &built, &labels)?;
        Ok(out)
    }

    fn check_indices(&self, channel: usize, message: usize) -> Result<()> {
        if channel >= self.joint_states.len() {
            return Err(Error::Parameter {
                name: "channel index",
                value: channel as f64,
                expected: "an index into the compound channel",
            });
        }
        if message >= self.num_messages {
            return Err(Error::Parameter {
                name: "message",
                value: message as f64,
                expected: "an index below num_messages",
            });
        }
        Ok(())
    }

    /// `S = sum of Lambda(k)` over the band of `message` and `T` over all other positions.
    pub fn decoder_operators(&self, message: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let d = self.total_dim();
        let mut s = ComplexMatrix::zeros(d, d);
        let mut t = ComplexMatrix::zeros(d, d);
        for k in 0..self.positions() {
            let lam = self.position_test(k)?;
            if k / self.band == message {
                s += lam;
            } else {
                t += lam;
            }
        }
        Ok((s, t))
    }

    /// The decoding element for `message` and `sum_m Omega(m)`.
    pub fn decoder(&self, message: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let (s, t) = self.decoder_operators(message)?;
        let total = &s + &t;
        let x = pinv_sqrt(&total, SUPPORT_CUTOFF);
        Ok((&x * &s * &x, &x * total * &x))
    }

    /// `Pr{M' != message | M = message}` when `channel` acts.
    pub fn message_error(&self, channel: usize, message: usize) -> Result<MessageError> {
        let theta = self.received_state(channel, message)?;
        let (s, t) = self.decoder_operators(message)?;
        let x = pinv_sqrt(&(&s + &t), SUPPORT_CUTOFF);
        let omega = &x * &s * &x;
        let error = (1.0 - trace_product(&omega, &theta).re).clamp(0.0, 1.0);
        self.error_terms(channel, message, error, &s, &t, &theta)
    }

    /// Hayashi-Nagaoka terms with `S'` the test at the position carrying
    /// `channel`'s share and `T'` every other position, so that `S' <= I`.
    fn error_terms(
        &self,
        channel: usize,
        message: usize,
        error: f64,
        s: &ComplexMatrix,
        t: &ComplexMatrix,
        theta: &ComplexMatrix,
    ) -> Result<MessageError> {
        let c = self.eta / (self.epsilon + self.eta);
        let own = self.position_test(self.sent_position(channel, message))?;
        let hit = trace_product(&own, theta).re;
        let miss = 1.0 - hit;
        let confusion = trace_product(s, theta).re + trace_product(t, theta).re - hit;
        let union_type1 =
            1.0 - trace_product(self.union.matrix(), &with_ancilla_zero(&self.joint_states[channel])).re;
        Ok(MessageError {
            error,
            union_type1,
            confusion,
            hn_bound: (1.0 + c) * miss + (2.0 + c + 1.0 / c) * confusion,
        })
    }

    /// Errors for message 0 on the given channels, sharing one decoder.
    pub fn simulate(&self, channels: &[usize], rate_used: f64, rate_limit: f64) -> Result<SimulationReport> {
        for &i in channels {
            self.check_indices(i, 0)?;
        }
        let (s, t) = self.decoder_operators(0)?;
        let total = &s + &t;
        let x = pinv_sqrt(&total, SUPPORT_CUTOFF);
        let omega = &x * &s * &x;
        let decoder_max_eigenvalue = eigh(&(&x * &total * &x)).max();
        let mut report = SimulationReport {
            channels: channels.to_vec(),
            per_channel_error: Vec::new(),
            bound: self.epsilon + 3.0 * self.eta,
            rate_used,
            rate_limit,
            num_messages: self.num_messages,
            positions: self.positions(),
            total_dim: self.total_dim(),
            delta: self.delta,
            union_type1: Vec::new(),
            confusion: Vec::new(),
            hn_bound: Vec::new(),
            decoder_max_eigenvalue,
            divergences: self.divergences.clone(),
        };
        for &i in channels {
            let theta = self.received_state(i, 0)?;
            let error = (1.0 - trace_product(&omega, &theta).re).clamp(0.0, 1.0);
            let terms = self.error_terms(i, 0, error, &s, &t, &theta)?;
            report.per_channel_error.push(terms.error);
            report.union_type1.push(terms.union_type1);
            report.confusion.push(terms.confusion);
            report.hn_bound.push(terms.hn_bound);
        }
        Ok(report)
    }
}

fn all_or_one(cc: &CompoundChannel, true_channel: Option<usize>) -> Result<Vec<usize>> {
    match true_channel {
        Some(i) => {
            cc.channel(i)?;
            Ok(alloc::vec![i])
        }
        None => Ok((0..cc.len()).collect()),
    }
}

/// Uninformed-sender code: each test is the `I_H` minimax test of one
/// channel's output, dilated and merged into a single union test.
pub fn build_uninformed_code(
    cc: &CompoundChannel,
    psi: &PureState,
    epsilon: f64,
    eta: f64,
    num_messages: usize,
) -> Result<PositionCode> {
    crate::error::check_open_unit("epsilon", epsilon)?;
    crate::error::check_open_unit("eta", eta)?;
    let (_, reference) = check_shared_state(psi, cc.input_dim())?;
    let ref_dim = psi.layout().dim_of(reference)?;
    code_layout(cc.output_dim(), ref_dim, num_messages.max(1))?;
    let rho_ref = psi.density().partial_trace(&[reference])?.into_matrix();
    let mut tests = Vec::with_capacity(cc.len());
    let mut joints = Vec::with_capacity(cc.len());
    let mut values = Vec::with_capacity(cc.len());
    for i in 0..cc.len() {
        let rho = cc.joint_output(i, psi)?;
        let sol = i_h(&rho, epsilon)?;
        values.push(sol.value);
        tests.push(sol.test);
        joints.push(rho.into_matrix());
    }
    PositionCode::assemble(
        tests,
        joints,
        alloc::vec![rho_ref],
        values,
        cc.output_dim(),
        ref_dim,
        epsilon,
        eta,
        num_messages.max(1),
    )
}

/// Runs the uninformed protocol with message 0 sent; `true_channel = None`
/// simulates every channel of the set.
pub fn simulate_uninformed(
    cc: &CompoundChannel,
    params: &CodeParams,
    true_channel: Option<usize>,
) -> Result<SimulationReport> {
    let channels = all_or_one(cc, true_channel)?;
    let code = build_uninformed_code(cc, &params.shared_state, params.epsilon, params.eta, params.num_messages)?;
    let min_ih = code.divergences.iter().copied().fold(f64::INFINITY, f64::min);
    let limit = min_ih + uninformed_penalty(cc.len(), params.epsilon, params.eta);
    code.simulate(&channels, params.rate_bits, limit)
}

/// Per-channel outputs, reference marginals and ensembles for the informed protocol.
pub(crate) struct InformedSetup {
    pub joints: Vec<DensityMatrix>,
    pub references: Vec<DensityMatrix>,
    pub outputs: StateEnsemble,
    pub reference_set: StateEnsemble,
    pub average_reference: DensityMatrix,
}

pub(crate) fn informed_setup(cc: &CompoundChannel, states: &[PureState]) -> Result<InformedSetup> {
    if states.len() != cc.len() {
        return Err(Error::DimensionMismatch {
            expected: cc.len(),
            found: states.len(),
        });
    }
    let mut joints = Vec::new();
    let mut references = Vec::new();
    let mut outputs = Vec::new();
    let ref_dim = {
        let (_, r) = check_shared_state(&states[0], cc.input_dim())?;
        states[0].layout().dim_of(r)?
    };
    for (i, psi) in states.iter().enumerate() {
        let (_, r) = check_shared_state(psi, cc.input_dim())?;
        if psi.layout().dim_of(r)? != ref_dim {
            return Err(Error::DimensionMismatch {
                expected: ref_dim,
                found: psi.layout().dim_of(r)?,
            });
        }
        let rho = cc.joint_output(i, psi)?;
        let (b, a) = rho.bipartite_labels()?;
        let (b, a) = (String::from(b), String::from(a));
        outputs.push(rho.partial_trace(&[b.as_str()])?);
        references.push(rho.partial_trace(&[a.as_str()])?);
        joints.push(rho);
    }
    let d = ref_dim;
    let mut avg = ComplexMatrix::zeros(d, d);
    for r in &references {
        avg += r.matrix() * C64::new(1.0 / references.len() as f64, 0.0);
    }
    let average_reference = DensityMatrix::from_parts(avg, references[0].layout().clone());
    Ok(InformedSetup {
        outputs: StateEnsemble::new(outputs)?,
        reference_set: StateEnsemble::new(references.clone())?,
        joints,
        references,
        average_reference,
    })
}

/// Informed-sender code: a band of `s` shares per message, share `i` prepared
/// in `states[i]`. Each test is the restricted minimax test against the hull
/// of channel outputs and the average reference marginal.
pub fn build_informed_code(
    cc: &CompoundChannel,
    states: &[PureState],
    epsilon: f64,
    eta: f64,
    num_messages: usize,
) -> Result<PositionCode> {
    crate::error::check_open_unit("epsilon", epsilon)?;
    crate::error::check_open_unit("eta", eta)?;
    if states.len() != cc.len() {
        return Err(Error::DimensionMismatch {
            expected: cc.len(),
            found: states.len(),
        });
    }
    let (_, r) = check_shared_state(&states[0], cc.input_dim())?;
    let ref_dim = states[0].layout().dim_of(r)?;
    code_layout(cc.output_dim(), ref_dim, cc.len() * num_messages.max(1))?;
    let setup = informed_setup(cc, states)?;
    let mut tests = Vec::new();
    let mut values = Vec::new();
    for rho in &setup.joints {
        let sol = i_h_tilde(rho, &setup.average_reference, &setup.outputs, epsilon)?;
        values.push(sol.value);
        tests.push(sol.test);
    }
    PositionCode::assemble(
        tests,
        setup.joints.into_iter().map(DensityMatrix::into_matrix).collect(),
        setup.references.into_iter().map(DensityMatrix::into_matrix).collect(),
        values,
        cc.output_dim(),
        ref_dim,
        epsilon,
        eta,
        num_messages.max(1),
    )
}

/// Runs the informed protocol with message 0 sent. `params.shared_state` is
/// not used; `states` supplies one shared state per channel. The reported
/// rate limit is the hull-restricted bound over `states`.
pub fn simulate_informed(
    cc: &CompoundChannel,
    states: &[PureState],
    params: &CodeParams,
    true_channel: Option<usize>,
) -> Result<SimulationReport> {
    let channels = all_or_one(cc, true_channel)?;
    let code = build_informed_code(cc, states, params.epsilon, params.eta, params.num_messages)?;
    let setup = informed_setup(cc, states)?;
    let mut min_hat = f64::INFINITY;
    for rho in &setup.joints {
        let v = i_h_hat(rho, &setup.outputs, &setup.reference_set, params.epsilon)?.best.value;
        min_hat = min_hat.min(v);
    }
    let limit = min_hat + informed_penalty(cc.len(), params.epsilon, params.eta);
    code.simulate(&channels, params.rate_bits, limit)
}
