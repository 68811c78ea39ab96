//! Short text specs for compound channels and shared states.
//!
//! Channel families, all from register `A` to `B`:
//! - `pauli:IXZ` qubit unitaries, one letter per channel;
//! - `pauli-all:q` all `4^q` Pauli words on `q` qubits;
//! - `depolarizing:0.1,0.5` qubit depolarizing channels;
//! - `random:s` `s` random qubit channels (needs a seed).
//!
//! Shared states on (`A`, `R`): `bell` (maximally entangled) or
//! `schmidt:0.7,0.3` (Schmidt probabilities).

use qcompound::coding::CompoundChannel;
use qcompound::qcore::random::{random_channel, rng_from_seed};
use qcompound::qcore::{c64, pauli_channel_family, Channel, ComplexMatrix, Layout, PureState};

use crate::error::{LabError, LabResult};

fn bad(msg: String) -> LabError {
    LabError::Config(msg)
}

fn pauli_letter(c: char) -> LabResult<ComplexMatrix> {
    let (z, o, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
    let m = match c.to_ascii_uppercase() {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => return Err(bad(format!("unknown Pauli letter `{c}`"))),
    };
    Ok(ComplexMatrix::from_row_slice(2, 2, &m))
}

fn parse_list(body: &str, what: &str) -> LabResult<Vec<f64>> {
    body.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad(format!("bad number `{t}` in {what}"))))
        .collect()
}

pub fn parse_family(spec: &str, kraus: usize, seed: Option<u64>) -> LabResult<CompoundChannel> {
    let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
    let channels = match kind {
        "pauli" => {
            if body.is_empty() {
                return Err(bad("`pauli:` needs at least one letter".into()));
            }
            body.chars()
                .map(|c| Ok(Channel::unitary(pauli_letter(c)?, "A", "B")?))
                .collect::<LabResult<Vec<_>>>()?
        }
        "pauli-all" => {
            let q: usize = body.parse().map_err(|_| bad(format!("bad qubit count in `{spec}`")))?;
            pauli_channel_family(q)?
        }
        "depolarizing" => parse_list(body, spec)?
            .into_iter()
            .map(|p| Ok(Channel::depolarizing(p, "A", "B", 2)?))
            .collect::<LabResult<Vec<_>>>()?,
        "random" => {
            let s: usize = body.parse().map_err(|_| bad(format!("bad channel count in `{spec}`")))?;
            if s == 0 {
                return Err(bad("`random:` needs at least one channel".into()));
            }
            let seed = seed.ok_or_else(|| bad("random channel families need `seed`".into()))?;
            let mut rng = rng_from_seed(seed);
            let (a, b) = (Layout::single("A", 2)?, Layout::single("B", 2)?);
            (0..s)
                .map(|_| Ok(random_channel(&mut rng, a.clone(), b.clone(), kraus)?))
                .collect::<LabResult<Vec<_>>>()?
        }
        _ => return Err(bad(format!("unknown channel family `{spec}`"))),
    };
    Ok(CompoundChannel::new(channels)?)
}

pub fn parse_shared_state(spec: &str, dim: usize) -> LabResult<PureState> {
    match spec.split_once(':') {
        None if spec == "bell" => Ok(PureState::maximally_entangled(dim, "A", "R")?),
        Some(("schmidt", body)) => {
            let p = parse_list(body, spec)?;
            if p.len() != dim {
                return Err(bad(format!("`{spec}` has {} coefficients, the channel input has dimension {dim}", p.len())));
            }
            Ok(PureState::schmidt(&p, "A", "R")?)
        }
        _ => Err(bad(format!("unknown shared state `{spec}`"))),
    }
}

/// Schmidt probabilities of a shared state built by [`parse_shared_state`]
/// or the rate sweep.
pub fn schmidt_probabilities(psi: &PureState) -> Vec<f64> {
    let d = psi.layout().dims()[0];
    (0..d).map(|k| psi.amplitudes()[k * d + k].norm_sqr()).collect()
}
