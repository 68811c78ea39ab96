use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::divergences::{i_max, relative_entropy_variance_mat};
use crate::qcore::random::{random_weights, rng_from_seed};
use crate::qcore::{eigh, kron, permute, tensor_power, ComplexMatrix, DensityMatrix, Layout, C64};
use crate::{math, Error, Result, ATOL, DIM_CAP};

/// Certificates for the blocked product bounds used by the informed-sender
/// rate analysis, for states `rho_i` on (output, reference).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockingCertificate {
    pub n: usize,
    pub block: usize,
    /// Smallest eigenvalue of `s^{n/l} mu^{(x) n/l} - sigma` for each sampled
    /// `sigma` in the hull of reference powers (vertices first).
    pub reference_gaps: Vec<f64>,
    /// The same for the hull of output powers against `omega`.
    pub output_gaps: Vec<f64>,
    /// `V(rho_i^{(x) l} || omega (x) mu)` per state.
    pub variances: Vec<f64>,
    /// `(2 log s + l I_max(rho_i))^2` per state.
    pub variance_bounds: Vec<f64>,
}

impl BlockingCertificate {
    pub fn holds(&self) -> bool {
        self.reference_gaps.iter().chain(&self.output_gaps).all(|&g| g >= -ATOL)
            && self
                .variances
                .iter()
                .zip(&self.variance_bounds)
                .all(|(v, b)| *v <= b + ATOL)
    }
}

fn average_power(states: &[ComplexMatrix], k: usize) -> ComplexMatrix {
    let d = states[0].nrows().pow(k as u32);
    let mut out = ComplexMatrix::zeros(d, d);
    for s in states {
        out += tensor_power(s, k) * C64::new(1.0 / states.len() as f64, 0.0);
    }
    out
}

/// Smallest eigenvalue of `bound - sum_i w_i state_i^{(x) n}` for the vertices
/// and `mixtures` random weight vectors.
fn hull_gaps(
    states: &[ComplexMatrix],
    n: usize,
    bound: &ComplexMatrix,
    mixtures: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<f64> {
    let powers: Vec<ComplexMatrix> = states.iter().map(|s| tensor_power(s, n)).collect();
    let s = states.len();
    let mut weights: Vec<Vec<f64>> = (0..s)
        .map(|i| (0..s).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    weights.extend((0..mixtures).map(|_| random_weights(rng, s)));
    weights
        .iter()
        .map(|w| {
            let mut sigma = ComplexMatrix::zeros(bound.nrows(), bound.nrows());
            for (p, &wi) in powers.iter().zip(w) {
                sigma += p * C64::new(wi, 0.0);
            }
            eigh(&(bound - sigma)).min()
        })
        .collect()
}

/// Checks, for `s` bipartite states `rho_i` on (output, reference), blocks of
/// length `l` dividing `n`, and `mixtures` random convex weights:
///
/// - every `sigma` in the hull of `rho_{i,A'}^{(x) n}` satisfies
///   `sigma <= s^{n/l} mu^{(x) n/l}` with `mu` the average of `rho_{i,A'}^{(x) l}`,
///   and likewise for the outputs against `omega`;
/// - `V(rho_i^{(x) l} || omega (x) mu) <= (2 log s + l I_max(rho_i))^2`.
pub fn informed_finite_blocking_bounds(
    states: &[DensityMatrix],
    n: usize,
    block: usize,
    mixtures: usize,
    seed: u64,
) -> Result<BlockingCertificate> {
    let first = states
        .first()
        .ok_or_else(|| Error::Invalid("need at least one state".into()))?;
    if block == 0 || n == 0 || !n.is_multiple_of(block) {
        return Err(Error::Parameter {
            name: "block",
            value: block as f64,
            expected: "a positive divisor of n",
        });
    }
    let (b_label, a_label) = first.bipartite_labels()?;
    let (db, da) = (first.layout().dim_of(b_label)?, first.layout().dim_of(a_label)?);
    for st in states {
        if st.layout().dims() != [db, da] {
            return Err(Error::DimensionMismatch {
                expected: db * da,
                found: st.dim(),
            });
        }
    }
    let cap_check = |base: usize, k: usize| -> Result<()> {
        match base.checked_pow(k as u32) {
            Some(d) if d <= DIM_CAP => Ok(()),
            _ => Err(Error::Capacity {
                dim: usize::MAX,
                cap: DIM_CAP,
            }),
        }
    };
    cap_check(da, n)?;
    cap_check(db, n)?;
    cap_check(db * da, block)?;

    let mut outputs = Vec::new();
    let mut refs = Vec::new();
    for st in states {
        let (b, a) = st.bipartite_labels()?;
        outputs.push(st.partial_trace(&[b])?.into_matrix());
        refs.push(st.partial_trace(&[a])?.into_matrix());
    }
    let s = states.len() as f64;
    let copies = n / block;
    let scale = C64::new(math::pow(s, copies as f64), 0.0);
    let mu = average_power(&refs, block);
    let omega = average_power(&outputs, block);
    let mut rng = rng_from_seed(seed);
    let reference_gaps = hull_gaps(&refs, n, &(tensor_power(&mu, copies) * scale), mixtures, &mut rng);
    let output_gaps = hull_gaps(&outputs, n, &(tensor_power(&omega, copies) * scale), mixtures, &mut rng);

    // rho^{(x) l} is laid out (B A')^l; the product alternative is B^l A'^l.
    let mut interleaved: Vec<(String, usize)> = Vec::new();
    for k in 0..block {
        interleaved.push((format!("B{k}"), db));
        interleaved.push((format!("A{k}"), da));
    }
    let interleaved = Layout::new(interleaved)?;
    let grouped: Vec<String> = (0..block)
        .map(|k| format!("B{k}"))
        .chain((0..block).map(|k| format!("A{k}")))
        .collect();
    let grouped: Vec<&str> = grouped.iter().map(String::as_str).collect();
    let alternative = kron(&omega, &mu);
    let mut variances = Vec::new();
    let mut variance_bounds = Vec::new();
    for st in states {
        let (power, _) = permute(&tensor_power(st.matrix(), block), &interleaved, &grouped)?;
        variances.push(relative_entropy_variance_mat(&power, &alternative));
        let imax = i_max(st)?.value;
        let b = 2.0 * math::log2(s) + block as f64 * imax;
        variance_bounds.push(b * b);
    }
    Ok(BlockingCertificate {
        n,
        block,
        reference_gaps,
        output_gaps,
        variances,
        variance_bounds,
    })
}
