use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::layout::Layout;
use super::matrix::{identity, kron, max_abs, ComplexMatrix, C64};
use super::ops;
use super::state::DensityMatrix;
use crate::{math, Error, Result, ATOL};

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
    input: Layout,
    output: Layout,
}

impl Channel {
    pub fn new(kraus: Vec<ComplexMatrix>, input: Layout, output: Layout) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Invalid("channel needs at least one Kraus operator".into()));
        }
        let (di, d_out) = (input.total_dim(), output.total_dim());
        let mut sum = DMatrix::zeros(di, di);
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != di {
                return Err(Error::DimensionMismatch {
                    expected: d_out * di,
                    found: k.nrows() * k.ncols(),
                });
            }
            sum += k.adjoint() * k;
        }
        let dev = max_abs(&(sum - identity(di)));
        if dev > ATOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { kraus, input, output })
    }

    pub fn identity(input: &str, output: &str, dim: usize) -> Result<Self> {
        Self::new(
            alloc::vec![identity(dim)],
            Layout::single(input, dim)?,
            Layout::single(output, dim)?,
        )
    }

    pub fn unitary(u: ComplexMatrix, input: &str, output: &str) -> Result<Self> {
        let d = u.nrows();
        Self::new(alloc::vec![u], Layout::single(input, d)?, Layout::single(output, d)?)
    }

    /// `rho -> (1-p) rho + p Tr[rho] I/d`, Kraus operators from the Weyl basis.
    pub fn depolarizing(p: f64, input: &str, output: &str, dim: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter {
                name: "p",
                value: p,
                expected: "0 <= p <= 1",
            });
        }
        let d2 = (dim * dim) as f64;
        let mut kraus = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let w = if a == 0 && b == 0 {
                    1.0 - p + p / d2
                } else {
                    p / d2
                };
                if w == 0.0 {
                    continue;
                }
                kraus.push(weyl(dim, a, b) * C64::new(math::sqrt(w), 0.0));
            }
        }
        Self::new(kraus, Layout::single(input, dim)?, Layout::single(output, dim)?)
    }

    /// Uniform mixture of channels with a common signature.
    pub fn average(channels: &[Channel]) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::Invalid("cannot average an empty channel list".into()))?;
        let w = C64::new(math::sqrt(1.0 / channels.len() as f64), 0.0);
        let mut kraus = Vec::new();
        for ch in channels {
            if ch.input.dims() != first.input.dims() || ch.output.dims() != first.output.dims() {
                return Err(Error::Invalid("channels have different signatures".into()));
            }
            kraus.extend(ch.kraus.iter().map(|k| k * w));
        }
        Self::new(kraus, first.input.clone(), first.output.clone())
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn input(&self) -> &Layout {
        &self.input
    }

    pub fn output(&self) -> &Layout {
        &self.output
    }

    /// Applies the channel to the registers `targets` of `rho`. The output
    /// registers take the place of the first target; labels come from the
    /// channel's output layout.
    pub fn apply(&self, rho: &DensityMatrix, targets: &[&str]) -> Result<DensityMatrix> {
        let (m, l) = self.apply_matrix(rho.matrix(), rho.layout(), targets)?;
        Ok(DensityMatrix::from_parts(m, l))
    }

    pub fn apply_matrix(
        &self,
        m: &ComplexMatrix,
        layout: &Layout,
        targets: &[&str],
    ) -> Result<(ComplexMatrix, Layout)> {
        let target_layout = layout.subset(targets)?;
        if target_layout.dims() != self.input.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.input.total_dim(),
                found: target_layout.total_dim(),
            });
        }
        let rest = layout.complement(targets)?;
        for r in self.output.registers() {
            if rest.contains(&r.label) {
                return Err(Error::DuplicateRegister(r.label.clone()));
            }
        }
        let mut order: Vec<&str> = targets.to_vec();
        order.extend(rest.labels());
        let (front, _) = ops::permute(m, layout, &order)?;

        let (di, d_out, r) = (self.input.total_dim(), self.output.total_dim(), rest.total_dim());
        let mut out: ComplexMatrix = DMatrix::zeros(d_out * r, d_out * r);
        for k in &self.kraus {
            // (K (x) I) rho (K (x) I)^H, blockwise over the rest dimension.
            let mut left: ComplexMatrix = DMatrix::zeros(d_out * r, di * r);
            for a in 0..d_out {
                for i in 0..di {
                    let kai = k[(a, i)];
                    if kai == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for x in 0..r {
                        for col in 0..di * r {
                            left[(a * r + x, col)] += kai * front[(i * r + x, col)];
                        }
                    }
                }
            }
            for b in 0..d_out {
                for j in 0..di {
                    let kbj = k[(b, j)].conj();
                    if kbj == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for y in 0..r {
                        for row in 0..d_out * r {
                            out[(row, b * r + y)] += left[(row, j * r + y)] * kbj;
                        }
                    }
                }
            }
        }

        let joint = self.output.concat(&rest)?;
        let mut final_order: Vec<String> = Vec::new();
        let mut placed = false;
        for reg in layout.registers() {
            if targets.contains(&reg.label.as_str()) {
                if !placed {
                    final_order.extend(self.output.labels().iter().map(|s| String::from(*s)));
                    placed = true;
                }
            } else {
                final_order.push(reg.label.clone());
            }
        }
        let refs: Vec<&str> = final_order.iter().map(|s| s.as_str()).collect();
        ops::permute(&out, &joint, &refs)
    }
}

/// `X^a Z^b` on a `d`-level system.
fn weyl(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut w = DMatrix::zeros(d, d);
    for j in 0..d {
        let phase = 2.0 * core::f64::consts::PI * (b * j) as f64 / d as f64;
        w[((j + a) % d, j)] = C64::new(math::cos(phase), math::sin(phase));
    }
    w
}

fn pauli(k: usize) -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        1 => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        2 => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// The `4^q` unitary channels `{I, X, Y, Z}^{(x) q}` from register `A` to `B`,
/// ordered lexicographically with the first qubit most significant.
pub fn pauli_channel_family(num_qubits: usize) -> Result<Vec<Channel>> {
    if num_qubits == 0 {
        return Err(Error::Invalid("need at least one qubit".into()));
    }
    let d = 1usize << num_qubits;
    if d > crate::DIM_CAP {
        return Err(Error::Capacity {
            dim: d,
            cap: crate::DIM_CAP,
        });
    }
    let mut out = Vec::with_capacity(d * d);
    for word in 0..d * d {
        let mut u = identity(1);
        for q in 0..num_qubits {
            let k = (word >> (2 * (num_qubits - 1 - q))) & 3;
            u = kron(&u, &pauli(k));
        }
        out.push(Channel::unitary(u, "A", "B")?);
    }
    Ok(out)
}
