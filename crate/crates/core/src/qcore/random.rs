//! Seeded sampling of states, unitaries, projectors and channels.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::channel::Channel;
use super::layout::Layout;
use super::matrix::{ComplexMatrix, ComplexVector, C64};
use super::state::{DensityMatrix, Projector, PureState};
use crate::{math, Error, Result};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * core::f64::consts::FRAC_1_SQRT_2, im * core::f64::consts::FRAC_1_SQRT_2)
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = DMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = normal_c64(rng);
        }
    }
    m
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let qr = gaussian_matrix(rng, d, d).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = math::sqrt(rjj.norm_sqr());
        let phase = if n > 0.0 { rjj / n } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// First `cols` columns of a Haar unitary.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    random_unitary(rng, rows).columns(0, cols).into_owned()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, layout: Layout) -> PureState {
    let d = layout.total_dim();
    let mut v = ComplexVector::from_fn(d, |_, _| normal_c64(rng));
    let n = v.norm();
    v /= C64::new(n, 0.0);
    PureState::new(v, layout).expect("normalized by construction")
}

/// Hilbert-Schmidt random state of the given rank (`G G^H / Tr`, `G` is `d x rank`).
pub fn random_density_matrix_rank<R: Rng + ?Sized>(
    rng: &mut R,
    layout: Layout,
    rank: usize,
) -> Result<DensityMatrix> {
    let d = layout.total_dim();
    if rank == 0 || rank > d {
        return Err(Error::Invalid(alloc::format!("rank {rank} outside 1..={d}")));
    }
    let g = gaussian_matrix(rng, d, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_parts(m / C64::new(tr, 0.0), layout))
}

pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, layout: Layout) -> DensityMatrix {
    let d = layout.total_dim();
    random_density_matrix_rank(rng, layout, d).expect("full rank is valid")
}

pub fn random_projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<Projector> {
    if rank > dim {
        return Err(Error::Invalid(alloc::format!("rank {rank} exceeds dimension {dim}")));
    }
    Ok(Projector::from_orthonormal(&random_isometry(rng, dim, rank)))
}

/// Random channel via a Haar isometry `C^{d_in} -> C^{d_out} (x) C^{num_kraus}`.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    input: Layout,
    output: Layout,
    num_kraus: usize,
) -> Result<Channel> {
    let (di, d_out) = (input.total_dim(), output.total_dim());
    if num_kraus == 0 || d_out * num_kraus < di {
        return Err(Error::Invalid("too few Kraus operators for an isometry".into()));
    }
    let v = random_isometry(rng, d_out * num_kraus, di);
    let kraus: Vec<ComplexMatrix> = (0..num_kraus)
        .map(|k| DMatrix::from_fn(d_out, di, |a, i| v[(a * num_kraus + k, i)]))
        .collect();
    Channel::new(kraus, input, output)
}

/// Uniform point on the probability simplex.
pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>();
            -libm::log(1.0 - u)
        })
        .collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    w
}
