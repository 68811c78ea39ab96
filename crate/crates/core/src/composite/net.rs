use alloc::vec::Vec;

use crate::qcore::random::{random_density_matrix, random_pure_state, rng_from_seed};
use crate::qcore::{c64, ComplexMatrix, DensityMatrix, Layout};
use crate::{math, Error, Result};

const CALIBRATION_SEED: u64 = 0x6e65_7473;
const CALIBRATION_SAMPLES: usize = 2000;
/// Calibration accepts a lattice only if its worst sampled deficit stays
/// below this fraction of the target, leaving room for unseen states.
const CALIBRATION_MARGIN: f64 = 0.8;
const MAX_LATTICE: usize = 64;

/// Finite set of qubit states meant to cover the Bloch ball up to a squared
/// fidelity deficit. The covering is checked on samples, not proved.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonNet {
    points: Vec<DensityMatrix>,
    bloch: Vec<[f64; 3]>,
    deficit: f64,
    spacing: f64,
    calibration_worst: f64,
}

impl EpsilonNet {
    pub fn points(&self) -> &[DensityMatrix] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Target `1 - F^2` with `F` the root fidelity.
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    /// Lattice spacing in Bloch coordinates.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Worst deficit seen on the calibration samples.
    pub fn calibration_worst(&self) -> f64 {
        self.calibration_worst
    }

    /// Index of the point with the largest fidelity to `rho`, and its deficit.
    pub fn nearest(&self, rho: &DensityMatrix) -> Result<(usize, f64)> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho.dim(),
            });
        }
        Ok(nearest_bloch(&self.bloch, &bloch_vector(rho.matrix())))
    }
}

fn bloch_vector(m: &ComplexMatrix) -> [f64; 3] {
    [2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, m[(0, 0)].re - m[(1, 1)].re]
}

fn bloch_state(r: [f64; 3]) -> DensityMatrix {
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c64(0.5 * (1.0 + r[2]), 0.0),
            c64(0.5 * r[0], -0.5 * r[1]),
            c64(0.5 * r[0], 0.5 * r[1]),
            c64(0.5 * (1.0 - r[2]), 0.0),
        ],
    );
    DensityMatrix::from_parts(m, Layout::single("A", 2).expect("valid layout"))
}

/// Squared fidelity of two qubit states from their Bloch vectors.
fn squared_fidelity(r: &[f64; 3], s: &[f64; 3]) -> f64 {
    let dot = r[0] * s[0] + r[1] * s[1] + r[2] * s[2];
    let rr = (1.0 - (r[0] * r[0] + r[1] * r[1] + r[2] * r[2])).max(0.0);
    let ss = (1.0 - (s[0] * s[0] + s[1] * s[1] + s[2] * s[2])).max(0.0);
    0.5 * (1.0 + dot + math::sqrt(rr * ss))
}

fn nearest_bloch(points: &[[f64; 3]], r: &[f64; 3]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (k, p) in points.iter().enumerate() {
        let f = squared_fidelity(p, r);
        if f > best.1 {
            best = (k, f);
        }
    }
    (best.0, 1.0 - best.1)
}

/// Cubic lattice of spacing `1/m` on `[-1, 1]^3`; points outside the ball
/// are moved radially onto the sphere.
fn lattice(m: usize) -> Vec<[f64; 3]> {
    let h = 1.0 / m as f64;
    let mut out: Vec<[f64; 3]> = Vec::new();
    let side = -(m as i64)..=(m as i64);
    for i in side.clone() {
        for j in side.clone() {
            for k in side.clone() {
                let p = [i as f64 * h, j as f64 * h, k as f64 * h];
                let norm = math::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
                let q = if norm > 1.0 { [p[0] / norm, p[1] / norm, p[2] / norm] } else { p };
                let dup = out.iter().any(|o| {
                    math::abs(o[0] - q[0]) < 1e-12 && math::abs(o[1] - q[1]) < 1e-12 && math::abs(o[2] - q[2]) < 1e-12
                });
                if !dup {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// Haar-random pure states followed by Hilbert-Schmidt random mixed states.
fn samples(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = rng_from_seed(seed);
    let layout = Layout::single("A", 2).expect("valid layout");
    (0..count)
        .map(|k| {
            if k % 2 == 0 {
                bloch_vector(random_pure_state(&mut rng, layout.clone()).density().matrix())
            } else {
                bloch_vector(random_density_matrix(&mut rng, layout.clone()).matrix())
            }
        })
        .collect()
}

fn worst_deficit(points: &[[f64; 3]], probes: &[[f64; 3]], stop_above: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for r in probes {
        worst = worst.max(nearest_bloch(points, r).1);
        if worst > stop_above {
            break;
        }
    }
    worst
}

/// Bloch-lattice net for qubits whose spacing is the coarsest `1/m` that
/// covers a fixed calibration sample with squared-fidelity deficit below
/// `deficit`. The lattice always holds the center and the six axis points.
pub fn epsilon_net(dim: usize, deficit: f64) -> Result<EpsilonNet> {
    if dim != 2 {
        return Err(Error::Parameter {
            name: "dim",
            value: dim as f64,
            expected: "2 (qubit nets only)",
        });
    }
    if !(deficit > 0.0 && deficit < 0.5) {
        return Err(Error::Parameter {
            name: "deficit",
            value: deficit,
            expected: "0 < deficit < 0.5",
        });
    }
    let probes = samples(CALIBRATION_SAMPLES, CALIBRATION_SEED);
    let limit = CALIBRATION_MARGIN * deficit;
    for m in 1..=MAX_LATTICE {
        let bloch = lattice(m);
        let worst = worst_deficit(&bloch, &probes, limit);
        if worst <= limit {
            let points = bloch.iter().map(|&r| bloch_state(r)).collect();
            return Ok(EpsilonNet {
                points,
                bloch,
                deficit,
                spacing: 1.0 / m as f64,
                calibration_worst: worst,
            });
        }
    }
    Err(Error::Parameter {
        name: "deficit",
        value: deficit,
        expected: "a deficit reachable with lattice spacing >= 1/64",
    })
}

/// `(2n / delta^2)^dim`, the size allowed for a net of deficit `delta^2 / n`.
pub fn net_size_bound(dim: usize, n: usize, delta: f64) -> f64 {
    math::pow(2.0 * n as f64 / (delta * delta), dim as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetValidation {
    pub samples: usize,
    pub worst_deficit: f64,
    pub passes: bool,
}

/// Worst nearest-point deficit of `net` over fresh random qubit states.
pub fn validate_net(net: &EpsilonNet, samples_count: usize, seed: u64) -> NetValidation {
    let probes = samples(samples_count, seed);
    let worst = worst_deficit(&net.bloch, &probes, f64::INFINITY);
    NetValidation {
        samples: samples_count,
        worst_deficit: worst,
        passes: worst <= net.deficit,
    }
}
