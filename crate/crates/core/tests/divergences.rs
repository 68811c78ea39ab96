use proptest::prelude::*;
use qcompound::divergences::{
    d_h_hull, d_max, hypothesis_test_divergence, i_h, i_h_hat, i_h_tilde, i_max,
    relative_entropy, relative_entropy_variance, StateEnsemble,
};
use qcompound::qcore::random::{random_density_matrix, random_unitary, rng_from_seed, random_weights};
use qcompound::qcore::{
    c64, hermitian_eig, kron, max_abs, trace_product, ComplexMatrix, DensityMatrix, Layout, PureState,
};
use qcompound::{ATOL, TOL_OPT};
use rand::Rng;

fn single(d: usize) -> Layout {
    Layout::single("A", d).unwrap()
}

fn two_qubits() -> Layout {
    Layout::new([("A", 2), ("B", 2)]).unwrap()
}

fn diag_state(p: &[f64]) -> DensityMatrix {
    let n = p.len();
    let m = ComplexMatrix::from_fn(n, n, |i, j| if i == j { c64(p[i], 0.0) } else { c64(0.0, 0.0) });
    DensityMatrix::new(m, single(n)).unwrap()
}

fn probability(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.01).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

/// `U diag(p) U^dagger` for a common `U`.
fn rotated(u: &ComplexMatrix, p: &[f64]) -> DensityMatrix {
    let n = p.len();
    let d = ComplexMatrix::from_fn(n, n, |i, j| if i == j { c64(p[i], 0.0) } else { c64(0.0, 0.0) });
    DensityMatrix::new(u * d * u.adjoint(), single(n)).unwrap()
}

/// Classical Neyman-Pearson LP `max -log sum m_i q_i` s.t. `sum m_i p_i >= 1-eps`,
/// `0 <= m <= 1`, solved by filling outcomes in decreasing likelihood ratio.
fn classical_np(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    let ratio = |i: usize| if q[i] == 0.0 { f64::INFINITY } else { p[i] / q[i] };
    idx.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)));
    let (mut need, mut cost) = (1.0 - eps, 0.0);
    for i in idx {
        if need <= 0.0 {
            break;
        }
        let take = if p[i] <= need { 1.0 } else { need / p[i] };
        need -= take * p[i];
        cost += take * q[i];
    }
    -cost.log2()
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).log2()).sum()
}

fn log_ratio_variance(p: &[f64], q: &[f64]) -> f64 {
    let d = kl(p, q);
    p.iter()
        .zip(q)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b)| a * ((a / b).log2() - d).powi(2))
        .sum()
}

fn bloch(x: f64, y: f64, z: f64) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[c64(0.5 * (1.0 + z), 0.0), c64(0.5 * x, -0.5 * y), c64(0.5 * x, 0.5 * y), c64(0.5 * (1.0 - z), 0.0)],
    )
}

#[test]
fn relative_entropy_examples_and_classical_oracle() {
    let mut rng = rng_from_seed(1);
    let rho = random_density_matrix(&mut rng, single(3));
    assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-10);
    let zero = diag_state(&[1.0, 0.0]);
    let mixed = diag_state(&[0.5, 0.5]);
    assert!((relative_entropy(&zero, &mixed).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(relative_entropy(&mixed, &zero).unwrap(), f64::INFINITY);
    for _ in 0..20 {
        let u = random_unitary(&mut rng, 2);
        let (p, q) = (probability(&mut rng, 2), probability(&mut rng, 2));
        let v = relative_entropy(&rotated(&u, &p), &rotated(&u, &q)).unwrap();
        assert!((v - kl(&p, &q)).abs() < 1e-10);
    }
}

#[test]
fn variance_examples_and_classical_oracle() {
    let mut rng = rng_from_seed(2);
    let rho = random_density_matrix(&mut rng, single(3));
    assert!(relative_entropy_variance(&rho, &rho).unwrap().abs() < 1e-10);
    let v = relative_entropy_variance(&diag_state(&[1.0, 0.0]), &diag_state(&[0.5, 0.5])).unwrap();
    assert!(v.abs() < 1e-12);
    for _ in 0..20 {
        let u = random_unitary(&mut rng, 3);
        let (p, q) = (probability(&mut rng, 3), probability(&mut rng, 3));
        let v = relative_entropy_variance(&rotated(&u, &p), &rotated(&u, &q)).unwrap();
        assert!((v - log_ratio_variance(&p, &q)).abs() < 1e-9);
        assert!(v >= -ATOL);
    }
}

#[test]
fn d_max_examples_and_generalized_eigenvalue_oracle() {
    let mut rng = rng_from_seed(3);
    let rho = random_density_matrix(&mut rng, single(3));
    assert!(d_max(&rho, &rho).unwrap().value.abs() < 1e-10);
    let bell = PureState::maximally_entangled(2, "A", "B").unwrap().density();
    assert!((i_max(&bell).unwrap().value - 2.0).abs() < 1e-10);
    let prod = random_density_matrix(&mut rng, single(2))
        .tensor(&random_density_matrix(&mut rng, Layout::single("B", 2).unwrap()))
        .unwrap();
    assert!(i_max(&prod).unwrap().value.abs() < 1e-10);
    for d in 2..6 {
        let r = random_density_matrix(&mut rng, single(d));
        let s = random_density_matrix(&mut rng, single(d));
        let k = d_max(&r, &s).unwrap().value;
        let inv_sqrt = hermitian_eig(s.matrix()).unwrap().map(|v| 1.0 / v.sqrt());
        let lmax = hermitian_eig(&(&inv_sqrt * r.matrix() * &inv_sqrt)).unwrap().max();
        assert!((k - lmax.log2()).abs() < 1e-9);
        let gap = |k: f64| hermitian_eig(&(s.matrix() * c64(k.exp2(), 0.0) - r.matrix())).unwrap().min();
        assert!(gap(k) >= -ATOL);
        assert!(gap(k - 0.01) < 0.0);
    }
    assert_eq!(d_max(&diag_state(&[0.5, 0.5]), &diag_state(&[1.0, 0.0])).unwrap().value, f64::INFINITY);
}

#[test]
fn i_max_is_d_max_against_marginals() {
    let mut rng = rng_from_seed(4);
    for _ in 0..10 {
        let rho = random_density_matrix(&mut rng, two_qubits());
        let marg = rho.partial_trace(&["A"]).unwrap().tensor(&rho.partial_trace(&["B"]).unwrap()).unwrap();
        assert!((i_max(&rho).unwrap().value - d_max(&rho, &marg).unwrap().value).abs() < 1e-12);
    }
}

#[test]
fn d_h_examples() {
    let mut rng = rng_from_seed(5);
    let rho = random_density_matrix(&mut rng, single(3));
    let r = hypothesis_test_divergence(&rho, &rho, 0.25).unwrap();
    assert!((r.value + 0.75f64.log2()).abs() < 1e-8);
    let r = hypothesis_test_divergence(&diag_state(&[1.0, 0.0]), &diag_state(&[0.5, 0.5]), 0.5).unwrap();
    assert!((r.value - 2.0).abs() < 1e-8);
    let expect = ComplexMatrix::from_fn(2, 2, |i, j| c64(if i == 0 && j == 0 { 0.5 } else { 0.0 }, 0.0));
    assert!(max_abs(&(r.test.matrix - expect)) < 1e-8);
    assert!(hypothesis_test_divergence(&rho, &rho, 0.0).is_err());
    assert!(hypothesis_test_divergence(&rho, &rho, 1.0).is_err());
}

#[test]
fn d_h_matches_classical_lp_on_commuting_pairs() {
    let mut rng = rng_from_seed(6);
    for k in 0..100 {
        let d = 2 + k % 7;
        let u = random_unitary(&mut rng, d);
        let (p, q) = (probability(&mut rng, d), probability(&mut rng, d));
        let eps = [0.05, 0.1, 0.3, 0.6][k % 4];
        let r = hypothesis_test_divergence(&rotated(&u, &p), &rotated(&u, &q), eps).unwrap();
        assert!((r.value - classical_np(&p, &q, eps)).abs() < 1e-8, "{k}");
    }
}

/// Best `-log Tr[M sigma]` over tests `c |v><v|` or `|v><v| + c |v'><v'|`
/// with `Tr[M rho] = 1 - eps`, `v` on a `steps x steps` grid of the Bloch
/// sphere in the window `[t0, t1] x [p0, p1]`.
fn qubit_test_family(rho: &ComplexMatrix, sigma: &ComplexMatrix, eps: f64, window: [f64; 4], steps: usize) -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..steps {
        for j in 0..steps {
            let th = window[0] + (window[1] - window[0]) * i as f64 / (steps - 1) as f64;
            let ph = window[2] + (window[3] - window[2]) * j as f64 / (steps - 1) as f64;
            let p = bloch(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
            let q = ComplexMatrix::identity(2, 2) - &p;
            let (rp, rq) = (trace_product(&p, rho).re, trace_product(&q, rho).re);
            let m = if rp >= 1.0 - eps {
                &p * c64((1.0 - eps) / rp, 0.0)
            } else {
                &p + &q * c64((1.0 - eps - rp) / rq, 0.0)
            };
            let v = -trace_product(&m, sigma).re.log2();
            if v > best.0 {
                best = (v, th, ph);
            }
        }
    }
    best
}

#[test]
fn d_h_on_qubits_against_parameterized_tests() {
    let mut rng = rng_from_seed(7);
    for _ in 0..5 {
        let rho = random_density_matrix(&mut rng, single(2));
        let sigma = random_density_matrix(&mut rng, single(2));
        let eps = 0.1;
        let r = hypothesis_test_divergence(&rho, &sigma, eps).unwrap();
        let m = &r.test.matrix;
        let e = hermitian_eig(m).unwrap();
        assert!(e.min() >= -ATOL && e.max() <= 1.0 + ATOL);
        assert!(trace_product(m, rho.matrix()).re >= 1.0 - eps - ATOL);
        let pi = std::f64::consts::PI;
        let (coarse, th, ph) = qubit_test_family(rho.matrix(), sigma.matrix(), eps, [0.0, pi, 0.0, 2.0 * pi], 100);
        // Optima with a projector test lie on the ridge Tr[P rho] = 1 - eps,
        // so refine by recentering until the window stops moving.
        let (mut best, mut th, mut ph) = (coarse, th, ph);
        let mut h = 2.0 * pi / 99.0;
        while h > 1e-7 {
            let (v, t, p) = qubit_test_family(rho.matrix(), sigma.matrix(), eps, [th - h, th + h, ph - h, ph + h], 21);
            if v > best + 1e-15 {
                (best, th, ph) = (v, t, p);
            } else {
                h /= 2.0;
            }
        }
        assert!(r.value >= best - 1e-9);
        assert!(r.value - best < 1e-4, "{} vs {}", r.value, best);
    }
}

#[test]
fn neyman_pearson_test_commutes_with_threshold_operator() {
    let mut rng = rng_from_seed(8);
    for d in 2..7 {
        let rho = random_density_matrix(&mut rng, single(d));
        let sigma = random_density_matrix(&mut rng, single(d));
        let r = hypothesis_test_divergence(&rho, &sigma, 0.2).unwrap();
        let x = rho.matrix() - sigma.matrix() * c64(r.threshold, 0.0);
        let comm = &r.test.matrix * &x - &x * &r.test.matrix;
        assert!(max_abs(&comm) < ATOL);
        assert!((r.test.type1_error - (1.0 - trace_product(&r.test.matrix, rho.matrix()).re)).abs() < ATOL);
        assert!((r.value + trace_product(&r.test.matrix, sigma.matrix()).re.log2()).abs() < 1e-12);
    }
}

#[test]
fn i_h_product_and_maximally_entangled() {
    let mut rng = rng_from_seed(9);
    let a = random_density_matrix(&mut rng, single(2));
    let b = random_density_matrix(&mut rng, Layout::single("B", 2).unwrap());
    let prod = a.tensor(&b).unwrap();
    for eps in [0.1, 0.3] {
        let v = i_h(&prod, eps).unwrap().value;
        assert!((v + (1.0 - eps).log2()).abs() < TOL_OPT, "{v}");
    }
    // The test (1-eps)|Phi><Phi| meets every sigma_A (x) I/2 with Type 2 error
    // (1-eps)/4, and sigma_A = I/2 makes it optimal.
    let bell = PureState::maximally_entangled(2, "A", "B").unwrap().density();
    for eps in [0.05, 0.1, 0.25] {
        let sol = i_h(&bell, eps).unwrap();
        assert!((sol.value - (2.0 - (1.0 - eps).log2())).abs() < 1e-6);
        assert!(sol.test.type1_error <= eps + ATOL);
    }
}

/// `-log` of the best Type 2 error against `sigma_A (x) rho_B` is convex in
/// `sigma_A`; minimize it on a Bloch-ball grid of spacing 0.1, then by a
/// shrinking pattern search.
fn i_h_grid_oracle(rho: &DensityMatrix, eps: f64) -> f64 {
    let rho_b = rho.partial_trace(&["B"]).unwrap();
    let value = |p: [f64; 3]| {
        if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] > 1.0 {
            return f64::INFINITY;
        }
        let sigma = DensityMatrix::new(kron(&bloch(p[0], p[1], p[2]), rho_b.matrix()), two_qubits()).unwrap();
        hypothesis_test_divergence(rho, &sigma, eps).unwrap().value
    };
    let mut center = [0.0; 3];
    let mut best = value(center);
    for i in -10i32..=10 {
        for j in -10i32..=10 {
            for k in -10i32..=10 {
                let p = [0.1 * i as f64, 0.1 * j as f64, 0.1 * k as f64];
                let v = value(p);
                if v < best {
                    (best, center) = (v, p);
                }
            }
        }
    }
    let mut h = 0.05;
    while h > 1e-7 {
        let mut moved = false;
        for i in -2i32..=2 {
            for j in -2i32..=2 {
                for k in -2i32..=2 {
                    let p = [center[0] + h * i as f64, center[1] + h * j as f64, center[2] + h * k as f64];
                    let v = value(p);
                    if v < best - 1e-15 {
                        (best, center, moved) = (v, p, true);
                    }
                }
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    best
}

#[test]
fn i_h_matches_bloch_grid_oracle() {
    let mut rng = rng_from_seed(10);
    for _ in 0..3 {
        let rho = random_density_matrix(&mut rng, two_qubits());
        let sol = i_h(&rho, 0.1).unwrap();
        let grid = i_h_grid_oracle(&rho, 0.1);
        assert!(sol.value <= grid + 1e-6, "{} {}", sol.value, grid);
        assert!(grid - sol.value <= TOL_OPT * sol.value.abs().max(1.0), "{} {}", sol.value, grid);
        // The returned test meets every sigma_A (x) rho_B at 2^-value (1 + tol_opt).
        let rho_b = rho.partial_trace(&["B"]).unwrap();
        for _ in 0..200 {
            let s = random_density_matrix(&mut rng, single(2));
            let t2 = trace_product(&sol.test.matrix, &kron(s.matrix(), rho_b.matrix())).re;
            assert!(t2 <= (-sol.value).exp2() * (1.0 + TOL_OPT));
        }
    }
}

#[test]
fn i_h_tilde_reductions() {
    let mut rng = rng_from_seed(11);
    let a = random_density_matrix(&mut rng, single(2));
    let b = random_density_matrix(&mut rng, Layout::single("B", 2).unwrap());
    let prod = a.tensor(&b).unwrap();
    let ens = StateEnsemble::new(vec![a.clone()]).unwrap();
    let v = i_h_tilde(&prod, &b, &ens, 0.2).unwrap().value;
    assert!((v + 0.8f64.log2()).abs() < 1e-6);

    // Bell state against I/2 (x) I/2: the alternative is I/4, which commutes
    // with everything, so the LP in the eigenbasis of the Bell state decides it.
    let bell = PureState::maximally_entangled(2, "A", "B").unwrap().density();
    let half = DensityMatrix::maximally_mixed(Layout::single("B", 2).unwrap());
    let ens = StateEnsemble::new(vec![DensityMatrix::maximally_mixed(single(2))]).unwrap();
    for eps in [0.05, 0.1, 0.25] {
        let v = i_h_tilde(&bell, &half, &ens, eps).unwrap().value;
        let lp = classical_np(&[1.0, 0.0, 0.0, 0.0], &[0.25; 4], eps);
        assert!((v - lp).abs() < 1e-6);
    }
}

#[test]
fn i_h_tilde_on_a_dense_net_approaches_i_h() {
    let mut rng = rng_from_seed(12);
    let rho = random_density_matrix(&mut rng, two_qubits());
    let rho_b = rho.partial_trace(&["B"]).unwrap();
    let mut pts = Vec::new();
    for i in 0..12 {
        for j in 0..24 {
            let (th, ph) = (std::f64::consts::PI * i as f64 / 11.0, std::f64::consts::PI * j as f64 / 12.0);
            pts.push(DensityMatrix::new(bloch(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()), single(2)).unwrap());
        }
    }
    let ens = StateEnsemble::new(pts).unwrap();
    let tilde = i_h_tilde(&rho, &rho_b, &ens, 0.1).unwrap();
    let full = i_h(&rho, 0.1).unwrap();
    assert!(tilde.value >= full.value - 1e-6);
    assert!(tilde.value - full.value < 0.02, "{} {}", tilde.value, full.value);
    for v in ens.states() {
        let t2 = trace_product(&tilde.test.matrix, &kron(v.matrix(), rho_b.matrix())).re;
        assert!(t2 <= (-tilde.value).exp2() * (1.0 + TOL_OPT));
    }
}

#[test]
fn i_h_hat_singletons_and_monotonicity() {
    let mut rng = rng_from_seed(13);
    let rho = random_density_matrix(&mut rng, two_qubits());
    let tau = random_density_matrix(&mut rng, single(2));
    let sigma = random_density_matrix(&mut rng, Layout::single("B", 2).unwrap());
    let nested = i_h_hat(
        &rho,
        &StateEnsemble::new(vec![tau.clone()]).unwrap(),
        &StateEnsemble::new(vec![sigma.clone()]).unwrap(),
        0.1,
    )
    .unwrap();
    let alt = tau.tensor(&sigma).unwrap();
    let direct = hypothesis_test_divergence(&rho, &alt, 0.1).unwrap().value;
    assert!((nested.best.value - direct).abs() < 1e-6);

    // With the I_H minimizer and rho_B available, the doubly restricted value
    // can only be smaller.
    let sol = i_h(&rho, 0.1).unwrap();
    let star = DensityMatrix::new(sol.dual_state.clone(), single(2)).unwrap();
    let rho_b = rho.partial_trace(&["B"]).unwrap();
    let nested = i_h_hat(
        &rho,
        &StateEnsemble::new(vec![star, tau]).unwrap(),
        &StateEnsemble::new(vec![rho_b, sigma]).unwrap(),
        0.1,
    )
    .unwrap();
    assert!(nested.best.value <= sol.value + TOL_OPT);
}

#[test]
fn i_h_hat_matches_nested_grid_oracle() {
    let mut rng = rng_from_seed(14);
    for _ in 0..2 {
        let rho = random_density_matrix(&mut rng, two_qubits());
        let ta: Vec<_> = (0..2).map(|_| random_density_matrix(&mut rng, single(2))).collect();
        let sb: Vec<_> = (0..2).map(|_| random_density_matrix(&mut rng, Layout::single("B", 2).unwrap())).collect();
        let eps = 0.1;
        let value = |a: f64, b: f64| {
            let t = ta[0].matrix() * c64(a, 0.0) + ta[1].matrix() * c64(1.0 - a, 0.0);
            let s = sb[0].matrix() * c64(b, 0.0) + sb[1].matrix() * c64(1.0 - b, 0.0);
            let alt = DensityMatrix::new(kron(&t, &s), two_qubits()).unwrap();
            hypothesis_test_divergence(&rho, &alt, eps).unwrap().value
        };
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=100 {
            for j in 0..=100 {
                let (a, b) = (i as f64 / 100.0, j as f64 / 100.0);
                let v = value(a, b);
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        let mut h = 0.01;
        while h > 1e-6 {
            let (_, a0, b0) = best;
            for i in -10..=10 {
                for j in -10..=10 {
                    let (a, b) = (a0 + h * i as f64 / 10.0, b0 + h * j as f64 / 10.0);
                    if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) {
                        let v = value(a, b);
                        if v < best.0 {
                            best = (v, a, b);
                        }
                    }
                }
            }
            h /= 5.0;
        }
        let sol = i_h_hat(
            &rho,
            &StateEnsemble::new(ta.clone()).unwrap(),
            &StateEnsemble::new(sb.clone()).unwrap(),
            eps,
        )
        .unwrap();
        assert!((sol.best.value - best.0).abs() < 1e-4, "{} {}", sol.best.value, best.0);
    }
}

#[test]
fn d_h_hull_vertex_sufficiency() {
    let mut rng = rng_from_seed(15);
    let rho = random_density_matrix(&mut rng, single(3));
    let verts: Vec<ComplexMatrix> = (0..3).map(|_| random_density_matrix(&mut rng, single(3)).into_matrix()).collect();
    let sol = d_h_hull(&rho, &verts, 0.1).unwrap();
    let worst = verts
        .iter()
        .map(|v| trace_product(&sol.test.matrix, v).re)
        .fold(0.0, f64::max);
    for _ in 0..100 {
        let w = random_weights(&mut rng, 3);
        let mix = verts.iter().zip(&w).fold(ComplexMatrix::zeros(3, 3), |acc, (v, &x)| acc + v * c64(x, 0.0));
        assert!(trace_product(&sol.test.matrix, &mix).re <= worst + 1e-12);
    }
    assert!((worst - sol.test.type2_bound).abs() < 1e-9);
    // The hull value is never above the value against any single vertex.
    for v in &verts {
        let alt = DensityMatrix::new(v.clone(), single(3)).unwrap();
        assert!(sol.value <= hypothesis_test_divergence(&rho, &alt, 0.1).unwrap().value + TOL_OPT);
    }
}

#[test]
fn fact_shift_under_operator_domination() {
    let mut rng = rng_from_seed(16);
    for k in 0..50 {
        let d = 2 + k % 3;
        let rho = random_density_matrix(&mut rng, single(d));
        let sigma = random_density_matrix(&mut rng, single(d));
        let gamma = 0.1 + rng.random::<f64>();
        let tau_m = (sigma.matrix() + ComplexMatrix::identity(d, d) * c64(gamma / d as f64, 0.0)) * c64(1.0 / (1.0 + gamma), 0.0);
        let tau = DensityMatrix::new(tau_m, single(d)).unwrap();
        let kk = (1.0 + gamma).log2();
        let lhs = hypothesis_test_divergence(&rho, &sigma, 0.1).unwrap().value;
        let rhs = hypothesis_test_divergence(&rho, &tau, 0.1).unwrap().value - kk;
        assert!(lhs >= rhs - TOL_OPT);
    }
}

#[test]
fn fact_product_alternatives_are_worse() {
    let mut rng = rng_from_seed(17);
    for _ in 0..50 {
        let rho = random_density_matrix(&mut rng, two_qubits());
        let tau = random_density_matrix(&mut rng, single(2));
        let sigma = random_density_matrix(&mut rng, Layout::single("B", 2).unwrap());
        let marg = rho.partial_trace(&["A"]).unwrap().tensor(&rho.partial_trace(&["B"]).unwrap()).unwrap();
        let lhs = relative_entropy(&rho, &tau.tensor(&sigma).unwrap()).unwrap();
        assert!(lhs >= relative_entropy(&rho, &marg).unwrap() - ATOL);
    }
}

#[test]
fn variance_bound_fails_on_a_classical_pair() {
    // rho <= 2^k sigma with k = D_max does not give V <= k^2 here.
    let rho = diag_state(&[0.9, 0.1]);
    let sigma = diag_state(&[0.5, 0.5]);
    let k = d_max(&rho, &sigma).unwrap().value;
    let v = relative_entropy_variance(&rho, &sigma).unwrap();
    assert!((k - 1.8f64.log2()).abs() < 1e-10);
    assert!((v - log_ratio_variance(&[0.9, 0.1], &[0.5, 0.5])).abs() < 1e-12);
    assert!(v > k * k);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_h_is_monotone_in_eps(seed in any::<u64>(), d in 2usize..5, e1 in 0.01f64..0.9, de in 0.0f64..0.09) {
        let mut rng = rng_from_seed(seed);
        let rho = random_density_matrix(&mut rng, single(d));
        let sigma = random_density_matrix(&mut rng, single(d));
        let a = hypothesis_test_divergence(&rho, &sigma, e1).unwrap().value;
        let b = hypothesis_test_divergence(&rho, &sigma, e1 + de).unwrap().value;
        prop_assert!(a <= b + 1e-8);
    }

    #[test]
    fn d_h_test_is_feasible(seed in any::<u64>(), d in 1usize..7, eps in 0.01f64..0.99) {
        let mut rng = rng_from_seed(seed);
        let rho = random_density_matrix(&mut rng, single(d));
        let sigma = random_density_matrix(&mut rng, single(d));
        let r = hypothesis_test_divergence(&rho, &sigma, eps).unwrap();
        let e = hermitian_eig(&r.test.matrix).unwrap();
        prop_assert!(e.min() >= -ATOL && e.max() <= 1.0 + ATOL);
        prop_assert!(r.test.type1_error <= eps + ATOL);
        prop_assert!(r.value >= -(1.0 - eps).log2() - 1e-9 || d == 1);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = rng_from_seed(seed);
        let rho = random_density_matrix(&mut rng, single(d));
        let sigma = random_density_matrix(&mut rng, single(d));
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -ATOL);
    }
}

