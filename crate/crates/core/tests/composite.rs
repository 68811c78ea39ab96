use qcompound::composite::{
    beta_bar, beta_exact, build_universal_test, epsilon_net, net_size_bound, universal_penalty,
    validate_net, CompositeInstance, NullSource,
};
use qcompound::divergences::{fidelity, hypothesis_test_divergence, StateEnsemble};
use qcompound::qcore::random::{random_density_matrix, random_pure_state, random_weights, rng_from_seed};
use qcompound::qcore::{c64, hermitian_eig, max_abs, tensor_power, trace_product, ComplexMatrix, DensityMatrix, Layout};
use qcompound::{Error, ATOL, TOL_OPT};
use rand::Rng;

fn qubit() -> Layout {
    Layout::single("A", 2).unwrap()
}

fn state(m: ComplexMatrix) -> DensityMatrix {
    let d = m.nrows();
    DensityMatrix::new(m, Layout::single("A", d).unwrap()).unwrap()
}

fn diag(p: &[f64]) -> DensityMatrix {
    let n = p.len();
    state(ComplexMatrix::from_fn(n, n, |i, j| if i == j { c64(p[i], 0.0) } else { c64(0.0, 0.0) }))
}

fn plus() -> DensityMatrix {
    state(ComplexMatrix::from_element(2, 2, c64(0.5, 0.0)))
}

fn ens(states: Vec<DensityMatrix>) -> StateEnsemble {
    StateEnsemble::new(states).unwrap()
}

fn product_dist(p: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..n {
        out = out.iter().flat_map(|a| p.iter().map(move |b| a * b)).collect();
    }
    out
}

/// `max -log q.m` over `0 <= m <= 1` with `p_j.m >= target` for every `j`, by
/// enumerating basic solutions (at most one free coordinate per constraint).
fn classical_multi_null_lp(nulls: &[Vec<f64>], q: &[f64], target: f64) -> f64 {
    let d = q.len();
    let k = nulls.len();
    let mut best = f64::INFINITY;
    let total = 3usize.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        let mut fixed = vec![0.0; d];
        let mut free = Vec::new();
        for (i, f) in fixed.iter_mut().enumerate() {
            match c % 3 {
                0 => *f = 0.0,
                1 => *f = 1.0,
                _ => free.push(i),
            }
            c /= 3;
        }
        if free.len() > k {
            continue;
        }
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        if free.is_empty() {
            candidates.push(fixed.clone());
        } else {
            // Make every subset of constraints of size |free| active.
            for mask in 0..(1usize << k) {
                let active: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 1).collect();
                if active.len() != free.len() {
                    continue;
                }
                let n = free.len();
                let a = nalgebra::DMatrix::from_fn(n, n, |r, s| nulls[active[r]][free[s]]);
                let b = nalgebra::DVector::from_fn(n, |r, _| {
                    target - (0..d).filter(|i| !free.contains(i)).map(|i| nulls[active[r]][i] * fixed[i]).sum::<f64>()
                });
                if let Some(x) = a.lu().solve(&b) {
                    let mut m = fixed.clone();
                    for (s, &i) in free.iter().enumerate() {
                        m[i] = x[s];
                    }
                    candidates.push(m);
                }
            }
        }
        for m in candidates {
            if m.iter().any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&x)) {
                continue;
            }
            if nulls.iter().any(|p| p.iter().zip(&m).map(|(a, b)| a * b).sum::<f64>() < target - 1e-12) {
                continue;
            }
            best = best.min(q.iter().zip(&m).map(|(a, b)| a * b).sum());
        }
    }
    -best.log2()
}

/// Classical Neyman-Pearson value by filling outcomes in ratio order.
fn classical_np(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| (p[b] / q[b]).total_cmp(&(p[a] / q[a])));
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

#[test]
fn basis_state_against_maximally_mixed() {
    for eps in [0.05, 0.2, 0.4] {
        let inst = CompositeInstance::new(ens(vec![diag(&[1.0, 0.0])]), ens(vec![diag(&[0.5, 0.5])]), 1, eps).unwrap();
        let b = beta_exact(&inst).unwrap();
        let lp = classical_multi_null_lp(&[vec![1.0, 0.0]], &[0.5, 0.5], 1.0 - eps);
        assert!((lp + ((1.0 - eps) / 2.0).log2()).abs() < 1e-12);
        assert!((b.value - lp).abs() < 1e-6, "{} {}", b.value, lp);
        assert!(b.type1[0] <= eps + ATOL);
    }
}

#[test]
fn identical_sets_give_the_trivial_value() {
    let mut rng = rng_from_seed(1);
    let rho = random_density_matrix(&mut rng, qubit());
    let inst = CompositeInstance::new(ens(vec![rho.clone()]), ens(vec![rho]), 2, 0.1).unwrap();
    let b = beta_exact(&inst).unwrap();
    assert!((b.value + 0.9f64.log2()).abs() < 1e-6);
}

#[test]
fn singletons_reduce_to_neyman_pearson() {
    let mut rng = rng_from_seed(2);
    for n in 1..=3 {
        let rho = random_density_matrix(&mut rng, qubit());
        let sigma = random_density_matrix(&mut rng, qubit());
        let inst = CompositeInstance::new(ens(vec![rho.clone()]), ens(vec![sigma.clone()]), n, 0.15).unwrap();
        let b = beta_exact(&inst).unwrap();
        let np = hypothesis_test_divergence(&inst.power(&rho).unwrap(), &inst.power(&sigma).unwrap(), 0.15).unwrap();
        assert!((b.value - np.value).abs() < TOL_OPT * np.value.max(1.0), "{} {}", b.value, np.value);
    }
}

#[test]
fn several_classical_nulls_match_vertex_lp() {
    let mut rng = rng_from_seed(3);
    for k in 0..6 {
        let n = 1 + k % 3;
        let d = if n == 3 { 2 } else { 2 + k % 2 };
        let dist = |rng: &mut rand_chacha::ChaCha8Rng| {
            let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 0.05).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect::<Vec<f64>>()
        };
        let nulls: Vec<Vec<f64>> = (0..2 + k % 2).map(|_| dist(&mut rng)).collect();
        let alt = dist(&mut rng);
        let eps = 0.2;
        let inst = CompositeInstance::new(
            ens(nulls.iter().map(|p| diag(p)).collect()),
            ens(vec![diag(&alt)]),
            n,
            eps,
        )
        .unwrap();
        let b = beta_exact(&inst).unwrap();
        let powers: Vec<Vec<f64>> = nulls.iter().map(|p| product_dist(p, n)).collect();
        let lp = classical_multi_null_lp(&powers, &product_dist(&alt, n), 1.0 - eps);
        assert!((b.value - lp).abs() < TOL_OPT * lp.abs().max(1.0), "{k}: {} {}", b.value, lp);
        assert!(b.type1.iter().all(|&e| e <= eps + ATOL));
    }
}

#[test]
fn several_classical_alternatives_match_mixture_grid() {
    // min_m max_j q_j.m equals max_w NP(p, sum w_j q_j); concave in w.
    let p = vec![0.6, 0.3, 0.1];
    let q1 = vec![0.2, 0.3, 0.5];
    let q2 = vec![0.1, 0.6, 0.3];
    let eps = 0.1;
    let inst = CompositeInstance::new(ens(vec![diag(&p)]), ens(vec![diag(&q1), diag(&q2)]), 1, eps).unwrap();
    let b = beta_exact(&inst).unwrap();
    let np_at = |w: f64| {
        let q: Vec<f64> = q1.iter().zip(&q2).map(|(a, b)| w * a + (1.0 - w) * b).collect();
        classical_np(&p, &q, eps)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let (a, c) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if np_at(a) < np_at(c) {
            hi = c;
        } else {
            lo = a;
        }
    }
    let oracle = np_at(0.5 * (lo + hi));
    assert!((b.value - oracle).abs() < TOL_OPT, "{} {}", b.value, oracle);
}

#[test]
fn hull_maximum_sits_at_a_vertex() {
    let mut rng = rng_from_seed(4);
    let s2: Vec<DensityMatrix> = (0..3).map(|_| random_density_matrix(&mut rng, qubit())).collect();
    let inst = CompositeInstance::new(ens(vec![random_density_matrix(&mut rng, qubit())]), ens(s2.clone()), 2, 0.2).unwrap();
    let b = beta_exact(&inst).unwrap();
    let worst = b.type2.iter().copied().fold(0.0, f64::max);
    for _ in 0..200 {
        let w = random_weights(&mut rng, 3);
        let mix = s2
            .iter()
            .zip(&w)
            .fold(ComplexMatrix::zeros(4, 4), |acc, (s, &x)| acc + tensor_power(s.matrix(), 2) * c64(x, 0.0));
        assert!(trace_product(&b.test.matrix, &mix).re <= worst + 1e-12);
    }
}

#[test]
fn beta_is_monotone_in_eps() {
    let mut rng = rng_from_seed(5);
    let s1: Vec<DensityMatrix> = (0..2).map(|_| random_density_matrix(&mut rng, qubit())).collect();
    let s2: Vec<DensityMatrix> = (0..2).map(|_| random_density_matrix(&mut rng, qubit())).collect();
    let mut last = f64::NEG_INFINITY;
    for eps in [0.05, 0.1, 0.2, 0.3, 0.5] {
        let inst = CompositeInstance::new(ens(s1.clone()), ens(s2.clone()), 2, eps).unwrap();
        let v = beta_exact(&inst).unwrap().value;
        assert!(v >= last - TOL_OPT);
        last = v;
    }
}

#[test]
fn single_null_universal_test_is_the_per_state_test() {
    let mut rng = rng_from_seed(6);
    let rho = random_density_matrix(&mut rng, qubit());
    let sigma = random_density_matrix(&mut rng, qubit());
    let inst = CompositeInstance::new(ens(vec![rho.clone()]), ens(vec![sigma]), 2, 0.2).unwrap();
    let u = build_universal_test(&inst, 0.1, NullSource::Exact).unwrap();
    let (value, test) = beta_bar(&inst, &rho, 0.2).unwrap();
    assert!(max_abs(&(&u.test.matrix - &test.matrix)) < 1e-9);
    assert_eq!(u.penalty, 0.0);
    assert!((u.value - value).abs() < 1e-8);
    assert!(u.holds(0.2));
}

#[test]
fn two_orthogonal_nulls_against_maximally_mixed() {
    let inst = CompositeInstance::new(ens(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])]), ens(vec![diag(&[0.5, 0.5])]), 1, 0.2).unwrap();
    let u = build_universal_test(&inst, 0.1, NullSource::Exact).unwrap();
    assert!(u.type1_bound_holds(0.2), "{:?}", u.type1);
    assert!(u.type2_bound_holds(), "{} {:?} {}", u.value, u.beta_bar, u.penalty);
    assert!((u.penalty - universal_penalty(2, 0.1)).abs() < 1e-15);
    let e = hermitian_eig(&u.test.matrix).unwrap();
    assert!(e.min() >= -ATOL && e.max() <= 1.0 + ATOL);
}

#[test]
fn basis_and_plus_nulls_two_copies() {
    let s1 = vec![diag(&[1.0, 0.0]), plus()];
    let inst = CompositeInstance::new(ens(s1), ens(vec![diag(&[0.5, 0.5])]), 2, 0.2).unwrap();
    let delta = 0.1;
    let u = build_universal_test(&inst, delta, NullSource::Exact).unwrap();
    assert!(u.holds(0.2), "{u:?}");
    // L* is feasible at eps + 2 delta, so it cannot beat the optimum there.
    let best = beta_exact(&inst.with_epsilon(0.2 + 2.0 * delta).unwrap()).unwrap();
    assert!(u.value <= best.value + TOL_OPT * best.value.max(1.0));
}

#[test]
fn universal_test_bounds_on_random_instances() {
    let mut rng = rng_from_seed(7);
    for k in 0..10 {
        let n = 1 + k % 2;
        let s1: Vec<DensityMatrix> = (0..1 + k % 3).map(|_| random_density_matrix(&mut rng, qubit())).collect();
        let s2: Vec<DensityMatrix> = (0..1 + k % 2).map(|_| random_density_matrix(&mut rng, qubit())).collect();
        let inst = CompositeInstance::new(ens(s1), ens(s2), n, 0.2).unwrap();
        let u = build_universal_test(&inst, 0.1, NullSource::Exact).unwrap();
        assert!(u.type1_bound_holds(0.2), "{k}: {:?}", u.type1);
        assert!(u.type2_bound_holds(), "{k}: {} {:?} {}", u.value, u.beta_bar, u.penalty);
    }
}

#[test]
fn universal_test_through_a_net() {
    let mut rng = rng_from_seed(8);
    let delta = 0.3;
    let n = 1;
    let net = epsilon_net(2, delta * delta / n as f64).unwrap();
    let s1: Vec<DensityMatrix> = (0..3).map(|_| random_pure_state(&mut rng, qubit()).density()).collect();
    let inst = CompositeInstance::new(ens(s1), ens(vec![diag(&[0.5, 0.5])]), n, 0.1).unwrap();
    let u = build_universal_test(&inst, delta, NullSource::Net(&net)).unwrap();
    assert!(u.reduced_set.len() <= 3);
    assert_eq!(u.assignment.len(), 3);
    assert!(u.holds(0.1), "{u:?}");
}

#[test]
fn net_contains_axes_and_center() {
    let net = epsilon_net(2, 0.1).unwrap();
    let h = 0.5;
    let targets = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.5, h, h, 0.5],
        [0.5, -h, -h, 0.5],
        [0.5, 0.5, 0.5, 0.5],
    ];
    let mut wanted: Vec<ComplexMatrix> = targets
        .iter()
        .map(|t| ComplexMatrix::from_row_slice(2, 2, &[c64(t[0], 0.0), c64(t[1], 0.0), c64(t[2], 0.0), c64(t[3], 0.0)]))
        .collect();
    // Y eigenstates.
    wanted.push(ComplexMatrix::from_row_slice(2, 2, &[c64(0.5, 0.0), c64(0.0, -0.5), c64(0.0, 0.5), c64(0.5, 0.0)]));
    wanted.push(ComplexMatrix::from_row_slice(2, 2, &[c64(0.5, 0.0), c64(0.0, 0.5), c64(0.0, -0.5), c64(0.5, 0.0)]));
    wanted[4] = ComplexMatrix::identity(2, 2) * c64(0.5, 0.0);
    for w in &wanted {
        assert!(net.points().iter().any(|p| max_abs(&(p.matrix() - w)) < 1e-12), "{w}");
    }
    assert!(validate_net(&net, 10_000, 99).passes);
    assert!((net.len() as f64) <= net_size_bound(2, 1, 0.1f64.sqrt()));
}

#[test]
fn net_validation_and_size_bound() {
    for (n, delta) in [(1, 0.3), (2, 0.3), (1, 0.2)] {
        let deficit = delta * delta / n as f64;
        let net = epsilon_net(2, deficit).unwrap();
        let v = validate_net(&net, 10_000, 5);
        assert!(v.passes, "{n} {delta}: {}", v.worst_deficit);
        assert!((net.len() as f64) <= net_size_bound(2, n, delta));
    }
}

#[test]
fn nearest_point_deficit_matches_generic_fidelity() {
    let net = epsilon_net(2, 0.05).unwrap();
    let mut rng = rng_from_seed(9);
    for _ in 0..200 {
        let rho = random_density_matrix(&mut rng, qubit());
        let (k, deficit) = net.nearest(&rho).unwrap();
        let f = fidelity(&rho, &net.points()[k]).unwrap();
        // Square roots of the zero eigenvalue of pure net points cost ~sqrt(machine eps).
        assert!((1.0 - f * f - deficit).abs() < 1e-6, "{} {}", 1.0 - f * f, deficit);
        assert!(deficit <= 0.05);
    }
}

#[test]
fn caps_and_parameter_errors() {
    let q = ens(vec![diag(&[0.5, 0.5])]);
    assert!(CompositeInstance::new(q.clone(), q.clone(), 4, 0.1).is_err());
    assert!(CompositeInstance::new(q.clone(), q.clone(), 0, 0.1).is_err());
    assert!(CompositeInstance::new(q.clone(), q.clone(), 1, 1.0).is_err());
    let five = ens((0..5).map(|_| diag(&[0.5, 0.5])).collect());
    assert!(CompositeInstance::new(five, q.clone(), 1, 0.1).is_err());
    let big = ens(vec![diag(&[0.2; 5])]);
    assert!(matches!(
        CompositeInstance::new(big.clone(), big, 3, 0.1),
        Err(Error::Capacity { .. })
    ));
    let inst = CompositeInstance::new(q.clone(), q, 1, 0.1).unwrap();
    assert!(build_universal_test(&inst, 0.0, NullSource::Exact).is_err());
    assert!(epsilon_net(3, 0.1).is_err());
    assert!(epsilon_net(2, 0.5).is_err());
}
