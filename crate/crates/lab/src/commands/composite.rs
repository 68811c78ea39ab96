use std::path::PathBuf;

use qcompound::composite::{
    beta_exact, build_universal_test, epsilon_net, net_size_bound, validate_net, CompositeInstance, NullSource,
};
use qcompound::divergences::StateEnsemble;
use qcompound::qcore::random::{random_density_matrix, rng_from_seed};
use qcompound::qcore::{DensityMatrix, Layout};
use serde_json::json;

use crate::cli::{CompositeArgs, NetArgs};
use crate::config::{in_range, need, open_unit};
use crate::error::{LabError, LabResult};
use crate::matrix_file::{read_matrix, state_from};
use crate::record::{num, nums, Record};

/// Reads the listed files, or draws `count` random qubit states.
fn state_set(
    rec: &mut Record,
    name: &str,
    files: &Option<Vec<PathBuf>>,
    count: Option<usize>,
    seed: Option<u64>,
    stream: u64,
) -> LabResult<StateEnsemble> {
    let states = match (files, count) {
        (Some(paths), _) => {
            let mut out = Vec::with_capacity(paths.len());
            for (k, path) in paths.iter().enumerate() {
                let (file, bytes) = read_matrix(path)?;
                rec.input(&format!("{name}[{k}]"), path, &bytes);
                out.push(state_from(file)?);
            }
            out
        }
        (None, Some(count)) => {
            let seed = seed.ok_or_else(|| LabError::Config(format!("random `{name}` states need `seed`")))?;
            let mut rng = rng_from_seed(seed.wrapping_add(stream));
            let layout = Layout::single("A", 2)?;
            (0..count).map(|_| random_density_matrix(&mut rng, layout.clone())).collect::<Vec<DensityMatrix>>()
        }
        (None, None) => return Err(LabError::Config(format!("missing `{name}` or `{name}-random`"))),
    };
    if states.is_empty() {
        return Err(LabError::Config(format!("`{name}` is empty")));
    }
    Ok(StateEnsemble::new(states)?)
}

pub fn composite(mut a: CompositeArgs) -> LabResult<Record> {
    a.n.get_or_insert(1);
    a.eps.get_or_insert(0.1);
    a.delta.get_or_insert(0.1);
    a.net.get_or_insert(false);
    let mut rec = Record::new("composite", serde_json::to_value(&a).expect("args serialize"));
    let n = need(&a.n, "n")?;
    let eps = open_unit(need(&a.eps, "eps")?, "eps")?;
    let delta = open_unit(need(&a.delta, "delta")?, "delta")?;
    let s1 = state_set(&mut rec, "s1", &a.s1, a.s1_random, a.seed, 0)?;
    let s2 = state_set(&mut rec, "s2", &a.s2, a.s2_random, a.seed, 1)?;
    let inst = CompositeInstance::new(s1, s2, n, eps)?;

    let exact = beta_exact(&inst)?;
    let net = if need(&a.net, "net")? {
        if inst.dim() != 2 {
            return Err(LabError::Config("`net` needs qubit states".into()));
        }
        Some(epsilon_net(2, delta * delta / n as f64)?)
    } else {
        None
    };
    let source = net.as_ref().map_or(NullSource::Exact, NullSource::Net);
    let uni = build_universal_test(&inst, delta, source)?;

    rec.check(
        "universal_type1",
        uni.type1_bound_holds(eps),
        format!("max Type 1 error {:.6} vs eps + 2 delta = {:.6}", uni.test.type1_error, eps + 2.0 * delta),
    );
    rec.check(
        "universal_type2",
        uni.type2_bound_holds(),
        format!("exponent {:.6} vs min beta_bar - penalty", uni.value),
    );
    rec.check(
        "below_optimum",
        uni.value <= exact.value + exact.gap.abs() + 1e-6,
        format!("universal {:.6} vs optimal {:.6}", uni.value, exact.value),
    );
    rec.results = json!({
        "dim": inst.dim(),
        "total_dim": inst.total_dim(),
        "beta_exact": num(exact.value),
        "beta_exact_gap": num(exact.gap),
        "beta_exact_type1": nums(&exact.type1),
        "beta_exact_type2": nums(&exact.type2),
        "net_points": net.as_ref().map(|net| net.len()),
        "reduced_set_size": uni.reduced_set.len(),
        "assignment": uni.assignment,
        "beta_bar": nums(&uni.beta_bar),
        "union_delta": num(uni.union_delta),
        "penalty": num(uni.penalty),
        "universal_value": num(uni.value),
        "universal_type1": nums(&uni.type1),
        "universal_type2": nums(&uni.type2),
    });
    Ok(rec)
}

pub fn net_validate(mut a: NetArgs) -> LabResult<Record> {
    a.n.get_or_insert(1);
    a.delta.get_or_insert(0.3);
    a.samples.get_or_insert(10_000);
    let mut rec = Record::new("net-validate", serde_json::to_value(&a).expect("args serialize"));
    let n = in_range(need(&a.n, "n")?, 1, 64, "n")?;
    let delta = open_unit(need(&a.delta, "delta")?, "delta")?;
    let deficit = a.deficit.unwrap_or(delta * delta / n as f64);
    let samples = in_range(need(&a.samples, "samples")?, 1, 10_000_000, "samples")?;
    let seed = need(&a.seed, "seed")?;
    let net = epsilon_net(2, deficit)?;
    let v = validate_net(&net, samples, seed);
    let bound = net_size_bound(2, n, delta);
    rec.check(
        "covering",
        v.passes,
        format!("worst 1 - F^2 over {} samples = {:.3e} vs {deficit:.3e}", v.samples, v.worst_deficit),
    );
    rec.check("size_bound", (net.len() as f64) <= bound, format!("{} points vs bound {bound:.3e}", net.len()));
    rec.results = json!({
        "deficit": num(deficit),
        "points": net.len(),
        "spacing": num(net.spacing()),
        "calibration_worst": num(net.calibration_worst()),
        "samples": v.samples,
        "worst_deficit": num(v.worst_deficit),
        "size_bound": num(bound),
    });
    Ok(rec)
}
