use qcompound::jordan::{jordan_decompose, union_from, union_log_factor, union_many, BlockLabel};
use qcompound::qcore::random::{random_density_matrix_rank, random_projector, rng_from_seed};
use qcompound::qcore::{c64, hermitian_eig, max_abs, trace_product, ComplexMatrix, Layout, Projector};
use serde_json::{json, Value};

use crate::cli::{JordanArgs, UnionStressArgs};
use crate::config::{in_range, need, open_unit};
use crate::error::{LabError, LabResult};
use crate::matrix_file::{projector_from, read_matrix};
use crate::record::{num, Record, CHECK_SLACK};

/// Seed of trial `k`, independent of how many trials run.
fn trial_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn sum(ps: &[Projector]) -> ComplexMatrix {
    let d = ps[0].dim();
    ps.iter().fold(ComplexMatrix::zeros(d, d), |acc, p| acc + p.matrix())
}

pub fn union_stress(mut a: UnionStressArgs) -> LabResult<Record> {
    a.s.get_or_insert(2);
    a.delta.get_or_insert(0.3);
    a.dim.get_or_insert(4);
    a.rank.get_or_insert(1);
    a.trials.get_or_insert(100);
    a.states.get_or_insert(100);
    let mut rec = Record::new("union-stress", serde_json::to_value(&a).expect("args serialize"));
    let s = in_range(need(&a.s, "s")?, 1, 64, "s")?;
    let delta = open_unit(need(&a.delta, "delta")?, "delta")?;
    let dim = in_range(need(&a.dim, "dim")?, 1, 64, "dim")?;
    let rank = in_range(need(&a.rank, "rank")?, 0, dim, "rank")?;
    let trials = in_range(need(&a.trials, "trials")?, 1, 100_000, "trials")?;
    let states = need(&a.states, "states")?;
    let seed = need(&a.seed, "seed")?;

    // Two projectors use the pairwise bounds; more use the merge-tree bounds.
    let (loss, factor) = if s == 2 {
        (delta, 2.0 / (delta * delta))
    } else {
        let l = union_log_factor(s);
        (delta * l, (2.0 / (delta * delta)).powf(l))
    };
    let layout = Layout::single("x", dim)?;
    let mut rows = Vec::with_capacity(trials);
    let (mut worst_capture, mut worst_gap) = (f64::INFINITY, f64::INFINITY);
    for k in 0..trials {
        let mut rng = rng_from_seed(trial_seed(seed, k));
        let ps: Vec<Projector> = (0..s).map(|_| random_projector(&mut rng, dim, rank)).collect::<Result<_, _>>()?;
        let star = union_many(&ps, delta)?;
        let m = star.matrix();
        let mut probes: Vec<ComplexMatrix> = ps
            .iter()
            .filter(|p| p.rank() > 0)
            .map(|p| p.matrix() * c64(1.0 / p.rank() as f64, 0.0))
            .collect();
        for _ in 0..states {
            probes.push(random_density_matrix_rank(&mut rng, layout.clone(), 1)?.into_matrix());
        }
        // Margin of Tr[P* rho] >= max_i Tr[P_i rho] - loss; negative is a violation.
        let capture = probes
            .iter()
            .map(|rho| {
                let best = ps.iter().map(|p| p.expectation(rho)).fold(0.0, f64::max);
                trace_product(m, rho).re - (best - loss)
            })
            .fold(f64::INFINITY, f64::min);
        let gap = hermitian_eig(&(sum(&ps) * c64(factor, 0.0) - m))?.min();
        let projector_err = max_abs(&(m * m - m));
        worst_capture = worst_capture.min(capture);
        worst_gap = worst_gap.min(gap);
        rows.push(json!({
            "trial": k,
            "union_rank": star.rank(),
            "capture_margin": num(capture),
            "min_gap_eigenvalue": num(gap),
            "projector_error": num(projector_err),
            "pass": capture >= -CHECK_SLACK && gap >= -CHECK_SLACK && projector_err <= 1e-9,
        }));
    }
    let failed = rows.iter().filter(|r| r["pass"] == Value::Bool(false)).count();
    rec.check(
        "capture",
        worst_capture >= -CHECK_SLACK,
        format!("Tr[P* rho] >= max_i Tr[P_i rho] - {loss:.6}; worst margin {worst_capture:.3e}"),
    );
    rec.check(
        "operator_bound",
        worst_gap >= -CHECK_SLACK,
        format!("{factor:.6e} * sum P_i - P* >= 0; min eigenvalue {worst_gap:.3e}"),
    );
    rec.check("trials", failed == 0, format!("{failed} of {trials} trials failed"));
    rec.results = json!({
        "loss": num(loss),
        "factor": num(factor),
        "worst_capture_margin": num(worst_capture),
        "worst_gap_eigenvalue": num(worst_gap),
        "trials": rows,
    });
    Ok(rec)
}

pub fn jordan_inspect(mut a: JordanArgs) -> LabResult<Record> {
    a.delta.get_or_insert(0.3);
    let from_files = a.p1.is_some() || a.p2.is_some();
    if !from_files {
        a.dim.get_or_insert(4);
        a.rank1.get_or_insert(2);
        a.rank2.get_or_insert(2);
    }
    let mut rec = Record::new("jordan-inspect", serde_json::to_value(&a).expect("args serialize"));
    let delta = open_unit(need(&a.delta, "delta")?, "delta")?;
    let (p1, p2) = if from_files {
        let mut load = |name: &str, path: &Option<std::path::PathBuf>| -> LabResult<Projector> {
            let path = need(path, name)?;
            let (file, bytes) = read_matrix(&path)?;
            rec.input(name, &path, &bytes);
            projector_from(file)
        };
        (load("p1", &a.p1)?, load("p2", &a.p2)?)
    } else {
        let dim = in_range(need(&a.dim, "dim")?, 1, 256, "dim")?;
        let seed = need(&a.seed, "seed")?;
        let mut rng = rng_from_seed(seed);
        let r1 = in_range(need(&a.rank1, "rank1")?, 0, dim, "rank1")?;
        let r2 = in_range(need(&a.rank2, "rank2")?, 0, dim, "rank2")?;
        (random_projector(&mut rng, dim, r1)?, random_projector(&mut rng, dim, r2)?)
    };
    if p1.dim() != p2.dim() {
        return Err(LabError::Config(format!("projector dimensions {} and {} differ", p1.dim(), p2.dim())));
    }
    let dec = jordan_decompose(&p1, &p2, delta)?;
    let d = p1.dim();
    let star = union_from(&dec, d);
    let blocks: Vec<Value> = dec
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            json!({
                "index": k,
                "rank": b.rank(),
                "overlap": num(b.overlap),
                "label": match b.label { BlockLabel::Far => "far", BlockLabel::Near => "near" },
                "p1_rank": b.p1_restricted.rank(),
                "p2_rank": b.p2_restricted.rank(),
            })
        })
        .collect();
    let mut total = ComplexMatrix::zeros(d, d);
    for b in &dec.blocks {
        total += b.block_projector.matrix();
    }
    let resolution = max_abs(&(total - ComplexMatrix::identity(d, d)));
    let gap = hermitian_eig(&((p1.matrix() + p2.matrix()) * c64(2.0 / (delta * delta), 0.0) - star.matrix()))?.min();
    rec.check("blocks_resolve_identity", resolution <= 1e-9, format!("max |sum P_a - I| = {resolution:.3e}"));
    rec.check("operator_bound", gap >= -CHECK_SLACK, format!("min eigenvalue of (2/delta^2)(P1+P2) - P* = {gap:.3e}"));
    rec.results = json!({
        "dim": d,
        "far_count": dec.far_count(),
        "near_count": dec.near_count(),
        "union_rank": star.rank(),
        "min_gap_eigenvalue": num(gap),
        "blocks": blocks,
    });
    Ok(rec)
}
